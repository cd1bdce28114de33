#include "inr/objective.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <string>

#include "inr/error.hpp"

namespace inr {

std::string to_string(SensitivityRegularizer kind) {
  switch (kind) {
    case SensitivityRegularizer::None: return "none";
    case SensitivityRegularizer::L1Fourier: return "l1f";
    case SensitivityRegularizer::LowRank: return "lr";
    case SensitivityRegularizer::TotalVariation: return "tv";
  }
  return "none";
}

SensitivityRegularizer parse_regularizer(const std::string& name) {
  if (name == "none") return SensitivityRegularizer::None;
  if (name == "l1f") return SensitivityRegularizer::L1Fourier;
  if (name == "lr") return SensitivityRegularizer::LowRank;
  if (name == "tv") return SensitivityRegularizer::TotalVariation;
  throw InvalidParameter("unknown regularizer '" + name + "' (expected none, tv, l1f or lr)");
}

namespace {

cplx smoothed_phase(cplx z) { return z / std::sqrt(std::norm(z) + kModulusSmoothing * kModulusSmoothing); }

void require_same_grid(const CoilArray& a, const CoilArray& b, const char* what) {
  if (!a.same_shape(b)) throw InvalidInput(std::string(what) + ": shape mismatch");
}

}  // namespace

KspaceVolume forward_model(const ComplexImage& x, const CoilSensitivitySet& s, const SamplingMask& m) {
  if (s.rows() != x.rows() || s.cols() != x.cols()) throw InvalidInput("forward_model: image/sensitivity shape mismatch");
  KspaceVolume coil_images(s.coils(), x.rows(), x.cols());
  for (Index j = 0; j < s.coils(); ++j) {
    for (Index p = 0; p < x.size(); ++p) coil_images[j][p] = s[j][p] * x[p];
    coil_images[j] = fft2_centered(coil_images[j]);
  }
  return apply_mask(coil_images, m);
}

Differentiated<KspaceVolume> dc_loss(const KspaceVolume& pred, const KspaceVolume& y, const SamplingMask& m,
                                     DataNorm norm) {
  require_same_grid(pred, y, "dc_loss");
  if (pred.rows() != m.rows() || pred.cols() != m.cols()) throw InvalidInput("dc_loss: mask shape mismatch");
  Differentiated<KspaceVolume> out{0.0, KspaceVolume(pred.coils(), pred.rows(), pred.cols())};
  for (Index j = 0; j < pred.coils(); ++j) {
    for (Index p = 0; p < m.rows() * m.cols(); ++p) {
      if (!m.sampled(p)) continue;
      const cplx r = pred[j][p] - y[j][p];
      if (norm == DataNorm::L1) {
        out.value += std::abs(r);
        out.gradient[j][p] = smoothed_phase(r);
      } else {
        out.value += 0.5 * std::norm(r);
        out.gradient[j][p] = r;
      }
    }
  }
  return out;
}

Differentiated<ComplexImage> tv(const ComplexImage& img) {
  Differentiated<ComplexImage> out{0.0, ComplexImage(img.rows(), img.cols())};
  auto term = [&](Index r0, Index c0, Index r1, Index c1) {
    const cplx d = img(r1, c1) - img(r0, c0);
    out.value += std::abs(d);
    const cplx g = smoothed_phase(d);
    out.gradient(r1, c1) += g;
    out.gradient(r0, c0) -= g;
  };
  for (Index r = 0; r + 1 < img.rows(); ++r) {
    for (Index c = 0; c < img.cols(); ++c) term(r, c, r + 1, c);
  }
  for (Index r = 0; r < img.rows(); ++r) {
    for (Index c = 0; c + 1 < img.cols(); ++c) term(r, c, r, c + 1);
  }
  return out;
}

Differentiated<CoilSensitivitySet> sens_reg_l1_fourier(const CoilSensitivitySet& s) {
  Differentiated<CoilSensitivitySet> out{0.0, CoilSensitivitySet(s.coils(), s.rows(), s.cols())};
  for (Index j = 0; j < s.coils(); ++j) {
    ComplexImage spectrum = fft2_centered(s[j]);
    for (auto& z : spectrum.values()) {
      out.value += std::abs(z);
      z = smoothed_phase(z);
    }
    // The DFT is unitary, so the adjoint is its inverse.
    out.gradient[j] = ifft2_centered(spectrum);
  }
  return out;
}

Differentiated<CoilSensitivitySet> sens_reg_low_rank(const CoilSensitivitySet& s) {
  using Mat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Differentiated<CoilSensitivitySet> out{0.0, CoilSensitivitySet(s.coils(), s.rows(), s.cols())};
  for (Index j = 0; j < s.coils(); ++j) {
    const Eigen::Map<const Mat> a(s[j].data(), s.rows(), s.cols());
    Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) {
      throw NumericalError("low-rank regularizer: SVD did not converge for coil " + std::to_string(j));
    }
    out.value += svd.singularValues().sum();
    Eigen::Map<Mat> g(out.gradient[j].data(), s.rows(), s.cols());
    g.noalias() = svd.matrixU() * svd.matrixV().adjoint();
  }
  return out;
}

Differentiated<CoilSensitivitySet> sens_reg_tv(const CoilSensitivitySet& s) {
  Differentiated<CoilSensitivitySet> out{0.0, CoilSensitivitySet(s.coils(), s.rows(), s.cols())};
  for (Index j = 0; j < s.coils(); ++j) {
    auto term = tv(s[j]);
    out.value += term.value;
    out.gradient[j] = std::move(term.gradient);
  }
  return out;
}

Differentiated<CoilSensitivitySet> sens_reg(const CoilSensitivitySet& s, SensitivityRegularizer kind) {
  switch (kind) {
    case SensitivityRegularizer::L1Fourier: return sens_reg_l1_fourier(s);
    case SensitivityRegularizer::LowRank: return sens_reg_low_rank(s);
    case SensitivityRegularizer::TotalVariation: return sens_reg_tv(s);
    case SensitivityRegularizer::None: break;
  }
  return {0.0, CoilSensitivitySet(s.coils(), s.rows(), s.cols())};
}

TotalLoss total_loss(const ComplexImage& x, const CoilSensitivitySet& s, const KspaceVolume& y,
                     const SamplingMask& m, const LossWeights& weights) {
  if (weights.lambda1 < 0.0 || weights.lambda2 < 0.0) throw InvalidParameter("loss weights must be nonnegative");
  if (s.rows() != x.rows() || s.cols() != x.cols()) throw InvalidInput("total_loss: image/sensitivity shape mismatch");
  require_same_grid(s, y, "total_loss");

  const Index coils = s.coils();
  const auto pred = forward_model(x, s, m);
  auto dc = dc_loss(pred, y, m, weights.data_norm);

  TotalLoss out;
  out.grad_image = ComplexImage(x.rows(), x.cols());
  out.grad_sens = CoilSensitivitySet(coils, x.rows(), x.cols());
  for (Index j = 0; j < coils; ++j) {
    // mask and unitary DFT are linear; their adjoint is the inverse DFT of
    // the (already masked) k-space gradient.
    const ComplexImage g = ifft2_centered(dc.gradient[j]);
    for (Index p = 0; p < x.size(); ++p) {
      out.grad_image[p] += std::conj(s[j][p]) * g[p];
      out.grad_sens[j][p] = std::conj(x[p]) * g[p];
    }
  }

  const auto image_tv = tv(x);
  for (Index p = 0; p < x.size(); ++p) out.grad_image[p] += weights.lambda1 * image_tv.gradient[p];

  out.report.dc = dc.value;
  out.report.image_tv = image_tv.value;
  if (weights.lambda2 > 0.0 && weights.reg_kind != SensitivityRegularizer::None) {
    const auto reg = sens_reg(s, weights.reg_kind);
    out.sens_reg_evaluated = true;
    out.report.sens_reg = reg.value;
    for (Index j = 0; j < coils; ++j) {
      for (Index p = 0; p < x.size(); ++p) out.grad_sens[j][p] += weights.lambda2 * reg.gradient[j][p];
    }
  }
  out.report.total = out.report.dc + weights.lambda1 * out.report.image_tv + weights.lambda2 * out.report.sens_reg;
  return out;
}

}  // namespace inr

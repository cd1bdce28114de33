#include "inr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "inr/error.hpp"

namespace inr {

namespace {

void require_same_shape(const RealImage& a, const RealImage& b, const char* what) {
  if (!a.same_shape(b)) throw InvalidInput(std::string(what) + ": shape mismatch");
}

double max_value(const RealImage& img) { return *std::max_element(img.values().begin(), img.values().end()); }

// Separable "valid" filtering of img with the 1D kernel along both axes.
RealImage filter_valid(const RealImage& img, const std::vector<double>& kernel) {
  const auto w = static_cast<Index>(kernel.size());
  RealImage horiz(img.rows(), img.cols() - w + 1);
  for (Index r = 0; r < horiz.rows(); ++r) {
    for (Index c = 0; c < horiz.cols(); ++c) {
      double acc = 0.0;
      for (Index k = 0; k < w; ++k) acc += kernel[static_cast<std::size_t>(k)] * img(r, c + k);
      horiz(r, c) = acc;
    }
  }
  RealImage out(img.rows() - w + 1, horiz.cols());
  for (Index r = 0; r < out.rows(); ++r) {
    for (Index c = 0; c < out.cols(); ++c) {
      double acc = 0.0;
      for (Index k = 0; k < w; ++k) acc += kernel[static_cast<std::size_t>(k)] * horiz(r + k, c);
      out(r, c) = acc;
    }
  }
  return out;
}

}  // namespace

double rlne(const RealImage& recon, const RealImage& ref) {
  require_same_shape(recon, ref, "rlne");
  double err = 0.0;
  double norm = 0.0;
  for (Index p = 0; p < ref.size(); ++p) {
    const double d = recon[p] - ref[p];
    err += d * d;
    norm += ref[p] * ref[p];
  }
  if (!(norm > 0.0)) throw InvalidInput("rlne: reference is all zero");
  return std::sqrt(err / norm);
}

double psnr(const RealImage& recon, const RealImage& ref) {
  require_same_shape(recon, ref, "psnr");
  double sq = 0.0;
  for (Index p = 0; p < ref.size(); ++p) sq += (recon[p] - ref[p]) * (recon[p] - ref[p]);
  if (sq == 0.0) return std::numeric_limits<double>::infinity();
  const double rmse = std::sqrt(sq / static_cast<double>(ref.size()));
  return 20.0 * std::log10(max_value(ref) / rmse);
}

double ssim(const RealImage& recon, const RealImage& ref, const SsimParams& params) {
  require_same_shape(recon, ref, "ssim");
  if (recon.rows() < params.window || recon.cols() < params.window) {
    throw InvalidInput("ssim: image smaller than the " + std::to_string(params.window) + "-pixel window");
  }
  const double peak = max_value(ref);
  if (!(peak > 0.0)) throw InvalidInput("ssim: reference maximum must be positive");

  std::vector<double> kernel(static_cast<std::size_t>(params.window));
  const double centre = (params.window - 1) / 2.0;
  double total = 0.0;
  for (int k = 0; k < params.window; ++k) {
    const double d = k - centre;
    kernel[static_cast<std::size_t>(k)] = std::exp(-d * d / (2.0 * params.sigma * params.sigma));
    total += kernel[static_cast<std::size_t>(k)];
  }
  for (auto& v : kernel) v /= total;

  RealImage x(ref.rows(), ref.cols());
  RealImage y(ref.rows(), ref.cols());
  RealImage xx(ref.rows(), ref.cols());
  RealImage yy(ref.rows(), ref.cols());
  RealImage xy(ref.rows(), ref.cols());
  for (Index p = 0; p < ref.size(); ++p) {
    x[p] = recon[p] / peak;
    y[p] = ref[p] / peak;
    xx[p] = x[p] * x[p];
    yy[p] = y[p] * y[p];
    xy[p] = x[p] * y[p];
  }
  const RealImage mx = filter_valid(x, kernel);
  const RealImage my = filter_valid(y, kernel);
  const RealImage sxx = filter_valid(xx, kernel);
  const RealImage syy = filter_valid(yy, kernel);
  const RealImage sxy = filter_valid(xy, kernel);

  const double c1 = params.k1 * params.k1;
  const double c2 = params.k2 * params.k2;
  double sum = 0.0;
  for (Index p = 0; p < mx.size(); ++p) {
    const double vx = sxx[p] - mx[p] * mx[p];
    const double vy = syy[p] - my[p] * my[p];
    const double cov = sxy[p] - mx[p] * my[p];
    sum += ((2.0 * mx[p] * my[p] + c1) * (2.0 * cov + c2)) /
           ((mx[p] * mx[p] + my[p] * my[p] + c1) * (vx + vy + c2));
  }
  return sum / static_cast<double>(mx.size());
}

MetricReport evaluate_metrics(const RealImage& recon, const RealImage& ref) {
  return {psnr(recon, ref), ssim(recon, ref), rlne(recon, ref)};
}

}  // namespace inr

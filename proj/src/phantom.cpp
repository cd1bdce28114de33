#include "inr/phantom.hpp"

#include <cmath>
#include <numbers>

#include "inr/error.hpp"
#include "inr/rng.hpp"

namespace inr {

namespace {

double norm_u(Index c, Index cols) { return (static_cast<double>(c) + 0.5 - cols / 2.0) / (cols / 2.0); }
double norm_v(Index r, Index rows) { return (static_cast<double>(r) + 0.5 - rows / 2.0) / (rows / 2.0); }

RealImage blur(const RealImage& img, double sigma) {
  if (sigma <= 0.0) return img;
  const auto radius = static_cast<Index>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double total = 0.0;
  for (Index k = -radius; k <= radius; ++k) {
    const double w = std::exp(-0.5 * static_cast<double>(k * k) / (sigma * sigma));
    kernel[static_cast<std::size_t>(k + radius)] = w;
    total += w;
  }
  for (auto& w : kernel) w /= total;
  // Clamped borders keep constant regions constant.
  auto clamp = [](Index i, Index n) { return std::min(std::max(i, Index{0}), n - 1); };
  RealImage tmp(img.rows(), img.cols());
  for (Index r = 0; r < img.rows(); ++r) {
    for (Index c = 0; c < img.cols(); ++c) {
      double acc = 0.0;
      for (Index k = -radius; k <= radius; ++k) acc += kernel[static_cast<std::size_t>(k + radius)] * img(r, clamp(c + k, img.cols()));
      tmp(r, c) = acc;
    }
  }
  RealImage out(img.rows(), img.cols());
  for (Index r = 0; r < img.rows(); ++r) {
    for (Index c = 0; c < img.cols(); ++c) {
      double acc = 0.0;
      for (Index k = -radius; k <= radius; ++k) acc += kernel[static_cast<std::size_t>(k + radius)] * tmp(clamp(r + k, img.rows()), c);
      out(r, c) = acc;
    }
  }
  return out;
}

}  // namespace

PhantomSpec PhantomSpec::head(Index rows, Index cols, Index coils) {
  PhantomSpec spec;
  spec.rows = rows;
  spec.cols = cols;
  spec.coils = coils;
  spec.ellipses = {
      {0.0, 0.0, 0.69, 0.92, 0.0, 0.3},          {0.0, -0.0184, 0.6624, 0.874, 0.0, 0.3},
      {0.22, 0.0, 0.11, 0.31, -18.0, 0.2},       {-0.22, 0.0, 0.16, 0.41, 18.0, 0.2},
      {0.0, 0.35, 0.21, 0.25, 0.0, 0.1},         {0.0, 0.1, 0.046, 0.046, 0.0, 0.3},
      {0.0, -0.1, 0.046, 0.046, 0.0, 0.3},       {-0.08, -0.605, 0.046, 0.023, 0.0, 0.3},
      {0.0, -0.606, 0.023, 0.023, 0.0, 0.3},     {0.06, -0.605, 0.023, 0.046, 0.0, 0.3},
  };
  return spec;
}

ComplexImage make_phantom(const PhantomSpec& spec) {
  if (spec.rows < 1 || spec.cols < 1) throw InvalidParameter("phantom: empty grid");
  RealImage magnitude(spec.rows, spec.cols);
  for (const auto& e : spec.ellipses) {
    if (e.intensity < 0.0 || e.intensity > 1.0) throw InvalidParameter("phantom: ellipse intensity outside [0, 1]");
    const double a = e.angle * std::numbers::pi / 180.0;
    const double ca = std::cos(a);
    const double sa = std::sin(a);
    for (Index r = 0; r < spec.rows; ++r) {
      for (Index c = 0; c < spec.cols; ++c) {
        const double du = norm_u(c, spec.cols) - e.cu;
        const double dv = norm_v(r, spec.rows) - e.cv;
        const double pu = (ca * du + sa * dv) / e.au;
        const double pv = (-sa * du + ca * dv) / e.av;
        if (pu * pu + pv * pv <= 1.0) magnitude(r, c) += e.intensity;
      }
    }
  }
  magnitude = blur(magnitude, spec.blur_sigma);

  ComplexImage out(spec.rows, spec.cols);
  for (Index r = 0; r < spec.rows; ++r) {
    for (Index c = 0; c < spec.cols; ++c) {
      const double u = norm_u(c, spec.cols);
      const double v = norm_v(r, spec.rows);
      const double phase = spec.phase_strength * (0.7 * u - 0.5 * v + 0.4 * u * v);
      out(r, c) = std::polar(magnitude(r, c), phase);
    }
  }
  return out;
}

CoilSensitivitySet make_coils(const PhantomSpec& spec) {
  if (spec.coils < 1) throw InvalidParameter("phantom: at least one coil is required");
  if (!(spec.coil_width > 0.0)) throw InvalidParameter("phantom: coil width must be positive");
  CoilSensitivitySet maps(spec.coils, spec.rows, spec.cols);
  for (Index j = 0; j < spec.coils; ++j) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(spec.coils);
    const double dir_u = std::cos(theta);
    const double dir_v = std::sin(theta);
    const double cu = spec.ring_radius * dir_u;
    const double cv = spec.ring_radius * dir_v;
    for (Index r = 0; r < spec.rows; ++r) {
      for (Index c = 0; c < spec.cols; ++c) {
        const double u = norm_u(c, spec.cols);
        const double v = norm_v(r, spec.rows);
        const double d2 = (u - cu) * (u - cu) + (v - cv) * (v - cv);
        const double mag = std::exp(-0.5 * d2 / (spec.coil_width * spec.coil_width));
        const double phase = theta + spec.coil_phase_slope * (u * dir_u + v * dir_v);
        maps[j](r, c) = std::polar(mag, phase);
      }
    }
  }
  return maps;
}

Acquisition simulate_acquisition(const ComplexImage& phantom, const CoilSensitivitySet& coils, const SamplingMask& mask,
                                 double noise_sigma, std::uint64_t seed) {
  if (coils.rows() != phantom.rows() || coils.cols() != phantom.cols()) throw InvalidInput("simulate: coil/phantom shape mismatch");
  if (mask.rows() != phantom.rows() || mask.cols() != phantom.cols()) throw InvalidInput("simulate: mask shape mismatch");
  if (noise_sigma < 0.0) throw InvalidParameter("simulate: noise sigma must be nonnegative");

  Acquisition acq;
  acq.full = KspaceVolume(coils.coils(), phantom.rows(), phantom.cols());
  for (Index j = 0; j < coils.coils(); ++j) {
    ComplexImage img(phantom.rows(), phantom.cols());
    for (Index p = 0; p < img.size(); ++p) img[p] = coils[j][p] * phantom[p];
    acq.full[j] = fft2_centered(img);
  }
  double dc = 0.0;
  for (const auto& k : acq.full) dc = std::max(dc, std::abs(k(k.rows() / 2, k.cols() / 2)));
  acq.noise_std = noise_sigma * dc;

  KspaceVolume noisy = acq.full;
  if (acq.noise_std > 0.0) {
    Xoshiro256 rng(seed);
    const double component = acq.noise_std / std::sqrt(2.0);
    for (auto& k : noisy) {
      for (auto& z : k.values()) {
        const double re = rng.normal();
        const double im = rng.normal();
        z += cplx{component * re, component * im};
      }
    }
  }
  acq.undersampled = apply_mask(noisy, mask);
  return acq;
}

}  // namespace inr

#pragma once

#include "inr/kspace.hpp"

namespace inr {

struct MetricReport {
  double psnr = 0.0;
  double ssim = 0.0;
  double rlne = 0.0;
};

/// ||recon - ref||_2 / ||ref||_2.
double rlne(const RealImage& recon, const RealImage& ref);

/// 20 log10(max(ref) / RMSE); +infinity on an exact match.
double psnr(const RealImage& recon, const RealImage& ref);

struct SsimParams {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
};

/// Mean SSIM over every full window position (no padding), after dividing
/// both images by max(ref) so the dynamic range is 1.
double ssim(const RealImage& recon, const RealImage& ref, const SsimParams& params = {});

MetricReport evaluate_metrics(const RealImage& recon, const RealImage& ref);

}  // namespace inr

#pragma once

#include <string>

#include "inr/kspace.hpp"
#include "inr/sampling.hpp"

namespace inr {

enum class SensitivityRegularizer { None, L1Fourier, LowRank, TotalVariation };

/// Data-fidelity norm. L1 is the trained objective; SquaredL2 (with the 1/2
/// factor) is kept for ablations.
enum class DataNorm { L1, SquaredL2 };

std::string to_string(SensitivityRegularizer kind);
SensitivityRegularizer parse_regularizer(const std::string& name);

struct LossWeights {
  // Tuned on the shipped 64x64 phantom (noise 0.5% of DC, R=5); data-dependent.
  double lambda1 = 0.05;
  double lambda2 = 0.05;
  SensitivityRegularizer reg_kind = SensitivityRegularizer::TotalVariation;
  DataNorm data_norm = DataNorm::L1;
};

struct LossReport {
  double dc = 0.0;
  double image_tv = 0.0;
  double sens_reg = 0.0;
  double total = 0.0;
};

/// Smoothing for |z| inside gradients: z / sqrt(|z|^2 + eps^2).
inline constexpr double kModulusSmoothing = 1e-8;

/// Loss value plus its gradient with respect to a complex argument, stored
/// as dL/dRe + i dL/dIm per entry.
template <typename T>
struct Differentiated {
  double value = 0.0;
  T gradient;
};

/// Per coil: mask(fft2(s_j * x)).
KspaceVolume forward_model(const ComplexImage& x, const CoilSensitivitySet& s, const SamplingMask& m);

/// Sum of moduli (or half squared moduli) of y - pred over sampled entries.
Differentiated<KspaceVolume> dc_loss(const KspaceVolume& pred, const KspaceVolume& y, const SamplingMask& m,
                                     DataNorm norm = DataNorm::L1);

/// Anisotropic total variation with forward differences and no wraparound.
Differentiated<ComplexImage> tv(const ComplexImage& img);

Differentiated<CoilSensitivitySet> sens_reg_l1_fourier(const CoilSensitivitySet& s);
Differentiated<CoilSensitivitySet> sens_reg_low_rank(const CoilSensitivitySet& s);
Differentiated<CoilSensitivitySet> sens_reg_tv(const CoilSensitivitySet& s);

Differentiated<CoilSensitivitySet> sens_reg(const CoilSensitivitySet& s, SensitivityRegularizer kind);

struct TotalLoss {
  LossReport report;
  ComplexImage grad_image;
  CoilSensitivitySet grad_sens;
  bool sens_reg_evaluated = false;
};

/// dc + lambda1 * tv(x) + lambda2 * R(s). The regularizer is skipped, and
/// reported as 0, when lambda2 is 0 or the kind is None.
TotalLoss total_loss(const ComplexImage& x, const CoilSensitivitySet& s, const KspaceVolume& y,
                     const SamplingMask& m, const LossWeights& weights);

}  // namespace inr

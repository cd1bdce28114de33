#pragma once

#include "inr/recon_model.hpp"
#include "inr/sampling.hpp"

namespace inr {

struct ReconResult {
  CoilArray coil_images;
  RealImage combined;
  CoilSensitivitySet sensitivities;
  KspaceVolume kspace_final;
  /// Model coil images S_j * X before data consistency, in acquisition units.
  CoilArray model_coil_images;
  double scale = 1.0;
};

/// Hard data consistency. Per coil, K_j = complement(fft2(S_j * X)) * scale
/// + Y_j with Y the measured (un-normalized, zero-filled) k-space; coil
/// images are ifft2(K_j) and `combined` is their SOS. `scale` undoes the
/// normalization the networks were trained under.
ReconResult reconstruct(const ReconModel& model, const KspaceVolume& measured, const SamplingMask& m, double scale);

/// Same, from already-evaluated network outputs.
ReconResult reconstruct(const ComplexImage& x, const CoilSensitivitySet& s, const KspaceVolume& measured,
                        const SamplingMask& m, double scale);

/// gain * |recon - reference| clipped to [0, 1].
RealImage export_error_map(const RealImage& recon, const RealImage& reference, double gain = 5.0);

}  // namespace inr

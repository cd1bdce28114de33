#include "inr/inference.hpp"

#include <algorithm>
#include <cmath>

#include "inr/error.hpp"

namespace inr {

ReconResult reconstruct(const ReconModel& model, const KspaceVolume& measured, const SamplingMask& m, double scale) {
  const auto [x, s] = evaluate(model);
  return reconstruct(x, s, measured, m, scale);
}

ReconResult reconstruct(const ComplexImage& x, const CoilSensitivitySet& s, const KspaceVolume& measured,
                        const SamplingMask& m, double scale) {
  if (s.rows() != x.rows() || s.cols() != x.cols() || !s.same_shape(measured)) {
    throw InvalidInput("reconstruct: model output does not match the measured k-space");
  }
  if (measured.rows() != m.rows() || measured.cols() != m.cols()) throw InvalidInput("reconstruct: mask shape mismatch");
  if (!(scale > 0.0)) throw InvalidParameter("reconstruct: scale must be positive");

  ReconResult r;
  r.scale = scale;
  r.sensitivities = s;
  r.model_coil_images = CoilArray(s.coils(), s.rows(), s.cols());
  KspaceVolume predicted(s.coils(), s.rows(), s.cols());
  for (Index j = 0; j < s.coils(); ++j) {
    for (Index p = 0; p < x.size(); ++p) r.model_coil_images[j][p] = s[j][p] * x[p] * scale;
    predicted[j] = fft2_centered(r.model_coil_images[j]);
  }
  r.kspace_final = apply_complement(predicted, m);
  r.kspace_final.scale = 1.0;
  for (Index j = 0; j < s.coils(); ++j) {
    for (Index p = 0; p < x.size(); ++p) {
      if (m.sampled(p)) r.kspace_final[j][p] = measured[j][p];
    }
  }
  r.coil_images = ifft2_centered(r.kspace_final);
  r.combined = sos_combine(r.coil_images);
  return r;
}

RealImage export_error_map(const RealImage& recon, const RealImage& reference, double gain) {
  if (!recon.same_shape(reference)) throw InvalidInput("error map: shape mismatch");
  RealImage out(recon.rows(), recon.cols());
  for (Index p = 0; p < out.size(); ++p) out[p] = std::clamp(gain * std::abs(recon[p] - reference[p]), 0.0, 1.0);
  return out;
}

}  // namespace inr

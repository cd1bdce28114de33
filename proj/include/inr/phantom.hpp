#pragma once

#include <cstdint>
#include <vector>

#include "inr/kspace.hpp"
#include "inr/sampling.hpp"

namespace inr {

/// Ellipse in normalized coordinates: the grid spans [-1, 1] on both axes,
/// u along columns and v along rows. `angle` is in degrees.
struct Ellipse {
  double cu = 0.0;
  double cv = 0.0;
  double au = 0.5;
  double av = 0.5;
  double angle = 0.0;
  double intensity = 1.0;
};

struct PhantomSpec {
  Index rows = 64;
  Index cols = 64;
  Index coils = 4;
  std::vector<Ellipse> ellipses;
  /// Coil centres sit on a circle of this radius (normalized units).
  double ring_radius = 1.2;
  /// Standard deviation of each coil's Gaussian magnitude falloff.
  double coil_width = 0.8;
  /// Linear phase slope of each coil along its own direction (rad per unit).
  double coil_phase_slope = 0.6;
  /// Amplitude (rad) of the smooth object phase.
  double phase_strength = 0.5;
  /// Standard deviation of the edge-softening blur, in pixels.
  double blur_sigma = 0.6;
  std::uint64_t seed = 0;

  /// Head-like layout of ten ellipses with intensities summing to at most 1.
  static PhantomSpec head(Index rows, Index cols, Index coils);
};

ComplexImage make_phantom(const PhantomSpec& spec);
CoilSensitivitySet make_coils(const PhantomSpec& spec);

struct Acquisition {
  KspaceVolume undersampled;
  /// Noiseless, fully sampled k-space for reference images.
  KspaceVolume full;
  /// Absolute standard deviation of the complex noise that was added.
  double noise_std = 0.0;
};

/// Y_j = mask(fft2(coil_j * phantom) + n_j) with complex Gaussian noise of
/// standard deviation noise_sigma * max_j |DC_j| (split evenly between the
/// real and imaginary parts). Noise is drawn for every entry in a fixed
/// order, so different masks see the same noise at shared locations.
Acquisition simulate_acquisition(const ComplexImage& phantom, const CoilSensitivitySet& coils, const SamplingMask& mask,
                                 double noise_sigma, std::uint64_t seed);

}  // namespace inr

#pragma once

#include <cstdint>
#include <utility>

#include "inr/embedding.hpp"
#include "inr/kspace.hpp"
#include "inr/siren.hpp"

namespace inr {

/// Architecture shared by the image and sensitivity networks.
struct NetworkConfig {
  Index hidden = 256;
  Index hidden_layers = 6;
  Index embed_size = 256;
  double sigma = 10.0;
  double w0_image = kDefaultW0;
  double w0_sens = kDefaultW0;
  /// One Fourier feature map feeds both networks; when false the
  /// sensitivity network gets an independent draw.
  bool shared_embedding = true;
};

/// The two coordinate networks and their embeddings for one H x W scan.
struct ReconModel {
  Index rows = 0;
  Index cols = 0;
  Index coils = 0;
  FourierFeatureMap image_features;
  FourierFeatureMap sens_features;
  SirenModel image_net;
  SirenModel sens_net;

  /// Freshly initialized networks; all randomness derives from `seed`.
  static ReconModel create(Index rows, Index cols, Index coils, const NetworkConfig& cfg, std::uint64_t seed);

  bool shared_embedding() const { return image_features == sens_features; }
};

/// Image network output (2 x P) to a complex H x W image.
ComplexImage image_from_output(const Matrix& out, Index rows, Index cols);
/// Sensitivity network output (2N x P, real/imag interleaved per coil).
CoilSensitivitySet sensitivities_from_output(const Matrix& out, Index coils, Index rows, Index cols);

Matrix image_upstream(const ComplexImage& grad, Index padded_cols);
Matrix sensitivity_upstream(const CoilSensitivitySet& grad, Index padded_cols);

/// Evaluates both networks on the full grid.
std::pair<ComplexImage, CoilSensitivitySet> evaluate(const ReconModel& model);

}  // namespace inr

#include "inr/recon_model.hpp"

#include "inr/error.hpp"
#include "inr/rng.hpp"

namespace inr {

ReconModel ReconModel::create(Index rows, Index cols, Index coils, const NetworkConfig& cfg, std::uint64_t seed) {
  if (coils < 1) throw InvalidParameter("model needs at least one coil");
  ReconModel m;
  m.rows = rows;
  m.cols = cols;
  m.coils = coils;
  m.image_features = FourierFeatureMap(cfg.embed_size, cfg.sigma, derive_seed(seed, SeedStream::Embedding));
  m.sens_features = cfg.shared_embedding
                        ? m.image_features
                        : FourierFeatureMap(cfg.embed_size, cfg.sigma, derive_seed(seed, SeedStream::SensitivityEmbedding));
  const SirenDims image_dims{2 * cfg.embed_size, cfg.hidden, cfg.hidden_layers, 2};
  const SirenDims sens_dims{2 * cfg.embed_size, cfg.hidden, cfg.hidden_layers, 2 * coils};
  m.image_net = SirenModel::init(image_dims, cfg.w0_image, derive_seed(seed, SeedStream::ImageNet));
  m.sens_net = SirenModel::init(sens_dims, cfg.w0_sens, derive_seed(seed, SeedStream::SensitivityNet));
  return m;
}

ComplexImage image_from_output(const Matrix& out, Index rows, Index cols) {
  if (out.rows() != 2 || out.cols() < rows * cols) throw InvalidInput("image output has the wrong shape");
  ComplexImage img(rows, cols);
  for (Index p = 0; p < rows * cols; ++p) img[p] = {out(0, p), out(1, p)};
  return img;
}

CoilSensitivitySet sensitivities_from_output(const Matrix& out, Index coils, Index rows, Index cols) {
  if (out.rows() != 2 * coils || out.cols() < rows * cols) throw InvalidInput("sensitivity output has the wrong shape");
  CoilSensitivitySet s(coils, rows, cols);
  for (Index j = 0; j < coils; ++j) {
    for (Index p = 0; p < rows * cols; ++p) s[j][p] = {out(2 * j, p), out(2 * j + 1, p)};
  }
  return s;
}

Matrix image_upstream(const ComplexImage& grad, Index padded_cols) {
  Matrix up(2, padded_cols);
  for (Index p = 0; p < grad.size(); ++p) {
    up(0, p) = grad[p].real();
    up(1, p) = grad[p].imag();
  }
  return up;
}

Matrix sensitivity_upstream(const CoilSensitivitySet& grad, Index padded_cols) {
  Matrix up(2 * grad.coils(), padded_cols);
  for (Index j = 0; j < grad.coils(); ++j) {
    for (Index p = 0; p < grad.rows() * grad.cols(); ++p) {
      up(2 * j, p) = grad[j][p].real();
      up(2 * j + 1, p) = grad[j][p].imag();
    }
  }
  return up;
}

std::pair<ComplexImage, CoilSensitivitySet> evaluate(const ReconModel& model) {
  const auto grid = make_grid(model.rows, model.cols);
  const Matrix gamma_image = model.image_features.embed(grid);
  const Matrix x_out = forward(model.image_net, gamma_image);
  const Matrix s_out = model.shared_embedding() ? forward(model.sens_net, gamma_image)
                                                : forward(model.sens_net, model.sens_features.embed(grid));
  return {image_from_output(x_out, model.rows, model.cols),
          sensitivities_from_output(s_out, model.coils, model.rows, model.cols)};
}

}  // namespace inr

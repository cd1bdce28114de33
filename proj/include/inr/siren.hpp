#pragma once

#include <cstdint>
#include <vector>

#include "inr/dense.hpp"

namespace inr {

/// Layer sizes of a sine network: an input layer in_dim -> hidden, then
/// `hidden_layers` layers hidden -> hidden, then a linear output layer.
struct SirenDims {
  Index in_dim = 0;
  Index hidden = 256;
  Index hidden_layers = 6;
  Index out_dim = 2;

  Index linear_layers() const { return hidden_layers + 2; }
  Index layer_in(Index l) const { return l == 0 ? in_dim : hidden; }
  Index layer_out(Index l) const { return l == linear_layers() - 1 ? out_dim : hidden; }
  Index parameter_count() const;

  friend bool operator==(const SirenDims&, const SirenDims&) = default;
};

inline constexpr double kDefaultW0 = 30.0;

/// Parameters of one network, stored flat: per layer the row-major
/// (out x in) weight matrix followed by its bias.
class SirenModel {
 public:
  SirenModel() = default;
  SirenModel(SirenDims dims, double w0, std::uint64_t seed, std::vector<double> params);

  /// First layer ~ U(-1/fan_in, 1/fan_in); later layers
  /// ~ U(-sqrt(6/fan_in)/w0, sqrt(6/fan_in)/w0); zero biases.
  static SirenModel init(const SirenDims& dims, double w0, std::uint64_t seed);

  const SirenDims& dims() const { return dims_; }
  double w0() const { return w0_; }
  std::uint64_t seed() const { return seed_; }

  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  Index weight_offset(Index layer) const { return offsets_[static_cast<std::size_t>(layer)]; }
  Index bias_offset(Index layer) const {
    return weight_offset(layer) + dims_.layer_out(layer) * dims_.layer_in(layer);
  }
  const double* weights(Index layer) const { return params_.data() + weight_offset(layer); }
  const double* bias(Index layer) const { return params_.data() + bias_offset(layer); }
  double* weights(Index layer) { return params_.data() + weight_offset(layer); }
  double* bias(Index layer) { return params_.data() + bias_offset(layer); }

  friend bool operator==(const SirenModel&, const SirenModel&) = default;

 private:
  SirenDims dims_;
  double w0_ = kDefaultW0;
  std::uint64_t seed_ = 0;
  std::vector<double> params_;
  std::vector<Index> offsets_;
};

/// Intermediates kept by forward() for backward().
struct SirenTape {
  const Matrix* input = nullptr;
  std::vector<Matrix> activations;  // sin(w0 z) of each sine layer
  std::vector<Matrix> derivatives;  // w0 cos(w0 z) of each sine layer
};

/// d(loss)/d(parameter), laid out like SirenModel::params().
struct GradientBuffer {
  std::vector<double> values;

  void zero() { std::fill(values.begin(), values.end(), 0.0); }
};

/// Output has out_dim rows and one column per input column. `input` must
/// outlive `tape`.
Matrix forward(const SirenModel& model, const Matrix& input, SirenTape* tape = nullptr);

/// Evaluates in column chunks of `chunk` pixels (a multiple of kPixelBlock);
/// identical to the single-pass result.
Matrix forward_chunked(const SirenModel& model, const Matrix& input, Index chunk);

/// Reverse pass; `upstream` is d(loss)/d(output) with forward()'s shape.
GradientBuffer backward(const SirenModel& model, const SirenTape& tape, const Matrix& upstream);

/// Recomputes the forward intermediates, then runs the reverse pass.
GradientBuffer backward(const SirenModel& model, const Matrix& input, const Matrix& upstream);

}  // namespace inr

#include "inr/siren.hpp"

#include <cmath>
#include <string>

#include "activation.hpp"
#include "inr/error.hpp"
#include "inr/rng.hpp"

namespace inr {

Index SirenDims::parameter_count() const {
  Index n = 0;
  for (Index l = 0; l < linear_layers(); ++l) n += layer_out(l) * (layer_in(l) + 1);
  return n;
}

SirenModel::SirenModel(SirenDims dims, double w0, std::uint64_t seed, std::vector<double> params)
    : dims_(dims), w0_(w0), seed_(seed), params_(std::move(params)) {
  if (dims_.in_dim < 1 || dims_.hidden < 1 || dims_.hidden_layers < 0 || dims_.out_dim < 1) {
    throw InvalidParameter("siren: invalid layer dimensions");
  }
  if (static_cast<Index>(params_.size()) != dims_.parameter_count()) {
    throw InvalidInput("siren: parameter count does not match dimensions");
  }
  Index off = 0;
  for (Index l = 0; l < dims_.linear_layers(); ++l) {
    offsets_.push_back(off);
    off += dims_.layer_out(l) * (dims_.layer_in(l) + 1);
  }
}

SirenModel SirenModel::init(const SirenDims& dims, double w0, std::uint64_t seed) {
  if (!(w0 > 0.0)) throw InvalidParameter("siren: w0 must be positive");
  SirenModel model(dims, w0, seed, std::vector<double>(static_cast<std::size_t>(dims.parameter_count()), 0.0));
  Xoshiro256 rng(seed);
  for (Index l = 0; l < dims.linear_layers(); ++l) {
    const auto fan_in = static_cast<double>(dims.layer_in(l));
    const double bound = l == 0 ? 1.0 / fan_in : std::sqrt(6.0 / fan_in) / w0;
    double* w = model.weights(l);
    for (Index i = 0; i < dims.layer_out(l) * dims.layer_in(l); ++i) w[i] = rng.uniform(-bound, bound);
  }
  return model;
}

namespace {

void check_input(const SirenModel& model, const Matrix& input) {
  if (input.rows() != model.dims().in_dim) {
    throw InvalidInput("siren: input has " + std::to_string(input.rows()) + " features, model expects " +
                       std::to_string(model.dims().in_dim));
  }
  if (input.cols() % kPixelBlock != 0) throw InvalidInput("siren: input columns must be padded");
}

void add_bias(const double* bias, Matrix& z) {
  for (Index r = 0; r < z.rows(); ++r) {
    double* row = z.row(r);
    for (Index p = 0; p < z.cols(); ++p) row[p] += bias[r];
  }
}

}  // namespace

Matrix forward(const SirenModel& model, const Matrix& input, SirenTape* tape) {
  check_input(model, input);
  for (double v : model.params()) {
    if (!std::isfinite(v)) throw NumericalError("siren: non-finite parameter");
  }
  const auto& dims = model.dims();
  const Index n = input.cols();
  const double w0 = model.w0();
  if (tape) {
    tape->input = &input;
    tape->activations.clear();
    tape->derivatives.clear();
  }

  Matrix current;
  const Matrix* a = &input;
  for (Index l = 0; l < dims.linear_layers(); ++l) {
    Matrix z(dims.layer_out(l), n);
    gemm_nn(model.weights(l), dims.layer_out(l), dims.layer_in(l), a->data(), n, z.data());
    add_bias(model.bias(l), z);
    if (l == dims.linear_layers() - 1) return z;

    Matrix deriv(z.rows(), n);
    detail::sine_activation(z.data(), deriv.data(), z.rows() * n, w0);
    if (tape) {
      tape->activations.push_back(std::move(z));
      tape->derivatives.push_back(std::move(deriv));
      a = &tape->activations.back();
    } else {
      current = std::move(z);
      a = &current;
    }
  }
  return {};
}

Matrix forward_chunked(const SirenModel& model, const Matrix& input, Index chunk) {
  check_input(model, input);
  if (chunk < 1 || chunk % kPixelBlock != 0) throw InvalidParameter("siren: chunk must be a multiple of the pixel block");
  Matrix out(model.dims().out_dim, input.cols());
  for (Index p0 = 0; p0 < input.cols(); p0 += chunk) {
    const Index width = std::min(chunk, input.cols() - p0);
    Matrix part(input.rows(), width);
    for (Index r = 0; r < input.rows(); ++r) {
      std::copy(input.row(r) + p0, input.row(r) + p0 + width, part.row(r));
    }
    const Matrix y = forward(model, part);
    for (Index r = 0; r < y.rows(); ++r) std::copy(y.row(r), y.row(r) + width, out.row(r) + p0);
  }
  return out;
}

GradientBuffer backward(const SirenModel& model, const SirenTape& tape, const Matrix& upstream) {
  const auto& dims = model.dims();
  if (!tape.input || static_cast<Index>(tape.activations.size()) != dims.linear_layers() - 1) {
    throw InvalidInput("siren: tape does not come from a forward pass of this model");
  }
  const Index n = tape.input->cols();
  if (upstream.rows() != dims.out_dim || upstream.cols() != n) throw InvalidInput("siren: upstream shape mismatch");

  GradientBuffer grad{std::vector<double>(model.params().size(), 0.0)};
  Matrix g = upstream;
  for (Index l = dims.linear_layers() - 1; l >= 0; --l) {
    const Index out = dims.layer_out(l);
    const Index in = dims.layer_in(l);
    const Matrix& a = l == 0 ? *tape.input : tape.activations[static_cast<std::size_t>(l - 1)];
    gemm_nt(g.data(), out, n, a.data(), in, grad.values.data() + model.weight_offset(l));
    row_sums(g.data(), out, n, grad.values.data() + model.bias_offset(l));
    if (l == 0) break;

    std::vector<double> wt(static_cast<std::size_t>(in * out));
    const double* w = model.weights(l);
    for (Index r = 0; r < out; ++r) {
      for (Index c = 0; c < in; ++c) wt[static_cast<std::size_t>(c * out + r)] = w[r * in + c];
    }
    Matrix ga(in, n);
    gemm_nn(wt.data(), in, out, g.data(), n, ga.data());
    const Matrix& d = tape.derivatives[static_cast<std::size_t>(l - 1)];
    for (Index i = 0; i < in * n; ++i) ga.data()[i] *= d.data()[i];
    g = std::move(ga);
  }
  return grad;
}

GradientBuffer backward(const SirenModel& model, const Matrix& input, const Matrix& upstream) {
  SirenTape tape;
  forward(model, input, &tape);
  return backward(model, tape, upstream);
}

}  // namespace inr

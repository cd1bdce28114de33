#include "inr/trainer.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "inr/error.hpp"

namespace inr {

void adam_step(std::vector<double>& params, const std::vector<double>& grads, AdamState& state) {
  if (grads.size() != params.size() || state.m.size() != params.size() || state.v.size() != params.size()) {
    throw InvalidInput("adam_step: parameter, gradient and moment sizes differ");
  }
  for (std::size_t i = 0; i < grads.size(); ++i) {
    if (!std::isfinite(grads[i])) {
      std::ostringstream msg;
      msg << "adam_step: non-finite gradient " << grads[i] << " at parameter " << i << " (step " << state.t + 1 << ")";
      throw NumericalError(msg.str());
    }
  }
  ++state.t;
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
    const double m_hat = state.m[i] / c1;
    const double v_hat = state.v[i] / c2;
    params[i] -= state.lr * m_hat / (std::sqrt(v_hat) + state.eps);
  }
}

namespace {

void check_finite(const LossReport& r, int iter) {
  auto fail = [&](const char* term, double v) {
    std::ostringstream msg;
    msg << "non-finite " << term << " loss (" << v << ") at iteration " << iter;
    throw NumericalError(msg.str());
  };
  if (!std::isfinite(r.dc)) fail("data-consistency", r.dc);
  if (!std::isfinite(r.image_tv)) fail("image TV", r.image_tv);
  if (!std::isfinite(r.sens_reg)) fail("sensitivity regularizer", r.sens_reg);
  if (!std::isfinite(r.total)) fail("total", r.total);
}

void check_finite(const Matrix& out, const char* net, int iter) {
  for (double v : out.storage()) {
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "non-finite " << net << " network output at iteration " << iter;
      throw NumericalError(msg.str());
    }
  }
}

}  // namespace

FitResult fit(const KspaceVolume& y, const SamplingMask& m, const TrainConfig& cfg) {
  return fit(ReconModel::create(y.rows(), y.cols(), y.coils(), cfg.network, cfg.seed), y, m, cfg);
}

FitResult fit(ReconModel model, const KspaceVolume& y, const SamplingMask& m, const TrainConfig& cfg) {
  if (cfg.iters < 1) throw InvalidParameter("iters must be at least 1");
  if (!(cfg.lr > 0.0)) throw InvalidParameter("learning rate must be positive");
  if (y.rows() != m.rows() || y.cols() != m.cols()) throw InvalidInput("k-space and mask dimensions differ");
  if (model.rows != y.rows() || model.cols != y.cols() || model.coils != y.coils()) {
    throw InvalidInput("model was built for a different k-space shape");
  }
  if (!all_finite(y)) throw InvalidInput("k-space contains non-finite values");

  const Index rows = y.rows();
  const Index cols = y.cols();
  const auto grid = make_grid(rows, cols);
  const Matrix gamma_image = model.image_features.embed(grid);
  const bool shared = model.shared_embedding();
  const Matrix gamma_sens = shared ? Matrix{} : model.sens_features.embed(grid);
  const Matrix& sens_input = shared ? gamma_image : gamma_sens;
  const Index padded = gamma_image.cols();

  const double lr_sens = cfg.lr_sens > 0.0 ? cfg.lr_sens : cfg.lr;
  AdamState image_opt(model.image_net.params().size(), cfg.lr);
  AdamState sens_opt(model.sens_net.params().size(), lr_sens);

  FitResult result;
  result.trace.reserve(static_cast<std::size_t>(cfg.iters));
  SirenTape image_tape;
  SirenTape sens_tape;
  for (int it = 0; it < cfg.iters; ++it) {
    const Matrix x_out = forward(model.image_net, gamma_image, &image_tape);
    const Matrix s_out = forward(model.sens_net, sens_input, &sens_tape);
    check_finite(x_out, "image", it);
    check_finite(s_out, "sensitivity", it);
    const ComplexImage x = image_from_output(x_out, rows, cols);
    const CoilSensitivitySet s = sensitivities_from_output(s_out, y.coils(), rows, cols);

    // Inputs were validated above, so a rejection here comes from the training state (for example X*S overflow).
    TotalLoss loss;
    try {
      loss = total_loss(x, s, y, m, cfg.weights);
    } catch (const InvalidInput& e) {
      throw NumericalError(std::string(e.what()) + " at iteration " + std::to_string(it));
    }
    check_finite(loss.report, it);
    if (loss.sens_reg_evaluated) ++result.sens_reg_evaluations;
    result.trace.push_back(loss.report);
    if (cfg.on_log && cfg.log_every > 0 && (it % cfg.log_every == 0 || it + 1 == cfg.iters)) cfg.on_log(it, loss.report);

    const auto image_grad = backward(model.image_net, image_tape, image_upstream(loss.grad_image, padded));
    const auto sens_grad = backward(model.sens_net, sens_tape, sensitivity_upstream(loss.grad_sens, padded));

    if (cfg.cosine_decay) {
      const double f = 0.5 * (1.0 + std::cos(std::numbers::pi * it / cfg.iters));
      image_opt.lr = cfg.lr * f;
      sens_opt.lr = lr_sens * f;
    }
    try {
      adam_step(model.image_net.params(), image_grad.values, image_opt);
      adam_step(model.sens_net.params(), sens_grad.values, sens_opt);
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " at iteration " + std::to_string(it));
    }
  }
  result.model = std::move(model);
  return result;
}

}  // namespace inr

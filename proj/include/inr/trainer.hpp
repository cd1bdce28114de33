#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "inr/objective.hpp"
#include "inr/recon_model.hpp"

namespace inr {

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::int64_t t = 0;
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  explicit AdamState(std::size_t n = 0, double lr = 1e-4) : m(n, 0.0), v(n, 0.0), lr(lr) {}
};

/// One bias-corrected Adam update, in place. Throws NumericalError naming the
/// first non-finite gradient entry.
void adam_step(std::vector<double>& params, const std::vector<double>& grads, AdamState& state);

struct TrainConfig {
  int iters = 1000;
  double lr = 1e-4;
  /// Learning rate of the sensitivity network; <= 0 means "same as lr".
  double lr_sens = 0.0;
  bool cosine_decay = false;
  LossWeights weights;
  NetworkConfig network;
  std::uint64_t seed = 0;
  int log_every = 0;
  std::function<void(int, const LossReport&)> on_log;
};

struct FitResult {
  ReconModel model;
  std::vector<LossReport> trace;
  /// How many iterations evaluated the sensitivity regularizer.
  std::uint64_t sens_reg_evaluations = 0;
};

/// Jointly fits the image and sensitivity networks to normalized k-space
/// `y` sampled by `m`, one Adam optimizer per network.
FitResult fit(const KspaceVolume& y, const SamplingMask& m, const TrainConfig& cfg);

/// As above, continuing from existing networks.
FitResult fit(ReconModel model, const KspaceVolume& y, const SamplingMask& m, const TrainConfig& cfg);

}  // namespace inr

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "inr/inference.hpp"
#include "inr/metrics.hpp"
#include "inr/phantom.hpp"
#include "inr/trainer.hpp"

namespace inr {

/// Process exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitValidation = 3, kExitNumerical = 4 };

struct SimulateOptions {
  Index size = 64;
  Index coils = 4;
  std::string mask = "uniform";
  int acceleration = 5;
  int acs = 8;
  double rate = 0.25;
  double sigma_frac = 0.15;
  double noise = 0.005;
  std::uint64_t seed = 0;
};

/// Everything a simulated experiment needs, kept in memory so the ablation
/// grid does not round-trip through files.
struct Scenario {
  ComplexImage phantom;
  CoilSensitivitySet coils;
  SamplingMask mask;
  Acquisition acquisition;
  /// SOS of the noiseless fully sampled coil images.
  RealImage reference;
};

Scenario build_scenario(const SimulateOptions& opt);

/// Writes phantom, coils, mask, kspace, kspace_full, reference and sens_ref.
void cmd_simulate(const SimulateOptions& opt, const std::filesystem::path& out_dir);

struct ReconSettings {
  SensitivityRegularizer reg = SensitivityRegularizer::TotalVariation;
  double lambda1 = LossWeights{}.lambda1;
  double lambda2 = LossWeights{}.lambda2;
  int iters = 1000;
  double lr = 1e-4;
  double w0 = kDefaultW0;
  Index embed_size = NetworkConfig{}.embed_size;
  double sigma = NetworkConfig{}.sigma;
  Index hidden = NetworkConfig{}.hidden;
  int hidden_layers = NetworkConfig{}.hidden_layers;
  std::uint64_t seed = 0;

  TrainConfig train_config() const;
};

/// A smaller network than the default, sized for single-core desk runs.
ReconSettings desk_settings();

struct PipelineResult {
  FitResult fit;
  ReconResult recon;
  double seconds = 0.0;
};

/// normalize -> fit -> hard data consistency, timed end to end.
PipelineResult run_pipeline(const KspaceVolume& measured, const SamplingMask& mask, const ReconSettings& settings);

struct ReconOptions {
  std::filesystem::path kspace;
  std::filesystem::path mask;
  std::filesystem::path reference;
  std::filesystem::path out_dir;
  ReconSettings settings;
};

/// Writes recon, recon.pgm, sens, kspace_recon, loss.csv, model.ckpt, and
/// metrics.csv when a reference is given. Inputs are validated first.
PipelineResult cmd_recon(const ReconOptions& opt);

struct EvalOptions {
  std::filesystem::path recon;
  std::filesystem::path reference;
  std::filesystem::path out_dir;
  double gain = 5.0;
};

/// Writes metrics.csv and error.pgm.
MetricReport cmd_eval(const EvalOptions& opt);

struct AblateOptions {
  SimulateOptions base;
  std::vector<int> acs{8, 24};
  std::vector<int> accelerations{5};
  /// Regularizers compared against the unregularized baseline, which is
  /// always run.
  std::vector<SensitivityRegularizer> regs{SensitivityRegularizer::TotalVariation};
  ReconSettings settings;
  std::filesystem::path out;
};

struct AblationRow {
  int acs = 0;
  int acceleration = 0;
  SensitivityRegularizer reg = SensitivityRegularizer::None;
  MetricReport metrics;
  double seconds = 0.0;

  bool reg_on() const { return reg != SensitivityRegularizer::None; }
};

std::vector<AblationRow> cmd_ablate(const AblateOptions& opt);

std::string metrics_csv(const MetricReport& m);
std::string ablation_csv(const std::vector<AblationRow>& rows);
std::vector<AblationRow> parse_ablation_csv(const std::string& text);

/// Full command-line entry point; args excludes the program name. Returns
/// one of the ExitCode values.
int run_cli(const std::vector<std::string>& args);

}  // namespace inr

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>

#include "CLI11.hpp"
#include "inr/commands.hpp"
#include "inr/error.hpp"

namespace inr {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// A job file holds key=value lines named after the long flags. They are
// spliced in after the subcommand name; keys also given on the command line
// are dropped so explicit flags win, and an unknown key fails exactly like
// an unknown flag.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  std::vector<std::string> files;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      files.push_back(args[++i]);
    } else if (args[i].rfind("--config=", 0) == 0) {
      files.push_back(args[i].substr(9));
    } else {
      out.push_back(args[i]);
    }
  }
  std::set<std::string> given;
  for (const auto& a : out) {
    if (a.rfind("--", 0) == 0) given.insert(a.substr(0, a.find('=')));
  }

  std::vector<std::string> from_file;
  for (const auto& path : files) {
    std::ifstream in(path);
    if (!in) throw CLI::FileError::Missing(path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      line = trim(line);
      if (line.empty() || line[0] == '#') continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw CLI::ConversionError(path + ":" + std::to_string(lineno) + ": expected key=value");
      }
      const std::string key = "--" + trim(line.substr(0, eq));
      if (given.contains(key)) continue;
      from_file.push_back(key);
      from_file.push_back(trim(line.substr(eq + 1)));
    }
  }
  out.insert(out.begin() + (out.empty() ? 0 : 1), from_file.begin(), from_file.end());
  return out;
}

const std::vector<std::string> kRegNames{"none", "tv", "l1f", "lr"};

void add_settings(CLI::App* cmd, ReconSettings& s, std::string* reg) {
  if (reg) cmd->add_option("--reg", *reg, "Sensitivity regularizer")->check(CLI::IsMember(kRegNames))->capture_default_str();
  cmd->add_option("--lambda1", s.lambda1, "Image TV weight")->check(CLI::NonNegativeNumber)->capture_default_str();
  cmd->add_option("--lambda2", s.lambda2, "Sensitivity regularizer weight")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--iters", s.iters, "Training iterations")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--lr", s.lr, "Adam learning rate")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--w0", s.w0, "Sine frequency factor")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--embed-size", s.embed_size, "Fourier feature count")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--sigma", s.sigma, "Fourier feature scale")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--hidden", s.hidden, "Network width")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--layers", s.hidden_layers, "Hidden layers")->check(CLI::NonNegativeNumber)->capture_default_str();
  cmd->add_option("--seed", s.seed, "Random seed")->capture_default_str();
}

void add_simulation(CLI::App* cmd, SimulateOptions& o, bool with_mask_geometry) {
  cmd->add_option("--size", o.size, "Grid size (square)")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--coils", o.coils, "Coil count")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--noise", o.noise, "Noise std relative to the DC magnitude")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  if (with_mask_geometry) {
    cmd->add_option("--mask", o.mask, "Mask kind")->check(CLI::IsMember({"uniform", "gaussian"}))->capture_default_str();
    cmd->add_option("--R", o.acceleration, "Line acceleration")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--acs", o.acs, "Calibration lines")->check(CLI::NonNegativeNumber)->capture_default_str();
    cmd->add_option("--rate", o.rate, "Gaussian mask sampling rate")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    cmd->add_option("--sigma-frac", o.sigma_frac, "Gaussian mask width as a fraction of the grid")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  }
}

int report(const char* kind, const std::exception& e, int code) {
  std::cerr << "inrecon: " << kind << ": " << e.what() << "\n";
  return code;
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args) {
  CLI::App app{"Scan-specific parallel MRI reconstruction with implicit neural representations", "inrecon"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");
  std::string config_help;
  auto config_note = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_help, "key=value job file; flags given on the command line take precedence");
  };

  SimulateOptions sim;
  std::filesystem::path sim_out;
  auto* simulate = app.add_subcommand("simulate", "Write a synthetic phantom acquisition");
  add_simulation(simulate, sim, true);
  simulate->add_option("--out-dir", sim_out, "Output directory")->required();
  config_note(simulate);

  ReconOptions rec;
  std::string rec_reg = to_string(rec.settings.reg);
  auto* recon = app.add_subcommand("recon", "Fit the networks and reconstruct");
  recon->add_option("--kspace", rec.kspace, "Undersampled k-space prefix")->required();
  recon->add_option("--mask", rec.mask, "Sampling mask prefix")->required();
  recon->add_option("--reference", rec.reference, "Reference image prefix for metrics");
  recon->add_option("--out-dir", rec.out_dir, "Output directory")->required();
  add_settings(recon, rec.settings, &rec_reg);
  config_note(recon);

  EvalOptions ev;
  auto* eval = app.add_subcommand("eval", "Score a reconstruction against a reference");
  eval->add_option("--recon", ev.recon, "Reconstruction prefix")->required();
  eval->add_option("--reference", ev.reference, "Reference prefix")->required();
  eval->add_option("--out-dir", ev.out_dir, "Output directory")->required();
  eval->add_option("--gain", ev.gain, "Error map gain")->check(CLI::PositiveNumber)->capture_default_str();
  config_note(eval);

  AblateOptions ab;
  std::vector<std::string> ab_regs{"tv"};
  auto* ablate = app.add_subcommand("ablate", "Regularizer on/off grid over ACS and acceleration");
  add_simulation(ablate, ab.base, false);
  ablate->add_option("--acs", ab.acs, "Calibration line counts")->delimiter(',')->capture_default_str();
  ablate->add_option("--R", ab.accelerations, "Accelerations")->delimiter(',')->capture_default_str();
  ablate->add_option("--regs", ab_regs, "Regularizers compared against none")
      ->delimiter(',')
      ->check(CLI::IsMember(kRegNames))
      ->capture_default_str();
  ablate->add_option("--out", ab.out, "CSV output path")->required();
  add_settings(ablate, ab.settings, nullptr);
  config_note(ablate);

  try {
    auto args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate->parsed()) {
      cmd_simulate(sim, sim_out);
    } else if (recon->parsed()) {
      rec.settings.reg = parse_regularizer(rec_reg);
      const auto res = cmd_recon(rec);
      std::cout << "recon: " << res.fit.trace.size() << " iterations in " << res.seconds << " s\n";
    } else if (eval->parsed()) {
      const auto m = cmd_eval(ev);
      std::cout << metrics_csv(m);
    } else if (ablate->parsed()) {
      ab.base.seed = ab.settings.seed;
      ab.regs.clear();
      for (const auto& r : ab_regs) ab.regs.push_back(parse_regularizer(r));
      std::cout << ablation_csv(cmd_ablate(ab));
    }
  } catch (const NumericalError& e) {
    return report("numerical failure", e, kExitNumerical);
  } catch (const InvalidParameter& e) {
    return report("invalid parameter", e, kExitValidation);
  } catch (const InvalidInput& e) {
    return report("invalid input", e, kExitValidation);
  } catch (const std::exception& e) {
    return report("error", e, kExitValidation);
  }
  return kExitOk;
}

}  // namespace inr

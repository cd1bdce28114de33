#include "inr/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>

#include "inr/array_io.hpp"
#include "inr/checkpoint.hpp"
#include "inr/error.hpp"
#include "inr/rng.hpp"

namespace fs = std::filesystem;

namespace inr {

namespace {

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw InvalidInput("malformed number '" + s + "'");
  return v;
}

double peak(const RealImage& img) {
  double p = 0.0;
  for (double v : img.values()) p = std::max(p, v);
  return p;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw InvalidInput("cannot create output directory " + dir.string());
}

SamplingMask make_mask(const SimulateOptions& opt) {
  if (opt.mask == "uniform") return uniform_cartesian_mask(opt.size, opt.size, opt.acceleration, opt.acs);
  if (opt.mask == "gaussian") {
    return gaussian_pointwise_mask(opt.size, opt.size, opt.rate, opt.sigma_frac, derive_seed(opt.seed, SeedStream::Mask));
  }
  throw InvalidParameter("unknown mask kind '" + opt.mask + "' (expected uniform or gaussian)");
}

}  // namespace

Scenario build_scenario(const SimulateOptions& opt) {
  if (opt.size < 1) throw InvalidParameter("size must be positive");
  const auto spec = PhantomSpec::head(opt.size, opt.size, opt.coils);
  Scenario sc{make_phantom(spec), make_coils(spec), make_mask(opt), {}, {}};
  sc.acquisition = simulate_acquisition(sc.phantom, sc.coils, sc.mask, opt.noise, derive_seed(opt.seed, SeedStream::Noise));
  sc.reference = sos_combine(ifft2_centered(sc.acquisition.full));
  return sc;
}

void cmd_simulate(const SimulateOptions& opt, const fs::path& out_dir) {
  const Scenario sc = build_scenario(opt);
  ensure_dir(out_dir);
  write_image(out_dir / "phantom", sc.phantom);
  write_coils(out_dir / "coils", sc.coils);
  write_mask(out_dir / "mask", sc.mask);
  write_coils(out_dir / "kspace", sc.acquisition.undersampled);
  write_coils(out_dir / "kspace_full", sc.acquisition.full);
  write_real(out_dir / "reference", sc.reference);
  write_coils(out_dir / "sens_ref", reference_sensitivities(sc.acquisition.full));
}

TrainConfig ReconSettings::train_config() const {
  TrainConfig cfg;
  cfg.iters = iters;
  cfg.lr = lr;
  cfg.seed = seed;
  cfg.weights.reg_kind = reg;
  cfg.weights.lambda1 = lambda1;
  cfg.weights.lambda2 = reg == SensitivityRegularizer::None ? 0.0 : lambda2;
  cfg.network.hidden = hidden;
  cfg.network.hidden_layers = hidden_layers;
  cfg.network.embed_size = embed_size;
  cfg.network.sigma = sigma;
  cfg.network.w0_image = w0;
  cfg.network.w0_sens = w0;
  return cfg;
}

ReconSettings desk_settings() {
  ReconSettings s;
  s.hidden = 64;
  s.hidden_layers = 3;
  s.embed_size = 64;
  s.sigma = 3.0;
  return s;
}

PipelineResult run_pipeline(const KspaceVolume& measured, const SamplingMask& mask, const ReconSettings& settings) {
  const auto start = std::chrono::steady_clock::now();
  const KspaceVolume y = normalize_kspace(measured);
  FitResult fitted = fit(y, mask, settings.train_config());
  ReconResult recon = reconstruct(fitted.model, measured, mask, y.scale);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  return {std::move(fitted), std::move(recon), elapsed.count()};
}

std::string metrics_csv(const MetricReport& m) {
  return "psnr,ssim,rlne\n" + fmt(m.psnr) + "," + fmt(m.ssim) + "," + fmt(m.rlne) + "\n";
}

PipelineResult cmd_recon(const ReconOptions& opt) {
  const KspaceVolume measured(read_coils(opt.kspace), 1.0);
  const SamplingMask mask = read_mask(opt.mask);
  if (measured.rows() != mask.rows() || measured.cols() != mask.cols()) {
    throw InvalidInput("k-space is " + std::to_string(measured.rows()) + "x" + std::to_string(measured.cols()) +
                       " but the mask is " + std::to_string(mask.rows()) + "x" + std::to_string(mask.cols()));
  }
  std::optional<RealImage> reference;
  if (!opt.reference.empty()) {
    reference = read_real(opt.reference);
    if (reference->rows() != mask.rows() || reference->cols() != mask.cols()) {
      throw InvalidInput("reference image shape does not match the k-space");
    }
  }
  PipelineResult res = run_pipeline(measured, mask, opt.settings);

  ensure_dir(opt.out_dir);
  write_real(opt.out_dir / "recon", res.recon.combined);
  write_pgm(opt.out_dir / "recon.pgm", res.recon.combined, peak(res.recon.combined));
  write_coils(opt.out_dir / "sens", res.recon.sensitivities);
  write_coils(opt.out_dir / "kspace_recon", res.recon.kspace_final);
  std::string loss = "iteration,dc,image_tv,sens_reg,total\n";
  for (std::size_t i = 0; i < res.fit.trace.size(); ++i) {
    const auto& r = res.fit.trace[i];
    loss += std::to_string(i) + "," + fmt(r.dc) + "," + fmt(r.image_tv) + "," + fmt(r.sens_reg) + "," + fmt(r.total) + "\n";
  }
  write_file_atomic(opt.out_dir / "loss.csv", loss);
  save_checkpoint(opt.out_dir / "model.ckpt", res.fit.model);
  if (reference) write_file_atomic(opt.out_dir / "metrics.csv", metrics_csv(evaluate_metrics(res.recon.combined, *reference)));
  return res;
}

MetricReport cmd_eval(const EvalOptions& opt) {
  if (!(opt.gain > 0.0)) throw InvalidParameter("gain must be positive");
  const RealImage recon = read_real(opt.recon);
  const RealImage reference = read_real(opt.reference);
  if (!recon.same_shape(reference)) throw InvalidInput("recon and reference shapes differ");
  const MetricReport m = evaluate_metrics(recon, reference);
  // Error map in the reference's [0, 1] range so the gain means the same thing across scans.
  const double p = peak(reference);
  RealImage r = recon;
  RealImage f = reference;
  for (double& v : r.values()) v /= p;
  for (double& v : f.values()) v /= p;
  const RealImage err = export_error_map(r, f, opt.gain);

  ensure_dir(opt.out_dir);
  write_file_atomic(opt.out_dir / "metrics.csv", metrics_csv(m));
  write_pgm(opt.out_dir / "error.pgm", err);
  return m;
}

std::vector<AblationRow> cmd_ablate(const AblateOptions& opt) {
  if (opt.acs.empty() || opt.accelerations.empty()) throw InvalidParameter("ablation grid is empty");
  std::vector<SensitivityRegularizer> regs{SensitivityRegularizer::None};
  for (auto r : opt.regs) {
    if (std::find(regs.begin(), regs.end(), r) == regs.end()) regs.push_back(r);
  }

  std::vector<AblationRow> rows;
  for (int acs : opt.acs) {
    for (int accel : opt.accelerations) {
      SimulateOptions sim = opt.base;
      sim.acs = acs;
      sim.acceleration = accel;
      const Scenario sc = build_scenario(sim);
      for (auto reg : regs) {
        ReconSettings settings = opt.settings;
        settings.reg = reg;
        const PipelineResult res = run_pipeline(sc.acquisition.undersampled, sc.mask, settings);
        rows.push_back({acs, accel, reg, evaluate_metrics(res.recon.combined, sc.reference), res.seconds});
      }
    }
  }
  if (!opt.out.empty()) write_file_atomic(opt.out, ablation_csv(rows));
  return rows;
}

std::string ablation_csv(const std::vector<AblationRow>& rows) {
  std::string out = "ACS,R,reg,reg_on,PSNR,SSIM,RLNE,seconds\n";
  for (const auto& r : rows) {
    out += std::to_string(r.acs) + "," + std::to_string(r.acceleration) + "," + to_string(r.reg) + "," +
           (r.reg_on() ? "1" : "0") + "," + fmt(r.metrics.psnr) + "," + fmt(r.metrics.ssim) + "," +
           fmt(r.metrics.rlne) + "," + fmt(r.seconds) + "\n";
  }
  return out;
}

std::vector<AblationRow> parse_ablation_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "ACS,R,reg,reg_on,PSNR,SSIM,RLNE,seconds") {
    throw InvalidInput("ablation CSV: unexpected header");
  }
  std::vector<AblationRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream fields(line);
    for (std::string cell; std::getline(fields, cell, ',');) f.push_back(cell);
    if (f.size() != 8) throw InvalidInput("ablation CSV: expected 8 fields in '" + line + "'");
    AblationRow r;
    r.acs = std::stoi(f[0]);
    r.acceleration = std::stoi(f[1]);
    r.reg = parse_regularizer(f[2]);
    if (f[3] != (r.reg_on() ? "1" : "0")) throw InvalidInput("ablation CSV: reg_on disagrees with reg");
    r.metrics = {parse_double(f[4]), parse_double(f[5]), parse_double(f[6])};
    r.seconds = parse_double(f[7]);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace inr

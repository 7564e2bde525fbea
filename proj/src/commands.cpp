#include "scatterfit/commands.hpp"

#include <cmath>
#include <ostream>

#include "scatterfit/crlb.hpp"
#include "scatterfit/report_io.hpp"

namespace scatterfit {

namespace {

void write_resolved(const ScenarioConfig& cfg, const CommandContext& ctx) {
  write_file_atomic(ctx.out_dir / "resolved_config.json", to_json(cfg).dump(2) + "\n");
}

void prepare(const CommandContext& ctx) { std::filesystem::create_directories(ctx.out_dir); }

void note(const CommandContext& ctx, const std::string& msg) {
  if (ctx.log) *ctx.log << msg << '\n';
}

std::vector<Eigen::VectorXcd> samples_of(const std::vector<Observation>& obs) {
  std::vector<Eigen::VectorXcd> out;
  out.reserve(obs.size());
  for (const auto& o : obs) out.push_back(o.z);
  return out;
}

}  // namespace

void run_synth(const ScenarioConfig& cfg, const CommandContext& ctx) {
  prepare(ctx);
  const auto w = cfg.make_waveform();
  const auto grid = cfg.make_grid();
  const auto sightlines = cfg.make_sightlines();
  const StaticPattern pat = cfg.make_pattern();
  std::vector<Eigen::VectorXcd> clean;
  for (const auto& p : synthesize_profiles(cfg.truth, w, grid, sightlines)) clean.push_back(p.samples);

  write_file_atomic(ctx.out_dir / "profile.csv", profile_csv(samples_of(pat.observations), grid));
  write_file_atomic(ctx.out_dir / "profile_clean.csv", profile_csv(clean, grid));
  write_resolved(cfg, ctx);
  note(ctx, "synth: wrote " + std::to_string(sightlines.size()) + " profile(s) of " +
                std::to_string(grid.m) + " bins to " + ctx.out_dir.string());
}

SweepSpec parse_sweep_range(const std::string& text, SweepSpec base) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
  if (c2 == std::string::npos) throw ConfigError("--range: expected lo:hi:steps, got \"" + text + "\"");
  try {
    std::size_t used = 0;
    const std::string lo = text.substr(0, c1);
    const std::string hi = text.substr(c1 + 1, c2 - c1 - 1);
    const std::string st = text.substr(c2 + 1);
    base.lo = std::stod(lo, &used);
    if (used != lo.size()) throw std::invalid_argument(lo);
    base.hi = std::stod(hi, &used);
    if (used != hi.size()) throw std::invalid_argument(hi);
    const long long steps = std::stoll(st, &used);
    if (used != st.size() || steps < 1) throw std::invalid_argument(st);
    base.steps = static_cast<std::size_t>(steps);
  } catch (const std::exception&) {
    throw ConfigError("--range: expected lo:hi:steps with steps >= 1, got \"" + text + "\"");
  }
  if (!std::isfinite(base.lo) || !std::isfinite(base.hi) || base.hi < base.lo) {
    throw ConfigError("--range: need finite lo <= hi");
  }
  return base;
}

std::vector<SweepRow> sweep_loss(const ScenarioConfig& cfg, const SweepSpec& spec) {
  if (spec.scatterer < 1 || spec.scatterer > cfg.truth.size()) {
    throw ConfigError("--scatterer: " + std::to_string(spec.scatterer) + " is not in 1.." +
                      std::to_string(cfg.truth.size()));
  }
  const std::size_t n = spec.scatterer - 1;
  const auto names = cfg.truth.scatterers()[n].slot_names();
  std::size_t slot = names.size();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == spec.slot) slot = i;
  }
  if (slot == names.size()) {
    std::string all;
    for (const auto& s : names) all += (all.empty() ? "" : ", ") + s;
    throw ConfigError("--slot: scatterer " + std::to_string(spec.scatterer) + " has no slot \"" +
                      spec.slot + "\" (has " + all + ")");
  }
  const auto j = static_cast<Eigen::Index>(cfg.truth.offset(n) + slot);

  const auto w = cfg.make_waveform();
  const auto weight = cfg.make_weight();
  const StaticPattern pat = cfg.make_pattern();
  const ParamVector truth = pack(cfg.truth);

  const std::size_t count = (spec.hi == spec.lo) ? 1 : spec.steps;
  std::vector<SweepRow> rows;
  rows.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double offset =
        count == 1 ? spec.lo
                   : spec.lo + (spec.hi - spec.lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    ParamVector theta = truth;
    theta(j) += offset;
    const auto m = unpack(cfg.truth, theta);
    const auto coh = batch_loss_and_gradient(LossKind::Coherent, pat.observations, m, w, weight);
    const auto non = batch_loss_and_gradient(LossKind::Noncoherent, pat.observations, m, w, weight);
    rows.push_back({offset, coh.loss, non.loss, coh.gradient(j), non.gradient(j)});
  }
  return rows;
}

void run_sweep_loss(const ScenarioConfig& cfg, const SweepSpec& spec, const CommandContext& ctx) {
  const auto rows = sweep_loss(cfg, spec);
  prepare(ctx);
  std::string csv = std::string(kSweepCsvHeader) + "\n";
  for (const auto& r : rows) {
    csv += csv_number(r.offset) + "," + csv_number(r.coherent_loss) + "," +
           csv_number(r.noncoherent_loss) + "," + csv_number(r.coherent_grad) + "," +
           csv_number(r.noncoherent_grad) + "\n";
  }
  write_file_atomic(ctx.out_dir / "loss_sweep.csv", csv);
  write_resolved(cfg, ctx);
  note(ctx, "sweep-loss: wrote " + std::to_string(rows.size()) + " rows");
}

FitReport fit_scenario(const ScenarioConfig& cfg) {
  if (!cfg.fit) throw ConfigError("fit: missing required field");
  const auto w = cfg.make_waveform();
  const auto weight = cfg.make_weight();
  const StaticPattern pat = cfg.make_pattern();
  const FitConfig& f = *cfg.fit;
  switch (f.strategy) {
    case FitStrategy::Coherent:
      return gradient_descent(pat.observations, f.initial_model, w, LossKind::Coherent, weight, f.descent);
    case FitStrategy::Noncoherent:
      return gradient_descent(pat.observations, f.initial_model, w, LossKind::Noncoherent, weight,
                              f.descent);
    case FitStrategy::Sequential:
      break;
  }
  return sequential_fit(pat.observations, f.initial_model, w, weight, f.descent);
}

FitReport run_fit(const ScenarioConfig& cfg, const CommandContext& ctx) {
  FitReport rep = fit_scenario(cfg);
  prepare(ctx);
  const auto w = cfg.make_waveform();
  const auto grid = cfg.make_grid();
  const StaticPattern pat = cfg.make_pattern();

  std::vector<Eigen::VectorXcd> residuals;
  for (const auto& o : pat.observations) {
    residuals.push_back(o.z - synthesize_profile(rep.model, w, grid, o.l).samples);
  }

  nlohmann::json j;
  j["strategy"] = to_string(cfg.fit->strategy);
  j["status"] = to_string(rep.status);
  if (rep.first_phase_status) j["noncoherent_phase_status"] = to_string(*rep.first_phase_status);
  if (rep.phase_boundary) j["phase_boundary_iteration"] = rep.trace[*rep.phase_boundary].iteration;
  j["iterations"] = rep.iterations;
  j["final_loss"] = rep.final_loss;
  j["final_loss_kind"] = to_string(rep.final_kind);
  j["initial_loss"] = rep.trace.front().loss;
  j["parameters"] = parameter_table(cfg.fit->initial_model, pack(cfg.fit->initial_model), rep.theta,
                                    pack(cfg.truth));
  j["estimated_model"] = scatterers_to_json(rep.model);
  j["mean_residual_power_w"] = rep.mean_residual_power();
  j["mean_residual_power_dbw"] = power_to_dbw(rep.mean_residual_power());
  nlohmann::json per_aspect = nlohmann::json::array();
  for (const auto& r : rep.residual_power) per_aspect.push_back(r.mean());
  j["residual_power_per_aspect_w"] = per_aspect;
  if (cfg.noise.sigma2 > 0.0) {
    const CrlbResult diag = crlb(rep.model, w, grid, cfg.make_sightlines(),
                                 NoiseCovariance::white(grid.m, cfg.noise.sigma2));
    j["crlb_at_estimate"] = crlb_to_json(diag, rep.model);
  }

  write_file_atomic(ctx.out_dir / "fit_report.json", j.dump(2) + "\n");
  write_file_atomic(ctx.out_dir / "residual.csv", profile_csv(residuals, grid));
  write_file_atomic(ctx.out_dir / "loss_trace.csv", loss_trace_csv(rep));
  write_resolved(cfg, ctx);
  note(ctx, "fit: " + to_string(cfg.fit->strategy) + " " + to_string(rep.status) + " after " +
                std::to_string(rep.iterations) + " iterations, mean residual " +
                csv_number(power_to_dbw(rep.mean_residual_power())) + " dBW");
  return rep;
}

CrlbResult scenario_crlb(const ScenarioConfig& cfg) {
  if (!(cfg.noise.sigma2 > 0.0)) throw ConfigError("noise.sigma2: must be positive for crlb");
  const auto grid = cfg.make_grid();
  return crlb(cfg.truth, cfg.make_waveform(), grid, cfg.make_sightlines(),
              NoiseCovariance::white(grid.m, cfg.noise.sigma2));
}

CrlbResult run_crlb(const ScenarioConfig& cfg, const CommandContext& ctx) {
  const CrlbResult c = scenario_crlb(cfg);
  prepare(ctx);
  write_file_atomic(ctx.out_dir / "crlb.csv", crlb_csv(c, cfg.truth));
  write_file_atomic(ctx.out_dir / "crlb.json", crlb_to_json(c, cfg.truth).dump(2) + "\n");
  write_resolved(cfg, ctx);
  if (!c.invertible) {
    note(ctx, "warning: Fisher information is singular (condition " + csv_number(c.condition) +
                  "); " + std::to_string(c.null_space.cols()) +
                  " unidentifiable parameter combination(s) written to crlb.json");
  }
  return c;
}

}  // namespace scatterfit

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "scatterfit/crlb.hpp"
#include "scatterfit/scenario.hpp"

namespace scatterfit {

/// Process exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitRuntime = 3 };

struct CommandContext {
  std::filesystem::path out_dir = ".";
  std::ostream* log = nullptr;  ///< progress and warnings; null when quiet
};

/// Writes profile.csv (noisy), profile_clean.csv and resolved_config.json.
void run_synth(const ScenarioConfig& cfg, const CommandContext& ctx);

struct SweepSpec {
  std::size_t scatterer = 1;  ///< 1-based
  std::string slot;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t steps = 1;
};

/// Parses "lo:hi:steps". Throws ConfigError.
SweepSpec parse_sweep_range(const std::string& text, SweepSpec base = {});

struct SweepRow {
  double offset;
  double coherent_loss;
  double noncoherent_loss;
  double coherent_grad;
  double noncoherent_grad;
};

/// Both losses and their analytic derivatives in the swept slot, all other
/// slots held at the true values. Observations are the scenario's noisy
/// pattern. Throws ConfigError for an unknown scatterer or slot.
std::vector<SweepRow> sweep_loss(const ScenarioConfig& cfg, const SweepSpec& spec);

/// Writes loss_sweep.csv and resolved_config.json.
void run_sweep_loss(const ScenarioConfig& cfg, const SweepSpec& spec, const CommandContext& ctx);

/// Runs the configured strategy. Throws ConfigError without a fit block.
FitReport fit_scenario(const ScenarioConfig& cfg);

/// Writes fit_report.json, residual.csv, loss_trace.csv and
/// resolved_config.json.
FitReport run_fit(const ScenarioConfig& cfg, const CommandContext& ctx);

/// Bound at the true model over all configured sight lines.
CrlbResult scenario_crlb(const ScenarioConfig& cfg);

/// Writes crlb.csv, crlb.json and resolved_config.json. A singular bound is
/// reported, not thrown.
CrlbResult run_crlb(const ScenarioConfig& cfg, const CommandContext& ctx);

}  // namespace scatterfit

// scatterfit: synthesize range profiles, sweep losses, fit models and
// evaluate Cramer-Rao bounds from a JSON scenario file.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "scatterfit/commands.hpp"
#include "scatterfit/errors.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "scenario file (JSON)")->required();
  cmd->add_option("--out", f.out, "output directory")->capture_default_str();
  cmd->add_option("--seed", f.seed, "noise seed, overrides the config");
  cmd->add_flag("--quiet", f.quiet, "no progress output");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace scatterfit;

  CLI::App app{"Point-scattering radar models: synthesis, loss sweeps, fitting and bounds"};
  app.require_subcommand(1);

  CommonFlags flags;
  auto* synth = app.add_subcommand("synth", "write noisy and noise-free range profiles");
  auto* sweep = app.add_subcommand("sweep-loss", "both losses and gradients along one slot");
  auto* fit = app.add_subcommand("fit", "fit the initial model to the synthesized data");
  auto* bound = app.add_subcommand("crlb", "Cramer-Rao bound at the true model");
  for (auto* cmd : {synth, sweep, fit, bound}) add_common(cmd, flags);

  SweepSpec sweep_spec;
  std::string range_text;
  sweep->add_option("--scatterer", sweep_spec.scatterer, "scatterer index, 1-based")->required();
  sweep->add_option("--slot", sweep_spec.slot, "slot name, e.g. r_s")->required();
  sweep->add_option("--range", range_text, "offsets lo:hi:steps")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  CommandContext ctx;
  ctx.out_dir = flags.out;
  ctx.log = flags.quiet ? nullptr : &std::cerr;

  try {
    ScenarioConfig cfg = load_scenario(flags.config);
    if (flags.seed) cfg.noise.seed = *flags.seed;

    if (*synth) {
      run_synth(cfg, ctx);
    } else if (*sweep) {
      run_sweep_loss(cfg, parse_sweep_range(range_text, sweep_spec), ctx);
    } else if (*fit) {
      run_fit(cfg, ctx);
    } else {
      run_crlb(cfg, ctx);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

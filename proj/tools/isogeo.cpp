// isogeo: experiment runner for the stochastic-geometry toolkit.
//
//   isogeo <experiment> [--config FILE] [overrides...]
//   isogeo report RUN_DIR
//
// Exit codes: 0 all assertions pass, 1 an assertion failed, 2 usage or
// configuration error.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "isogeo/config.hpp"
#include "isogeo/experiments.hpp"
#include "isogeo/version.hpp"

namespace {

struct CliOverrides {
  std::string config_file;
  std::string body;
  std::string grid;
  std::string t_grid;
  std::string mode;
  std::string s_levels;
  std::string out_dir;
  int dim = -1;
  double p = -1.0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = -1;
  long long samples = -1, trials = -1, directions = -1, m = -1, spd = -1, bins = -1;
  double epsilon = -1.0, r = -1.0, t_min = -1.0, t_max = -1.0;
};

void add_override_flags(CLI::App* cmd, CliOverrides& raw) {
  cmd->add_option("--config", raw.config_file, "config file (key = value lines)");
  cmd->add_option("--body", raw.body, "body kind: cube|ball|cross_polytope|simplex|lp_ball");
  cmd->add_option("--dim", raw.dim, "dimension n");
  cmd->add_option("--p", raw.p, "p for lp_ball");
  cmd->add_option("--seed", raw.seed, "master seed")->each([&](const std::string&) {
    raw.seed_set = true;
  });
  cmd->add_option("--threads", raw.threads, "worker threads (0 = hardware)");
  cmd->add_option("--out", raw.out_dir, "output directory");
  cmd->add_option("--grid", raw.grid, "comma list: N grid (mean-width) or t grid (tail experiments)");
  cmd->add_option("--t-min", raw.t_min, "geometric t grid start");
  cmd->add_option("--t-max", raw.t_max, "geometric t grid end");
  cmd->add_option("--samples", raw.samples, "sample budget");
  cmd->add_option("--trials", raw.trials, "polytope trials");
  cmd->add_option("--directions", raw.directions, "direction budget");
  cmd->add_option("--m", raw.m, "sphere directions per mean-width estimate");
  cmd->add_option("--samples-per-direction", raw.spd, "samples per classified direction");
  cmd->add_option("--bins", raw.bins, "histogram bins");
  cmd->add_option("--epsilon", raw.epsilon, "CLT sup-ratio threshold");
  cmd->add_option("--r", raw.r, "sub/supergaussian constant r");
  cmd->add_option("--mode", raw.mode, "classify mode: subgaussian|supergaussian|both");
  cmd->add_option("--s-levels", raw.s_levels, "comma list of s levels in units of lk");
}

isogeo::ExperimentConfig build_config(const std::string& experiment,
                                      const CliOverrides& raw) {
  isogeo::ExperimentConfig config;
  config.experiment = isogeo::experiment_from_name(experiment);
  if (!raw.config_file.empty()) isogeo::load_config_file(config, raw.config_file);
  config.experiment = isogeo::experiment_from_name(experiment);  // subcommand wins
  if (!raw.body.empty()) isogeo::apply_config_entry(config, "body.kind", raw.body);
  if (raw.dim > 0) config.dim = raw.dim;
  if (raw.p > 0) config.p = raw.p;
  if (raw.seed_set) config.seed = raw.seed;
  if (raw.threads >= 0) {
    config.threads = raw.threads;
  } else if (const char* env = std::getenv("ISOGEO_THREADS")) {
    isogeo::apply_config_entry(config, "threads", env);
  }
  if (!raw.out_dir.empty()) config.output_dir = raw.out_dir;
  if (!raw.grid.empty()) {
    const bool n_style = config.experiment == isogeo::ExperimentKind::mean_width;
    isogeo::apply_config_entry(config, n_style ? "grid.n" : "grid.t", raw.grid);
  }
  if (raw.t_min > 0) config.t_min = raw.t_min;
  if (raw.t_max > 0) config.t_max = raw.t_max;
  if (raw.samples > 0) config.samples = static_cast<std::size_t>(raw.samples);
  if (raw.trials > 0) config.trials = static_cast<std::size_t>(raw.trials);
  if (raw.directions > 0) config.directions = static_cast<std::size_t>(raw.directions);
  if (raw.m > 0) config.m_directions = static_cast<std::size_t>(raw.m);
  if (raw.spd > 0) config.samples_per_direction = static_cast<std::size_t>(raw.spd);
  if (raw.bins > 0) config.bins = static_cast<std::size_t>(raw.bins);
  if (raw.epsilon > 0) config.epsilon = raw.epsilon;
  if (raw.r > 0) config.r_constant = raw.r;
  if (!raw.mode.empty()) isogeo::apply_config_entry(config, "classify.mode", raw.mode);
  if (!raw.s_levels.empty())
    isogeo::apply_config_entry(config, "orlicz.s_levels", raw.s_levels);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"isogeo: random polytopes and marginal tails in isotropic convex bodies"};
  app.set_version_flag("--version", isogeo::kVersion);
  app.require_subcommand(1);

  CliOverrides raw;
  std::vector<std::pair<std::string, CLI::App*>> experiment_commands;
  for (const char* name : {"mean-width", "supergaussian", "subgaussian", "clt",
                           "orlicz-verify", "classify", "sample"}) {
    CLI::App* cmd = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    add_override_flags(cmd, raw);
    experiment_commands.emplace_back(name, cmd);
  }
  std::string report_dir;
  CLI::App* report_cmd = app.add_subcommand("report", "summarize a finished run");
  report_cmd->add_option("run_dir", report_dir, "run directory with a manifest")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (report_cmd->parsed()) {
      isogeo::emit_report(report_dir, std::cout);
      return 0;
    }
    for (const auto& [name, cmd] : experiment_commands) {
      if (!cmd->parsed()) continue;
      const isogeo::ExperimentConfig config = build_config(name, raw);
      const isogeo::RunManifest manifest = isogeo::run_experiment(config);
      for (const auto& criterion : manifest.criteria) {
        std::cout << (criterion.pass ? "[pass] " : "[FAIL] ") << criterion.name << "  "
                  << criterion.detail << "\n";
      }
      std::cout << "run " << (manifest.pass ? "passed" : "FAILED") << "; outputs in "
                << config.output_dir << "\n";
      return manifest.pass ? 0 : 1;
    }
    std::cerr << "no subcommand selected\n";
    return 2;
  } catch (const isogeo::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const isogeo::usage_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

// Command-line front end: run, verify, bounds and sweep on an instance file.
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sbai/harness.hpp"

namespace {

void add_common(CLI::App& app, sbai::ExperimentConfig& cfg) {
  app.set_config("--config", "", "Read options from a key=value file; command-line flags take precedence");
  app.add_option("--instance", cfg.instance, "Instance JSON file")->required()->check(CLI::ExistingFile);
  app.add_option("--delta", cfg.delta, "Risk level in (0, 1)")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Seed of the random streams")->capture_default_str();
  app.add_option("--cap", cfg.budget_cap, "Budget cap in rounds")->capture_default_str();
  app.add_option("--theta-grid", cfg.theta_grid, "Threshold grid size for the lower bound")
      ->capture_default_str();
  app.add_option("--out", cfg.out_dir, "Output directory for CSV files")->capture_default_str();
}

void add_replications(CLI::App& app, sbai::ExperimentConfig& cfg) {
  app.add_option("--reps", cfg.replications, "Number of replications")->capture_default_str();
  app.add_option("--workers", cfg.workers, "Worker threads")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structured best-arm identification: LUCB-micro runs and sample-complexity bounds"};
  app.require_subcommand(1);

  sbai::ExperimentConfig cfg;
  std::vector<double> deltas{0.1, 0.01, 0.001};
  bool only_general = false;
  bool only_minimax = false;

  auto* run = app.add_subcommand("run", "Run LUCB-micro once and write trace.csv and run_summary.csv");
  add_common(*run, cfg);

  auto* verify = app.add_subcommand("verify", "Monte Carlo replications; writes replications.csv");
  add_common(*verify, cfg);
  add_replications(*verify, cfg);

  auto* bounds = app.add_subcommand("bounds", "Lower bound and upper bounds; writes bounds.csv");
  add_common(*bounds, cfg);
  bounds->add_flag("--general-only", only_general, "Report only the general upper bound");
  bounds->add_flag("--minimax-only", only_minimax, "Report only the minimax upper bound");

  auto* sweep = app.add_subcommand("sweep", "Verify over several risk levels; writes sweep.csv");
  add_common(*sweep, cfg);
  add_replications(*sweep, cfg);
  sweep->add_option("--deltas", deltas, "Risk levels")->delimiter(',')->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (only_general && only_minimax) {
    std::cerr << "error: --general-only and --minimax-only are exclusive\n";
    return 2;
  }
  cfg.bound_general = !only_minimax;
  cfg.bound_minimax = !only_general;

  try {
    sbai::CommandOutput out;
    if (run->parsed()) {
      out = sbai::cmd_run(cfg, std::cerr);
    } else if (verify->parsed()) {
      out = sbai::cmd_verify(cfg, std::cerr);
    } else if (bounds->parsed()) {
      out = sbai::cmd_bounds(cfg, std::cerr);
    } else {
      out = sbai::cmd_sweep(cfg, deltas, std::cerr);
    }
    std::cout << out.summary_json << '\n';
    return out.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

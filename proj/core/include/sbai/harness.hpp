#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sbai/bounds.hpp"
#include "sbai/envs.hpp"
#include "sbai/lucb.hpp"

namespace sbai {

// Version of the CSV column sets written by the harness.
inline constexpr int kCsvSchemaVersion = 1;

struct ExperimentConfig {
  std::filesystem::path instance;
  double delta = 0.1;
  std::uint64_t replications = 1000;
  std::uint64_t seed = 1;
  std::uint64_t budget_cap = kDefaultBudgetCap;
  std::size_t theta_grid = kDefaultThetaGrid;
  std::filesystem::path out_dir = ".";
  unsigned workers = 1;
  bool bound_general = true;
  bool bound_minimax = true;

  // Throws std::invalid_argument on unusable values.
  void validate() const;
  // Non-fatal remarks, e.g. delta above the range the confidence bound covers.
  std::vector<std::string> warnings() const;
};

// ---------------------------------------------------------------------------
// Bounds

struct BoundsReport {
  double delta = 0.0;
  std::size_t observables = 0;
  std::string departure_source;  // "proof_sets" or "supplied"
  std::optional<LowerBoundResult> lower;
  std::string lower_error;       // set when the lower bound is undefined (e.g. delta >= 1/4)
  std::optional<HardnessReport> general;
  std::optional<HardnessReport> minimax;
};

BoundsReport compute_bounds(const Instance& instance, double delta, std::size_t theta_grid,
                            bool general = true, bool minimax = true);

// CSV "key,index,value": one row per scalar, then one "allocation,<i>,<n_i>" row per observable.
void write_bounds_csv(std::ostream& out, const BoundsReport& report);
std::string bounds_json(const BoundsReport& report);

// ---------------------------------------------------------------------------
// Monte Carlo verification

struct VerifyOptions {
  double delta = 0.1;
  std::uint64_t replications = 1000;
  std::uint64_t seed = 1;
  std::uint64_t budget_cap = kDefaultBudgetCap;
  std::size_t theta_grid = kDefaultThetaGrid;
  unsigned workers = 1;
  bool compute_lower_bound = true;
};

struct ReplicationRecord {
  std::uint64_t replication = 0;
  RunStatus status = RunStatus::undecided;
  std::uint64_t rounds = 0;
  std::optional<ArmIndex> recommendation;
  bool correct = false;
  bool good_event = false;
  bool crossover = false;
};

struct VerifyReport {
  std::uint64_t replications = 0;
  ArmIndex best_arm = 0;
  double error_rate = 0.0;      // decided with J != best arm
  double correct_rate = 0.0;
  double undecided_rate = 0.0;
  double good_event_rate = 0.0;
  double crossover_rate = 0.0;
  // Rounds T (each round takes two observations).
  double mean_rounds = 0.0;
  double sd_rounds = 0.0;
  double min_rounds = 0.0;
  double q25_rounds = 0.0;
  double median_rounds = 0.0;
  double q75_rounds = 0.0;
  double q90_rounds = 0.0;
  double max_rounds = 0.0;
  // Observations 2T, the unit of the lower bound.
  double mean_observations = 0.0;
  double se_observations = 0.0;
  std::uint64_t t_star_general = 0;
  std::optional<std::uint64_t> t_star_minimax;
  double frac_within_t_star_general = 0.0;
  std::optional<double> frac_within_t_star_minimax;
  std::optional<double> tau_star;
  std::vector<ReplicationRecord> records;  // ordered by replication index
};

VerifyReport verify(const Instance& instance, const VerifyOptions& options);

void write_replications_csv(std::ostream& out, const VerifyReport& report);
std::string verify_json(const VerifyReport& report);

// ---------------------------------------------------------------------------
// Sweep over risk levels

struct SweepRow {
  double delta = 0.0;
  std::string status = "ok";
  std::optional<double> tau_star;
  std::uint64_t t_star_general = 0;
  std::optional<std::uint64_t> t_star_minimax;
  double mean_rounds = 0.0;
  double mean_observations = 0.0;
  double error_rate = 0.0;
  double undecided_rate = 0.0;
};

std::vector<SweepRow> sweep(const Instance& instance, const std::vector<double>& deltas,
                            const VerifyOptions& base);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

// ---------------------------------------------------------------------------
// Commands: read the instance, write CSV files under out_dir and return the
// one-object JSON summary. Diagnostics go to `log`.

struct CommandOutput {
  int exit_code = 0;
  std::string summary_json;
};

CommandOutput cmd_run(const ExperimentConfig& config, std::ostream& log);
CommandOutput cmd_verify(const ExperimentConfig& config, std::ostream& log);
CommandOutput cmd_bounds(const ExperimentConfig& config, std::ostream& log);
CommandOutput cmd_sweep(const ExperimentConfig& config, const std::vector<double>& deltas,
                        std::ostream& log);

}  // namespace sbai

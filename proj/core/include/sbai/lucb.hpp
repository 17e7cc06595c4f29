#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "sbai/confidence.hpp"
#include "sbai/envs.hpp"
#include "sbai/reward_map.hpp"
#include "sbai/rng.hpp"

namespace sbai {

inline constexpr std::uint64_t kDefaultBudgetCap = 10'000'000;

struct Candidates {
  ArmIndex best = 0;       // B_t: argmax of payoffs under the lower bounds
  ArmIndex contender = 0;  // C_t: argmax of payoffs under the upper bounds, excluding B_t
  friend bool operator==(const Candidates&, const Candidates&) = default;
};

struct Probes {
  ObsIndex first = 0;   // I_t, probed on behalf of the best arm
  ObsIndex second = 0;  // J_t, probed on behalf of the contender
  friend bool operator==(const Probes&, const Probes&) = default;
};

struct TraceRow {
  std::uint64_t round = 0;
  Candidates candidates;
  Probes probes;
  bool stop = false;
  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

// B = argmax of payoff_lower, C = argmax of payoff_upper over arms != B;
// smallest index on ties. Requires at least two arms.
Candidates select_candidates(std::span<const double> payoff_lower, std::span<const double> payoff_upper);
// f_B(lower) >= f_C(upper).
bool should_stop(std::span<const double> payoff_lower, std::span<const double> payoff_upper,
                 Candidates candidates);

// Picks one observable from each candidate's cover set. The default rule is
// (j) for the identity map and the MinMax descent terminal for games.
using ObservableSelector =
    std::function<Probes(const RewardMap&, const ConfidenceTracker&, Candidates)>;

struct LucbOptions {
  std::optional<std::uint64_t> budget_cap = kDefaultBudgetCap;
  bool record_trace = true;
  ObservableSelector selector;
  ConfidenceTracker::Options tracker;
};

enum class StepOutcome { running, stopped, budget_exhausted };

// State of one LUCB-micro run. Each round picks the candidates from the
// current intervals, samples one cover-set observable for each, updates
// the intervals and stops once f_B(lower) >= f_C(upper) under the updated
// intervals, recommending the (updated) best candidate.
class LucbState {
 public:
  LucbState(RewardMap reward_map, double delta, LucbOptions options = {});

  Candidates select_candidates() const;
  Probes select_observables(Candidates candidates) const;
  bool should_stop(Candidates candidates) const;

  StepOutcome step(const Instance& instance, SeededStream& stream);

  std::uint64_t round() const { return round_; }
  std::uint64_t observations() const { return 2 * round_; }
  bool stopped() const { return stopped_; }
  bool budget_exhausted() const { return exhausted_; }
  std::optional<ArmIndex> recommendation() const { return recommendation_; }
  // Candidates under the current intervals.
  Candidates candidates() const { return select_candidates(); }
  std::optional<Probes> last_probes() const { return last_probes_; }

  const RewardMap& reward_map() const { return reward_map_; }
  const ConfidenceTracker& tracker() const { return tracker_; }
  ConfidenceTracker& tracker() { return tracker_; }
  const std::vector<TraceRow>& trace() const { return trace_; }
  std::optional<std::uint64_t> budget_cap() const { return options_.budget_cap; }

  // f(lower) and f(upper) under the current intervals.
  std::span<const double> payoff_lower() const { return payoff_lower_; }
  std::span<const double> payoff_upper() const { return payoff_upper_; }

 private:
  void refresh();

  RewardMap reward_map_;
  LucbOptions options_;
  ConfidenceTracker tracker_;
  std::vector<double> lower_values_;  // per game node
  std::vector<double> upper_values_;
  std::vector<double> payoff_lower_;
  std::vector<double> payoff_upper_;
  std::uint64_t round_ = 0;
  bool stopped_ = false;
  bool exhausted_ = false;
  std::optional<ArmIndex> recommendation_;
  std::optional<Probes> last_probes_;
  std::vector<TraceRow> trace_;
};

enum class RunStatus { decided, undecided };
const char* to_string(RunStatus status);

struct RunResult {
  RunStatus status = RunStatus::undecided;
  std::uint64_t rounds = 0;                  // T, algorithm iterations
  std::optional<ArmIndex> recommendation;    // J; empty when undecided
  std::vector<TraceRow> trace;
  std::vector<std::uint64_t> counts;         // final N_T(i)
  std::optional<bool> good_event;            // all intervals held the true means
  bool crossover = false;                    // some lower limit exceeded its upper limit

  std::uint64_t observations() const { return 2 * rounds; }
};

struct RunOptions {
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  std::optional<std::uint64_t> budget_cap = kDefaultBudgetCap;
  bool record_trace = true;
  // Register the instance means with the tracker to monitor the good event.
  bool monitor_truth = true;
  ObservableSelector selector;
};

RunResult run(const Instance& instance, double delta, const RunOptions& options = {});

// CSV: round,best,contender,probe1,probe2,stop_flag (1-based indices).
void write_trace_csv(std::ostream& out, std::span<const TraceRow> trace);
// CSV: status,rounds,observations,recommendation,good_event,crossover,n_1..n_L.
void write_run_summary_csv(std::ostream& out, const RunResult& result, bool header = true);

}  // namespace sbai

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sbai/game.hpp"
#include "sbai/proof_sets.hpp"
#include "sbai/reward_map.hpp"

namespace sbai {

// ---------------------------------------------------------------------------
// Lower bound: min sum n(i) s.t. sum_i n(i) d_i^2 >= 2 log(1/(4 delta)) for
// every departure d of the family, n >= 0.

inline constexpr std::size_t kDefaultThetaGrid = 66;

// 2 log(1/(4 delta)); requires 0 < delta < 1/4.
double lower_bound_rhs(double delta);

// Departure built from (j, theta, B, B') with B an upper proof set of the
// best arm and B' a lower proof set of arm j.
struct DeparturePattern {
  ArmIndex best = 0;
  ArmIndex arm = 0;
  double theta = 0.0;
  std::vector<ObsIndex> upper_set;
  std::vector<ObsIndex> lower_set;
};

// -(mu_i - theta)_+ on B \ B', (mu_i - theta)_- on B' \ B, theta - mu_i on
// B and B', zero elsewhere. Throws std::domain_error unless
// f_j(mu) <= theta <= f_best(mu).
Valuation departure_vector(const GameStructure& game, std::span<const double> mu,
                           const DeparturePattern& pattern);

// True iff the best arm of mu is no longer strictly best under mu + d
// (up to `tolerance`). Throws UniquenessError if mu itself has no unique best arm.
bool is_significant(const RewardMap& reward_map, std::span<const double> mu,
                    std::span<const double> departure, double tolerance = 1e-9);

struct Allocation {
  std::vector<double> n;
  double objective = 0.0;
};

enum class BoundStatus { finite, infinite };
const char* to_string(BoundStatus status);

struct LowerBoundResult {
  BoundStatus status = BoundStatus::finite;
  Allocation allocation;             // tau* = allocation.objective
  std::size_t constraints = 0;       // departures supplied or generated
  std::size_t constraints_used = 0;  // after dominance pruning
  std::size_t upper_proof_sets = 0;
  std::size_t lower_proof_sets = 0;
  std::size_t theta_grid = 0;
  ArmIndex best_arm = 0;
  std::size_t lp_pivots = 0;
  double max_violation = 0.0;        // largest relative shortfall of a constraint

  double tau_star() const { return allocation.objective; }
};

// Drops every departure whose absolute value dominates another one
// componentwise (duplicates keep their first occurrence).
std::vector<Valuation> prune_dominated(std::span<const Valuation> departures);

LowerBoundResult lower_bound_general(std::span<const Valuation> departures, double delta,
                                     bool prune = true);

struct LowerBoundOptions {
  std::size_t theta_grid = kDefaultThetaGrid;
  bool prune = true;
  std::size_t proof_set_limit = kDefaultProofSetLimit;
};

// Uniform grid of `size` points on [lo, hi] (endpoints included) merged with
// the entries of mu lying in the bracket; ascending and duplicate-free.
std::vector<double> theta_grid(double lo, double hi, std::size_t size, std::span<const double> mu);

struct DepartureFamily {
  ArmIndex best = 0;
  std::size_t upper_proof_sets = 0;
  std::size_t lower_proof_sets = 0;
  std::vector<DeparturePattern> patterns;
  std::vector<Valuation> departures;  // departures[k] built from patterns[k]
};

DepartureFamily minimal_departures(const GameStructure& game, std::span<const double> mu,
                                   const LowerBoundOptions& options = {});

LowerBoundResult lower_bound_minimax(const GameStructure& game, std::span<const double> mu,
                                     double delta, const LowerBoundOptions& options = {});

// Dispatches on the reward map; the identity map is treated as a depth-one game.
LowerBoundResult lower_bound(const RewardMap& reward_map, std::span<const double> mu, double delta,
                             const LowerBoundOptions& options = {});

// ---------------------------------------------------------------------------
// Upper bounds on the stopping round of LUCB-micro.

enum class HardnessVariant { general, minimax };
const char* to_string(HardnessVariant variant);

struct HardnessReport {
  double c = 0.0;    // (f_1 + f_2) / 2
  double gap = 0.0;  // f_1 - f_2
  double hardness = 0.0;
  std::uint64_t t_star = 0;
  HardnessVariant variant = HardnessVariant::general;
};

// H = sum_i min(1/(c - mu_i)^2, 4/gap^2); t* for the given delta.
HardnessReport hardness_general(const RewardMap& reward_map, std::span<const double> mu, double delta);

// Values of the strict prefixes (lengths 1..l-1) of the unique maximal
// history labelled i; empty when i is reached by several histories.
std::vector<double> path_values(const GameStructure& game, ObsIndex i, std::span<const double> mu);

// max - min; throws std::invalid_argument on an empty set.
double span_of(std::span<const double> values);

// H = sum_i min(1/Span(V(i) + {c, mu_i})^2, 4/gap^2).
HardnessReport hardness_minimax(const GameStructure& game, std::span<const double> mu, double delta);

// Smallest t >= 1 with 1 + 8 H beta(t, delta/(2L)) <= t (doubling + bisection).
std::uint64_t sample_complexity(double hardness, double delta, std::size_t num_observables);

}  // namespace sbai

#include "sbai/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "sbai/confidence.hpp"
#include "sbai/envs.hpp"
#include "sbai/lp.hpp"

namespace sbai {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Fills `out` with the departure of a pattern; no bracket check.
void fill_departure(std::span<const double> mu, double theta, const std::vector<ObsIndex>& upper_set,
                    const std::vector<ObsIndex>& lower_set, Valuation& out) {
  out.assign(mu.size(), 0.0);
  for (ObsIndex i : upper_set) out[i] = -std::max(mu[i] - theta, 0.0);
  for (ObsIndex i : lower_set) {
    const bool in_both = std::binary_search(upper_set.begin(), upper_set.end(), i);
    out[i] = in_both ? theta - mu[i] : std::max(theta - mu[i], 0.0);
  }
}

bool all_zero(const Valuation& d) {
  return std::all_of(d.begin(), d.end(), [](double x) { return x == 0.0; });
}

struct TopTwo {
  ArmIndex best;
  double first;
  double second;
};

TopTwo top_two(std::span<const double> f) {
  if (f.size() < 2) throw std::invalid_argument("bounds need at least two arms");
  const ArmIndex best = argmax(f);
  double second = -kInf;
  for (ArmIndex j = 0; j < f.size(); ++j) {
    if (j != best) second = std::max(second, f[j]);
  }
  if (!(f[best] > second)) throw UniquenessError("the best arm is not unique (zero gap)");
  return {best, f[best], second};
}

}  // namespace

double lower_bound_rhs(double delta) {
  if (!(delta > 0.0 && delta < 0.25)) {
    throw std::invalid_argument("the lower bound needs 0 < delta < 1/4");
  }
  return 2.0 * std::log(1.0 / (4.0 * delta));
}

Valuation departure_vector(const GameStructure& game, std::span<const double> mu,
                           const DeparturePattern& pattern) {
  const std::vector<double> f = payoff(game, mu);
  if (pattern.best >= f.size() || pattern.arm >= f.size() || pattern.arm == pattern.best) {
    throw std::invalid_argument("departure pattern refers to invalid arms");
  }
  if (!(f[pattern.arm] <= pattern.theta && pattern.theta <= f[pattern.best])) {
    throw std::domain_error("theta outside [f_j(mu), f_best(mu)]");
  }
  auto sorted = [](std::vector<ObsIndex> s) {
    std::sort(s.begin(), s.end());
    return s;
  };
  Valuation d;
  fill_departure(mu, pattern.theta, sorted(pattern.upper_set), pattern.lower_set, d);
  return d;
}

bool is_significant(const RewardMap& reward_map, std::span<const double> mu,
                    std::span<const double> departure, double tolerance) {
  if (departure.size() != mu.size()) throw std::invalid_argument("departure has the wrong length");
  const ArmIndex best = best_arm(reward_map, mu);
  Valuation moved(mu.begin(), mu.end());
  for (std::size_t i = 0; i < moved.size(); ++i) moved[i] += departure[i];
  const std::vector<double> f = reward_map.payoff(moved);
  double others = -kInf;
  for (ArmIndex j = 0; j < f.size(); ++j) {
    if (j != best) others = std::max(others, f[j]);
  }
  return f[best] <= others + tolerance;
}

const char* to_string(BoundStatus status) { return status == BoundStatus::finite ? "finite" : "infinite"; }

std::vector<Valuation> prune_dominated(std::span<const Valuation> departures) {
  std::vector<std::size_t> order(departures.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> mass(departures.size(), 0.0);
  for (std::size_t k = 0; k < departures.size(); ++k) {
    for (double x : departures[k]) mass[k] += x * x;
  }
  // A dominating (smaller) vector has no larger squared mass, so it is
  // always examined before the vectors it dominates.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return mass[a] < mass[b]; });

  std::vector<std::size_t> kept;
  for (std::size_t k : order) {
    const Valuation& d = departures[k];
    const bool dominated = std::any_of(kept.begin(), kept.end(), [&](std::size_t m) {
      const Valuation& e = departures[m];
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (std::abs(e[i]) > std::abs(d[i])) return false;
      }
      return true;
    });
    if (!dominated) kept.push_back(k);
  }
  std::sort(kept.begin(), kept.end());
  std::vector<Valuation> out;
  out.reserve(kept.size());
  for (std::size_t k : kept) out.push_back(departures[k]);
  return out;
}

LowerBoundResult lower_bound_general(std::span<const Valuation> departures, double delta, bool prune) {
  const double rhs = lower_bound_rhs(delta);
  LowerBoundResult result;
  result.constraints = departures.size();
  if (departures.empty()) return result;

  const std::size_t num_obs = departures.front().size();
  for (const auto& d : departures) {
    if (d.size() != num_obs) throw std::invalid_argument("departures differ in length");
    if (all_zero(d)) {
      // sum n(i) * 0 >= rhs > 0 has no solution.
      result.status = BoundStatus::infinite;
      result.allocation.n.assign(num_obs, kInf);
      result.allocation.objective = kInf;
      return result;
    }
  }

  const std::vector<Valuation> rows =
      prune ? prune_dominated(departures) : std::vector<Valuation>(departures.begin(), departures.end());
  result.constraints_used = rows.size();

  // Dual of  min 1'n  s.t.  W n >= rhs, n >= 0  with W = d^2 row-scaled to max 1:
  //   max sum_k (rhs / s_k) y_k  s.t.  W' y <= 1, y >= 0.
  // The row multipliers of the dual are the allocation n.
  const std::size_t m = rows.size();
  lp::DenseMatrix a(num_obs, m);
  std::vector<double> c(m);
  for (std::size_t k = 0; k < m; ++k) {
    double scale = 0.0;
    for (double x : rows[k]) scale = std::max(scale, x * x);
    for (std::size_t i = 0; i < num_obs; ++i) a(i, k) = rows[k][i] * rows[k][i] / scale;
    c[k] = rhs / scale;
  }
  const std::vector<double> ones(num_obs, 1.0);
  const lp::Solution sol = lp::maximize(a, ones, c);
  result.lp_pivots = sol.pivots;
  if (sol.status != lp::Status::optimal) {
    result.status = BoundStatus::infinite;
    result.allocation.n.assign(num_obs, kInf);
    result.allocation.objective = kInf;
    return result;
  }

  result.allocation.n.resize(num_obs);
  for (std::size_t i = 0; i < num_obs; ++i) result.allocation.n[i] = std::max(0.0, sol.dual[i]);
  result.allocation.objective =
      std::accumulate(result.allocation.n.begin(), result.allocation.n.end(), 0.0);
  for (const auto& d : departures) {
    double lhs = 0.0;
    for (std::size_t i = 0; i < num_obs; ++i) lhs += result.allocation.n[i] * d[i] * d[i];
    result.max_violation = std::max(result.max_violation, (rhs - lhs) / rhs);
  }
  return result;
}

std::vector<double> theta_grid(double lo, double hi, std::size_t size, std::span<const double> mu) {
  if (size < 2) throw std::invalid_argument("theta grid needs at least two points");
  if (!(lo <= hi)) throw std::invalid_argument("theta grid bracket is empty");
  std::vector<double> grid;
  grid.reserve(size + mu.size());
  for (std::size_t k = 0; k < size; ++k) {
    grid.push_back(k + 1 == size ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(size - 1));
  }
  for (double m : mu) {
    if (lo <= m && m <= hi) grid.push_back(m);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

DepartureFamily minimal_departures(const GameStructure& game, std::span<const double> mu,
                                   const LowerBoundOptions& options) {
  const std::vector<double> f = payoff(game, mu);
  const TopTwo top = top_two(f);

  DepartureFamily family;
  family.best = top.best;
  const std::vector<ProofSet> uppers =
      enumerate_proof_sets(game, top.best, ProofDirection::upper, options.proof_set_limit);
  family.upper_proof_sets = uppers.size();

  Valuation scratch;
  for (ArmIndex j = 0; j < game.arms(); ++j) {
    if (j == top.best) continue;
    const std::vector<ProofSet> lowers =
        enumerate_proof_sets(game, j, ProofDirection::lower, options.proof_set_limit);
    family.lower_proof_sets += lowers.size();
    const std::vector<double> grid = theta_grid(f[j], top.first, options.theta_grid, mu);
    for (const ProofSet& b : uppers) {
      for (const ProofSet& bp : lowers) {
        for (double theta : grid) {
          fill_departure(mu, theta, b.terminals, bp.terminals, scratch);
          family.patterns.push_back({top.best, j, theta, b.terminals, bp.terminals});
          family.departures.push_back(scratch);
        }
      }
    }
  }
  return family;
}

LowerBoundResult lower_bound_minimax(const GameStructure& game, std::span<const double> mu, double delta,
                                     const LowerBoundOptions& options) {
  lower_bound_rhs(delta);
  const DepartureFamily family = minimal_departures(game, mu, options);
  LowerBoundResult result = lower_bound_general(family.departures, delta, options.prune);
  if (result.allocation.n.empty()) result.allocation.n.assign(game.observables(), 0.0);
  result.upper_proof_sets = family.upper_proof_sets;
  result.lower_proof_sets = family.lower_proof_sets;
  result.theta_grid = options.theta_grid;
  result.best_arm = family.best;
  return result;
}

LowerBoundResult lower_bound(const RewardMap& reward_map, std::span<const double> mu, double delta,
                             const LowerBoundOptions& options) {
  if (const GameStructure* g = reward_map.game()) return lower_bound_minimax(*g, mu, delta, options);
  return lower_bound_minimax(identity_game(reward_map.arms()), mu, delta, options);
}

// ---------------------------------------------------------------------------

const char* to_string(HardnessVariant variant) {
  return variant == HardnessVariant::general ? "general" : "minimax";
}

HardnessReport hardness_general(const RewardMap& reward_map, std::span<const double> mu, double delta) {
  const TopTwo top = top_two(reward_map.payoff(mu));
  HardnessReport r;
  r.c = 0.5 * (top.first + top.second);
  r.gap = top.first - top.second;
  const double cap = 4.0 / (r.gap * r.gap);
  for (double m : mu) r.hardness += std::min(1.0 / ((r.c - m) * (r.c - m)), cap);
  r.t_star = sample_complexity(r.hardness, delta, mu.size());
  r.variant = HardnessVariant::general;
  return r;
}

std::vector<double> path_values(const GameStructure& game, ObsIndex i, std::span<const double> mu) {
  if (i >= game.observables()) throw std::out_of_range("path_values(): terminal out of range");
  const auto& histories = game.histories_of(i);
  if (histories.size() != 1) return {};
  std::vector<NodeId> prefixes = game.path(histories.front());
  prefixes.pop_back();
  if (prefixes.empty()) return {};
  const std::vector<double> values = game.evaluate(mu);
  std::vector<double> out;
  out.reserve(prefixes.size());
  for (NodeId h : prefixes) out.push_back(values[static_cast<std::size_t>(h)]);
  return out;
}

double span_of(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("span of an empty set");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo;
}

HardnessReport hardness_minimax(const GameStructure& game, std::span<const double> mu, double delta) {
  const TopTwo top = top_two(payoff(game, mu));
  HardnessReport r;
  r.c = 0.5 * (top.first + top.second);
  r.gap = top.first - top.second;
  const double cap = 4.0 / (r.gap * r.gap);
  for (ObsIndex i = 0; i < game.observables(); ++i) {
    std::vector<double> s = path_values(game, i, mu);
    s.push_back(r.c);
    s.push_back(mu[i]);
    const double w = span_of(s);
    r.hardness += std::min(1.0 / (w * w), cap);
  }
  r.t_star = sample_complexity(r.hardness, delta, game.observables());
  r.variant = HardnessVariant::minimax;
  return r;
}

std::uint64_t sample_complexity(double hardness, double delta, std::size_t num_observables) {
  if (!(hardness >= 0.0) || !std::isfinite(hardness)) {
    throw std::invalid_argument("sample_complexity(): hardness must be finite and nonnegative");
  }
  if (num_observables == 0) throw std::invalid_argument("sample_complexity(): L must be positive");
  const double risk = delta / (2.0 * static_cast<double>(num_observables));
  auto feasible = [&](std::uint64_t t) {
    return 1.0 + 8.0 * hardness * beta(t, risk) <= static_cast<double>(t);
  };
  // t - 1 - 8 H beta(t) is convex in t and negative at t = 1 unless H = 0,
  // so the feasible rounds form an up-set.
  if (feasible(1)) return 1;
  std::uint64_t hi = 2;
  while (!feasible(hi)) {
    if (hi > (std::numeric_limits<std::uint64_t>::max() >> 2)) {
      throw std::overflow_error("sample_complexity(): t* exceeds the integer range");
    }
    hi *= 2;
  }
  std::uint64_t lo = hi / 2;  // infeasible
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (feasible(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace sbai

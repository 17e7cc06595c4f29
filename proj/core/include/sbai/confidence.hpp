#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sbai/types.hpp"

namespace sbai {

// Anytime confidence radius exponent
//   beta(t, delta) = log(1/delta) + 3 log log(1/delta) + 1.5 (log log(e t))^+
// with natural logarithms. beta(0, .) is defined as beta(1, .).
// Throws std::invalid_argument unless 0 < delta < 1.
double beta(std::uint64_t t, double delta);

// Largest per-observable risk covered by the anytime concentration bound.
inline constexpr double kMaxTheoryRisk = 0.1;

struct ObservableStats {
  std::uint64_t n = 0;
  double mean = 0.0;
  double lower;
  double upper;
};

// Per-observable counts, empirical means and clipped confidence intervals
//   L_t(i) = max(L_{t-1}(i), mean - w),  U_t(i) = min(U_{t-1}(i), mean + w),
//   w = sqrt(2 beta(N, delta / (2L)) / N).
// Single owner; not safe for concurrent mutation.
class ConfidenceTracker {
 public:
  struct Options {
    // Disabling clipping exposes the raw intervals (diagnostic mode).
    bool clip = true;
  };

  ConfidenceTracker(std::size_t num_observables, double delta);
  ConfidenceTracker(std::size_t num_observables, double delta, Options options);

  void observe(ObsIndex i, double y);

  std::pair<double, double> interval(ObsIndex i) const;
  ObservableStats stats(ObsIndex i) const;
  std::uint64_t count(ObsIndex i) const { return counts_.at(i); }

  std::span<const double> lowers() const { return lower_; }
  std::span<const double> uppers() const { return upper_; }
  std::span<const std::uint64_t> counts() const { return counts_; }

  std::size_t size() const { return counts_.size(); }
  double delta() const { return delta_; }
  double per_observable_risk() const { return risk_; }
  // False when delta/(2L) exceeds the range the concentration bound covers.
  bool risk_within_theory() const { return risk_ <= kMaxTheoryRisk; }

  // Half-width of the unclipped interval after n >= 1 observations.
  double half_width(std::uint64_t n) const;

  // True once some stored lower limit exceeded its upper limit.
  bool crossover() const { return crossover_; }

  // Ground-truth monitoring for the harness: with the true means registered,
  // good_event() reports whether every interval has contained its mean so far.
  void set_truth(std::span<const double> mu);
  std::optional<bool> good_event() const;

  // CSV rows "observable,n,mean,lower,upper" with 1-based observable numbers.
  void write_csv(std::ostream& out, bool header = true) const;

 private:
  double delta_;
  double risk_;
  double log_terms_;  // log(1/risk) + 3 log log(1/risk)
  Options options_;
  std::vector<std::uint64_t> counts_;
  std::vector<double> sum_;
  std::vector<double> compensation_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  bool crossover_ = false;
  std::vector<double> truth_;
  bool good_ = true;
};

}  // namespace sbai

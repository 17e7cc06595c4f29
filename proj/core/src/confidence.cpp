#include "sbai/confidence.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace sbai {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_risk(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("confidence risk must lie in (0, 1), got " + std::to_string(delta));
  }
}

double log_terms(double delta) {
  const double l = std::log(1.0 / delta);
  return l + 3.0 * std::log(l);
}

double time_term(std::uint64_t t) {
  const double tt = static_cast<double>(t == 0 ? 1 : t);
  // log(e t) = 1 + log t
  return 1.5 * std::max(0.0, std::log1p(std::log(tt)));
}

}  // namespace

double beta(std::uint64_t t, double delta) {
  require_risk(delta);
  return log_terms(delta) + time_term(t);
}

ConfidenceTracker::ConfidenceTracker(std::size_t num_observables, double delta)
    : ConfidenceTracker(num_observables, delta, Options{}) {}

ConfidenceTracker::ConfidenceTracker(std::size_t num_observables, double delta, Options options)
    : delta_(delta),
      risk_(delta / (2.0 * static_cast<double>(num_observables))),
      options_(options),
      counts_(num_observables, 0),
      sum_(num_observables, 0.0),
      compensation_(num_observables, 0.0),
      lower_(num_observables, -kInf),
      upper_(num_observables, kInf) {
  if (num_observables == 0) throw std::invalid_argument("ConfidenceTracker needs L >= 1");
  require_risk(delta);
  log_terms_ = log_terms(risk_);
}

double ConfidenceTracker::half_width(std::uint64_t n) const {
  if (n == 0) return kInf;
  return std::sqrt(2.0 * (log_terms_ + time_term(n)) / static_cast<double>(n));
}

void ConfidenceTracker::observe(ObsIndex i, double y) {
  if (i >= counts_.size()) {
    throw std::out_of_range("observe(): observable " + std::to_string(i + 1) + " out of range");
  }
  if (!std::isfinite(y)) throw std::invalid_argument("observe(): non-finite observation");

  // Kahan–Babuska summation of the observations.
  const double t = sum_[i] + y;
  if (std::abs(sum_[i]) >= std::abs(y)) {
    compensation_[i] += (sum_[i] - t) + y;
  } else {
    compensation_[i] += (y - t) + sum_[i];
  }
  sum_[i] = t;
  const std::uint64_t n = ++counts_[i];

  const double mean = (sum_[i] + compensation_[i]) / static_cast<double>(n);
  const double w = half_width(n);
  if (options_.clip) {
    lower_[i] = std::max(lower_[i], mean - w);
    upper_[i] = std::min(upper_[i], mean + w);
  } else {
    lower_[i] = mean - w;
    upper_[i] = mean + w;
  }
  if (lower_[i] > upper_[i]) crossover_ = true;
  if (!truth_.empty() && !(lower_[i] <= truth_[i] && truth_[i] <= upper_[i])) good_ = false;
}

std::pair<double, double> ConfidenceTracker::interval(ObsIndex i) const {
  if (i >= counts_.size()) throw std::out_of_range("interval(): observable index out of range");
  return {lower_[i], upper_[i]};
}

ObservableStats ConfidenceTracker::stats(ObsIndex i) const {
  if (i >= counts_.size()) throw std::out_of_range("stats(): observable index out of range");
  ObservableStats s;
  s.n = counts_[i];
  s.mean = s.n == 0 ? 0.0 : (sum_[i] + compensation_[i]) / static_cast<double>(s.n);
  s.lower = lower_[i];
  s.upper = upper_[i];
  return s;
}

void ConfidenceTracker::set_truth(std::span<const double> mu) {
  if (mu.size() != counts_.size()) throw std::invalid_argument("set_truth(): length mismatch");
  truth_.assign(mu.begin(), mu.end());
  good_ = true;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!(lower_[i] <= mu[i] && mu[i] <= upper_[i])) good_ = false;
  }
}

std::optional<bool> ConfidenceTracker::good_event() const {
  if (truth_.empty()) return std::nullopt;
  return good_;
}

void ConfidenceTracker::write_csv(std::ostream& out, bool header) const {
  if (header) out << "observable,n,mean,lower,upper\n";
  const auto old = out.precision(17);
  for (ObsIndex i = 0; i < size(); ++i) {
    const ObservableStats s = stats(i);
    out << (i + 1) << ',' << s.n << ',' << s.mean << ',' << s.lower << ',' << s.upper << '\n';
  }
  out.precision(old);
}

}  // namespace sbai

#include "sbai/lucb.hpp"

#include <ostream>
#include <stdexcept>

namespace sbai {

LucbState::LucbState(RewardMap reward_map, double delta, LucbOptions options)
    : reward_map_(std::move(reward_map)),
      options_(std::move(options)),
      tracker_(reward_map_.observables(), delta, options_.tracker) {
  if (reward_map_.arms() < 2) throw std::invalid_argument("LUCB needs at least two arms");
  if (const GameStructure* g = reward_map_.game()) {
    lower_values_.resize(g->node_count());
    upper_values_.resize(g->node_count());
  }
  refresh();
}

void LucbState::refresh() {
  const GameStructure* g = reward_map_.game();
  if (!g) {
    payoff_lower_.assign(tracker_.lowers().begin(), tracker_.lowers().end());
    payoff_upper_.assign(tracker_.uppers().begin(), tracker_.uppers().end());
    return;
  }
  // Extended-real min/max: unobserved terminals carry -inf/+inf.
  g->evaluate(tracker_.lowers(), lower_values_);
  g->evaluate(tracker_.uppers(), upper_values_);
  payoff_lower_.resize(g->arms());
  payoff_upper_.resize(g->arms());
  for (ArmIndex j = 0; j < g->arms(); ++j) {
    payoff_lower_[j] = lower_values_[static_cast<std::size_t>(g->arm_node(j))];
    payoff_upper_[j] = upper_values_[static_cast<std::size_t>(g->arm_node(j))];
  }
}

Candidates select_candidates(std::span<const double> payoff_lower, std::span<const double> payoff_upper) {
  if (payoff_lower.size() < 2 || payoff_lower.size() != payoff_upper.size()) {
    throw std::invalid_argument("select_candidates(): need two or more arms with matching bounds");
  }
  Candidates c;
  c.best = argmax(payoff_lower);
  bool have = false;
  for (ArmIndex j = 0; j < payoff_upper.size(); ++j) {
    if (j == c.best) continue;
    if (!have || payoff_upper[j] > payoff_upper[c.contender]) {
      c.contender = j;
      have = true;
    }
  }
  return c;
}

bool should_stop(std::span<const double> payoff_lower, std::span<const double> payoff_upper,
                 Candidates candidates) {
  return payoff_lower[candidates.best] >= payoff_upper[candidates.contender];
}

Candidates LucbState::select_candidates() const {
  return sbai::select_candidates(payoff_lower_, payoff_upper_);
}

Probes LucbState::select_observables(Candidates candidates) const {
  if (options_.selector) return options_.selector(reward_map_, tracker_, candidates);
  const GameStructure* g = reward_map_.game();
  if (!g) return {candidates.best, candidates.contender};
  // Stored limits may cross off the good event; the descent still runs on them.
  const NodeId a = minmax_descent_values(*g, g->arm_node(candidates.best), lower_values_, upper_values_);
  const NodeId b =
      minmax_descent_values(*g, g->arm_node(candidates.contender), lower_values_, upper_values_);
  return {g->terminal(a), g->terminal(b)};
}

bool LucbState::should_stop(Candidates candidates) const {
  return sbai::should_stop(payoff_lower_, payoff_upper_, candidates);
}

StepOutcome LucbState::step(const Instance& instance, SeededStream& stream) {
  if (stopped_) throw std::logic_error("step(): the run has already stopped");
  if (exhausted_ || (options_.budget_cap && round_ >= *options_.budget_cap)) {
    exhausted_ = true;
    return StepOutcome::budget_exhausted;
  }
  if (instance.observables() != reward_map_.observables()) {
    throw std::invalid_argument("step(): instance does not match the reward map");
  }

  const Candidates chosen = select_candidates();
  const Probes probes = select_observables(chosen);
  const double y1 = instance.sample(probes.first, stream);
  const double y2 = instance.sample(probes.second, stream);
  tracker_.observe(probes.first, y1);
  tracker_.observe(probes.second, y2);
  ++round_;
  last_probes_ = probes;
  refresh();

  const Candidates now = select_candidates();
  stopped_ = should_stop(now);
  if (stopped_) recommendation_ = now.best;
  if (options_.record_trace) trace_.push_back({round_, chosen, probes, stopped_});
  return stopped_ ? StepOutcome::stopped : StepOutcome::running;
}

const char* to_string(RunStatus status) {
  return status == RunStatus::decided ? "decided" : "undecided";
}

RunResult run(const Instance& instance, double delta, const RunOptions& options) {
  LucbOptions lo;
  lo.budget_cap = options.budget_cap;
  lo.record_trace = options.record_trace;
  lo.selector = options.selector;
  LucbState state(instance.reward_map(), delta, std::move(lo));
  if (options.monitor_truth) state.tracker().set_truth(instance.means());

  SeededStream stream(options.seed, options.stream);
  StepOutcome outcome = StepOutcome::running;
  while (outcome == StepOutcome::running) outcome = state.step(instance, stream);

  RunResult r;
  r.status = outcome == StepOutcome::stopped ? RunStatus::decided : RunStatus::undecided;
  r.rounds = state.round();
  r.recommendation = state.recommendation();
  r.trace = state.trace();
  r.counts.assign(state.tracker().counts().begin(), state.tracker().counts().end());
  r.good_event = state.tracker().good_event();
  r.crossover = state.tracker().crossover();
  return r;
}

void write_trace_csv(std::ostream& out, std::span<const TraceRow> trace) {
  out << "round,best,contender,probe1,probe2,stop_flag\n";
  for (const TraceRow& row : trace) {
    out << row.round << ',' << row.candidates.best + 1 << ',' << row.candidates.contender + 1 << ','
        << row.probes.first + 1 << ',' << row.probes.second + 1 << ',' << (row.stop ? 1 : 0) << '\n';
  }
}

void write_run_summary_csv(std::ostream& out, const RunResult& result, bool header) {
  if (header) {
    out << "status,rounds,observations,recommendation,good_event,crossover";
    for (std::size_t i = 0; i < result.counts.size(); ++i) out << ",n_" << i + 1;
    out << '\n';
  }
  out << to_string(result.status) << ',' << result.rounds << ',' << result.observations() << ',';
  if (result.recommendation) out << *result.recommendation + 1;
  out << ',';
  if (result.good_event) out << (*result.good_event ? 1 : 0);
  out << ',' << (result.crossover ? 1 : 0);
  for (auto n : result.counts) out << ',' << n;
  out << '\n';
}

}  // namespace sbai

#include "sbai/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace sbai {

void ExperimentConfig::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("--delta must lie in (0, 1)");
  if (replications < 1) throw std::invalid_argument("--reps must be at least 1");
  if (budget_cap < 1) throw std::invalid_argument("--cap must be at least 1");
  if (theta_grid < 2) throw std::invalid_argument("--theta-grid must be at least 2");
  if (workers < 1) throw std::invalid_argument("--workers must be at least 1");
}

std::vector<std::string> ExperimentConfig::warnings() const {
  std::vector<std::string> w;
  if (delta > kMaxTheoryRisk) {
    w.push_back("delta = " + std::to_string(delta) +
                " exceeds 0.1; the anytime confidence bound is only guaranteed for delta <= 0.1");
  }
  return w;
}

namespace {

template <typename Fn>
void parallel_for(std::uint64_t count, unsigned workers, Fn&& fn) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::uint64_t>(count, 1024))));
  if (workers == 1) {
    for (std::uint64_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::uint64_t k = next++; k < count && !failed; k = next++) {
        try {
          fn(k);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// Shortest representation that reads back to the same double.
std::string num(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::optional<LowerBoundResult> try_lower_bound(const Instance& instance, double delta,
                                                std::size_t theta_grid, std::string* error) {
  try {
    if (instance.departures()) {
      LowerBoundResult r = lower_bound_general(*instance.departures(), delta);
      if (r.allocation.n.empty()) r.allocation.n.assign(instance.observables(), 0.0);
      return r;
    }
    LowerBoundOptions opt;
    opt.theta_grid = theta_grid;
    return lower_bound(instance.reward_map(), instance.means(), delta, opt);
  } catch (const std::invalid_argument& e) {
    if (error) *error = e.what();
    return std::nullopt;
  }
}

nlohmann::json hardness_json(const HardnessReport& h) {
  return {{"variant", to_string(h.variant)}, {"c", h.c}, {"gap", h.gap}, {"H", h.hardness},
          {"t_star_rounds", h.t_star}, {"t_star_observations", 2 * h.t_star}};
}

nlohmann::json lower_json(const LowerBoundResult& lb) {
  nlohmann::json j = {{"status", to_string(lb.status)},
                      {"constraints", lb.constraints},
                      {"constraints_after_pruning", lb.constraints_used},
                      {"upper_proof_sets", lb.upper_proof_sets},
                      {"lower_proof_sets", lb.lower_proof_sets},
                      {"theta_grid", lb.theta_grid},
                      {"max_relative_violation", lb.max_violation}};
  if (lb.status == BoundStatus::finite) {
    j["tau_star_observations"] = lb.tau_star();
    j["allocation"] = lb.allocation.n;
  } else {
    j["tau_star_observations"] = "inf";
  }
  return j;
}

std::ofstream open_output(const std::filesystem::path& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / name);
  if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
  return out;
}

Instance load_checked(const ExperimentConfig& config, std::ostream& log) {
  config.validate();
  for (const auto& w : config.warnings()) log << "warning: " << w << '\n';
  return load_instance(config.instance);
}

}  // namespace

// ---------------------------------------------------------------------------

BoundsReport compute_bounds(const Instance& instance, double delta, std::size_t theta_grid, bool general,
                            bool minimax) {
  BoundsReport report;
  report.delta = delta;
  report.observables = instance.observables();
  report.departure_source = instance.departures() ? "supplied" : "proof_sets";
  report.lower = try_lower_bound(instance, delta, theta_grid, &report.lower_error);
  if (general) report.general = hardness_general(instance.reward_map(), instance.means(), delta);
  if (minimax && instance.reward_map().game()) {
    report.minimax = hardness_minimax(*instance.reward_map().game(), instance.means(), delta);
  }
  return report;
}

void write_bounds_csv(std::ostream& out, const BoundsReport& r) {
  out << "key,index,value\n";
  out << "delta,," << num(r.delta) << '\n';
  out << "L,," << r.observables << '\n';
  out << "departure_source,," << r.departure_source << '\n';
  if (r.lower) {
    out << "lower_bound_status,," << to_string(r.lower->status) << '\n';
    out << "tau_star_observations,," << num(r.lower->tau_star()) << '\n';
    out << "constraints,," << r.lower->constraints << '\n';
    out << "constraints_after_pruning,," << r.lower->constraints_used << '\n';
    out << "upper_proof_sets,," << r.lower->upper_proof_sets << '\n';
    out << "lower_proof_sets,," << r.lower->lower_proof_sets << '\n';
    out << "theta_grid,," << r.lower->theta_grid << '\n';
  } else {
    out << "lower_bound_status,,undefined\n";
  }
  bool first = true;
  for (const auto* h : {r.general ? &*r.general : nullptr, r.minimax ? &*r.minimax : nullptr}) {
    if (!h) continue;
    if (first) {
      out << "c,," << num(h->c) << '\n';
      out << "gap,," << num(h->gap) << '\n';
      first = false;
    }
    const std::string v = to_string(h->variant);
    out << "H_" << v << ",," << num(h->hardness) << '\n';
    out << "t_star_rounds_" << v << ",," << h->t_star << '\n';
  }
  if (r.lower) {
    for (std::size_t i = 0; i < r.lower->allocation.n.size(); ++i) {
      out << "allocation," << i + 1 << ',' << num(r.lower->allocation.n[i]) << '\n';
    }
  }
}

std::string bounds_json(const BoundsReport& r) {
  nlohmann::json j = {{"command", "bounds"},
                      {"csv_schema", kCsvSchemaVersion},
                      {"delta", r.delta},
                      {"L", r.observables},
                      {"departure_source", r.departure_source}};
  if (r.lower) {
    j["lower_bound"] = lower_json(*r.lower);
  } else {
    j["lower_bound"] = {{"status", "undefined"}, {"reason", r.lower_error}};
  }
  if (r.general) j["upper_bound_general"] = hardness_json(*r.general);
  if (r.minimax) j["upper_bound_minimax"] = hardness_json(*r.minimax);
  return j.dump();
}

// ---------------------------------------------------------------------------

VerifyReport verify(const Instance& instance, const VerifyOptions& options) {
  if (options.replications < 1) throw std::invalid_argument("verify(): need at least one replication");
  VerifyReport report;
  report.replications = options.replications;
  report.best_arm = best_arm(instance);

  const HardnessReport general = hardness_general(instance.reward_map(), instance.means(), options.delta);
  report.t_star_general = general.t_star;
  if (const GameStructure* g = instance.reward_map().game()) {
    report.t_star_minimax = hardness_minimax(*g, instance.means(), options.delta).t_star;
  }
  if (options.compute_lower_bound) {
    const auto lb = try_lower_bound(instance, options.delta, options.theta_grid, nullptr);
    if (lb && lb->status == BoundStatus::finite) report.tau_star = lb->tau_star();
  }

  report.records.resize(options.replications);
  parallel_for(options.replications, options.workers, [&](std::uint64_t r) {
    RunOptions ro;
    ro.seed = options.seed;
    ro.stream = r;
    ro.budget_cap = options.budget_cap;
    ro.record_trace = false;
    ro.monitor_truth = true;
    const RunResult res = run(instance, options.delta, ro);
    ReplicationRecord& rec = report.records[r];
    rec.replication = r;
    rec.status = res.status;
    rec.rounds = res.rounds;
    rec.recommendation = res.recommendation;
    rec.correct = res.status == RunStatus::decided && res.recommendation == report.best_arm;
    rec.good_event = res.good_event.value_or(false);
    rec.crossover = res.crossover;
  });

  const auto n = static_cast<double>(options.replications);
  std::vector<double> rounds;
  rounds.reserve(report.records.size());
  std::uint64_t errors = 0, undecided = 0, good = 0, crossed = 0, within_general = 0, within_minimax = 0;
  for (const auto& rec : report.records) {
    rounds.push_back(static_cast<double>(rec.rounds));
    if (rec.status == RunStatus::undecided) {
      ++undecided;
    } else if (!rec.correct) {
      ++errors;
    }
    good += rec.good_event ? 1 : 0;
    crossed += rec.crossover ? 1 : 0;
    const bool decided = rec.status == RunStatus::decided;
    within_general += decided && rec.rounds <= report.t_star_general ? 1 : 0;
    if (report.t_star_minimax) within_minimax += decided && rec.rounds <= *report.t_star_minimax ? 1 : 0;
  }
  report.error_rate = static_cast<double>(errors) / n;
  report.undecided_rate = static_cast<double>(undecided) / n;
  report.correct_rate = 1.0 - report.error_rate - report.undecided_rate;
  report.good_event_rate = static_cast<double>(good) / n;
  report.crossover_rate = static_cast<double>(crossed) / n;
  report.frac_within_t_star_general = static_cast<double>(within_general) / n;
  if (report.t_star_minimax) report.frac_within_t_star_minimax = static_cast<double>(within_minimax) / n;

  double sum = 0.0;
  for (double t : rounds) sum += t;
  report.mean_rounds = sum / n;
  double ss = 0.0;
  for (double t : rounds) ss += (t - report.mean_rounds) * (t - report.mean_rounds);
  report.sd_rounds = rounds.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  report.mean_observations = 2.0 * report.mean_rounds;
  report.se_observations = 2.0 * report.sd_rounds / std::sqrt(n);

  std::sort(rounds.begin(), rounds.end());
  report.min_rounds = rounds.front();
  report.q25_rounds = quantile(rounds, 0.25);
  report.median_rounds = quantile(rounds, 0.5);
  report.q75_rounds = quantile(rounds, 0.75);
  report.q90_rounds = quantile(rounds, 0.9);
  report.max_rounds = rounds.back();
  return report;
}

void write_replications_csv(std::ostream& out, const VerifyReport& report) {
  out << "replication,status,rounds,observations,recommendation,correct,good_event,crossover\n";
  for (const auto& rec : report.records) {
    out << rec.replication << ',' << to_string(rec.status) << ',' << rec.rounds << ',' << 2 * rec.rounds << ',';
    if (rec.recommendation) out << *rec.recommendation + 1;
    out << ',' << (rec.correct ? 1 : 0) << ',' << (rec.good_event ? 1 : 0) << ',' << (rec.crossover ? 1 : 0)
        << '\n';
  }
}

std::string verify_json(const VerifyReport& r) {
  nlohmann::json j = {{"command", "verify"},
                      {"csv_schema", kCsvSchemaVersion},
                      {"replications", r.replications},
                      {"best_arm", r.best_arm + 1},
                      {"error_rate", r.error_rate},
                      {"correct_rate", r.correct_rate},
                      {"undecided_rate", r.undecided_rate},
                      {"good_event_rate", r.good_event_rate},
                      {"crossover_rate", r.crossover_rate},
                      {"rounds",
                       {{"mean", r.mean_rounds},
                        {"sd", r.sd_rounds},
                        {"min", r.min_rounds},
                        {"q25", r.q25_rounds},
                        {"median", r.median_rounds},
                        {"q75", r.q75_rounds},
                        {"q90", r.q90_rounds},
                        {"max", r.max_rounds}}},
                      {"observations", {{"mean", r.mean_observations}, {"se", r.se_observations}}},
                      {"t_star_rounds_general", r.t_star_general},
                      {"frac_rounds_within_t_star_general", r.frac_within_t_star_general}};
  if (r.t_star_minimax) {
    j["t_star_rounds_minimax"] = *r.t_star_minimax;
    j["frac_rounds_within_t_star_minimax"] = *r.frac_within_t_star_minimax;
  }
  if (r.tau_star) j["tau_star_observations"] = *r.tau_star;
  return j.dump();
}

// ---------------------------------------------------------------------------

std::vector<SweepRow> sweep(const Instance& instance, const std::vector<double>& deltas,
                            const VerifyOptions& base) {
  std::vector<SweepRow> rows;
  for (double delta : deltas) {
    SweepRow row;
    row.delta = delta;
    try {
      VerifyOptions opt = base;
      opt.delta = delta;
      const VerifyReport rep = verify(instance, opt);
      row.tau_star = rep.tau_star;
      row.t_star_general = rep.t_star_general;
      row.t_star_minimax = rep.t_star_minimax;
      row.mean_rounds = rep.mean_rounds;
      row.mean_observations = rep.mean_observations;
      row.error_rate = rep.error_rate;
      row.undecided_rate = rep.undecided_rate;
    } catch (const std::exception& e) {
      row.status = std::string("error: ") + e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "delta,status,tau_star_observations,t_star_rounds_general,t_star_rounds_minimax,"
         "mean_rounds,mean_observations,error_rate,undecided_rate\n";
  for (const auto& r : rows) {
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    out << num(r.delta) << ',' << status << ',';
    if (r.tau_star) out << num(*r.tau_star);
    out << ',' << r.t_star_general << ',';
    if (r.t_star_minimax) out << *r.t_star_minimax;
    out << ',' << num(r.mean_rounds) << ',' << num(r.mean_observations) << ',' << num(r.error_rate) << ','
        << num(r.undecided_rate) << '\n';
  }
}

// ---------------------------------------------------------------------------

CommandOutput cmd_run(const ExperimentConfig& config, std::ostream& log) {
  const Instance instance = load_checked(config, log);
  RunOptions ro;
  ro.seed = config.seed;
  ro.stream = 0;
  ro.budget_cap = config.budget_cap;
  const RunResult result = run(instance, config.delta, ro);

  auto trace = open_output(config.out_dir, "trace.csv");
  write_trace_csv(trace, result.trace);
  auto summary = open_output(config.out_dir, "run_summary.csv");
  write_run_summary_csv(summary, result);

  nlohmann::json j = {{"command", "run"},
                      {"csv_schema", kCsvSchemaVersion},
                      {"status", to_string(result.status)},
                      {"rounds", result.rounds},
                      {"observations", result.observations()},
                      {"counts", result.counts},
                      {"crossover", result.crossover}};
  j["recommendation"] = result.recommendation ? nlohmann::json(*result.recommendation + 1) : nlohmann::json();
  if (result.good_event) j["good_event"] = *result.good_event;
  try {
    j["best_arm"] = best_arm(instance) + 1;
  } catch (const UniquenessError&) {
    j["best_arm"] = nullptr;
  }
  if (result.status == RunStatus::undecided) {
    log << "run stopped at the budget cap of " << config.budget_cap << " rounds without a decision\n";
  }
  return {result.status == RunStatus::decided ? 0 : 3, j.dump()};
}

CommandOutput cmd_verify(const ExperimentConfig& config, std::ostream& log) {
  const Instance instance = load_checked(config, log);
  if (config.replications < 100) log << "warning: fewer than 100 replications; rates are rough\n";
  VerifyOptions opt;
  opt.delta = config.delta;
  opt.replications = config.replications;
  opt.seed = config.seed;
  opt.budget_cap = config.budget_cap;
  opt.theta_grid = config.theta_grid;
  opt.workers = config.workers;
  const VerifyReport report = verify(instance, opt);
  auto out = open_output(config.out_dir, "replications.csv");
  write_replications_csv(out, report);
  return {0, verify_json(report)};
}

CommandOutput cmd_bounds(const ExperimentConfig& config, std::ostream& log) {
  const Instance instance = load_checked(config, log);
  const BoundsReport report =
      compute_bounds(instance, config.delta, config.theta_grid, config.bound_general, config.bound_minimax);
  if (report.lower && report.lower->status == BoundStatus::infinite) {
    log << "lower bound is infinite: a departure vanishes (means on a decision boundary)\n";
  }
  auto out = open_output(config.out_dir, "bounds.csv");
  write_bounds_csv(out, report);
  return {0, bounds_json(report)};
}

CommandOutput cmd_sweep(const ExperimentConfig& config, const std::vector<double>& deltas, std::ostream& log) {
  const Instance instance = load_checked(config, log);
  if (deltas.empty()) throw std::invalid_argument("sweep needs at least one delta");
  VerifyOptions opt;
  opt.replications = config.replications;
  opt.seed = config.seed;
  opt.budget_cap = config.budget_cap;
  opt.theta_grid = config.theta_grid;
  opt.workers = config.workers;
  const std::vector<SweepRow> rows = sweep(instance, deltas, opt);
  auto out = open_output(config.out_dir, "sweep.csv");
  write_sweep_csv(out, rows);

  nlohmann::json j = {{"command", "sweep"}, {"csv_schema", kCsvSchemaVersion}, {"rows", rows.size()}};
  std::size_t failed = 0;
  for (const auto& r : rows) failed += r.status == "ok" ? 0 : 1;
  j["failed_rows"] = failed;
  return {failed == 0 ? 0 : 4, j.dump()};
}

}  // namespace sbai

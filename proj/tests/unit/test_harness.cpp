#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sbai/harness.hpp"

using namespace sbai;
namespace fs = std::filesystem;

namespace {

std::string data(const std::string& name) { return std::string(SBAI_TEST_DATA_DIR) + "/" + name; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("sbai_test_" + name);
  fs::remove_all(p);
  return p;
}

ExperimentConfig config(const std::string& instance, const std::string& out) {
  ExperimentConfig c;
  c.instance = data(instance);
  c.out_dir = scratch(out);
  return c;
}

// Golden files hold the expected bytes; set SBAI_UPDATE_GOLDEN=1 to rewrite them.
void expect_golden(const std::string& actual, const std::string& name) {
  const fs::path p = fs::path(SBAI_GOLDEN_DIR) / name;
  if (std::getenv("SBAI_UPDATE_GOLDEN")) {
    std::ofstream(p) << actual;
    return;
  }
  ASSERT_TRUE(fs::exists(p)) << p;
  EXPECT_EQ(actual, slurp(p)) << name;
}

}  // namespace

TEST(Config, ValidationAndWarnings) {
  ExperimentConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_TRUE(c.warnings().empty());
  c.delta = 0.2;
  EXPECT_EQ(c.warnings().size(), 1u);
  c.delta = 1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.delta = 0.1;
  c.replications = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Bounds, TwoArmReport) {
  const Instance inst = load_instance(data("two_arm.json"));
  const BoundsReport r = compute_bounds(inst, 0.01, kDefaultThetaGrid);
  ASSERT_TRUE(r.lower.has_value());
  EXPECT_NEAR(r.lower->tau_star() / (8.0 * std::log(25.0)), 1.0, 0.01);
  EXPECT_EQ(r.departure_source, "proof_sets");
  ASSERT_TRUE(r.general.has_value());
  EXPECT_FALSE(r.minimax.has_value());
  std::ostringstream os;
  write_bounds_csv(os, r);
  expect_golden(os.str(), "bounds_two_arm.csv");

  const auto j = nlohmann::json::parse(bounds_json(r));
  EXPECT_EQ(j["lower_bound"]["status"], "finite");
  EXPECT_EQ(j["upper_bound_general"]["H"], 8.0);
}

TEST(Bounds, UndefinedLowerBoundForLargeDelta) {
  const Instance inst = load_instance(data("two_arm.json"));
  const BoundsReport r = compute_bounds(inst, 0.3, kDefaultThetaGrid);
  EXPECT_FALSE(r.lower.has_value());
  EXPECT_FALSE(r.lower_error.empty());
  EXPECT_EQ(nlohmann::json::parse(bounds_json(r))["lower_bound"]["status"], "undefined");
}

TEST(Bounds, ZeroDepartureInstance) {
  auto c = config("zero_departures.json", "bounds_zero");
  std::ostringstream log;
  const auto out = cmd_bounds(c, log);
  EXPECT_EQ(out.exit_code, 0);
  const auto j = nlohmann::json::parse(out.summary_json);
  EXPECT_EQ(j["departure_source"], "supplied");
  EXPECT_EQ(j["lower_bound"]["tau_star_observations"], 0.0);
  EXPECT_TRUE(fs::exists(c.out_dir / "bounds.csv"));
}

TEST(Bounds, Depth2ZeroAllocationInCsv) {
  auto c = config("depth2_k3.json", "bounds_depth2");
  std::ostringstream log;
  const auto j = nlohmann::json::parse(cmd_bounds(c, log).summary_json);
  int zeros = 0;
  for (double n : j["lower_bound"]["allocation"]) zeros += n < 1e-6 ? 1 : 0;
  EXPECT_EQ(zeros, 4);
  EXPECT_TRUE(j.contains("upper_bound_minimax"));
}

TEST(Verify, RatesAddUpAndReproduce) {
  const Instance inst = load_instance(data("transposition.json"));
  VerifyOptions opt;
  opt.replications = 60;
  opt.seed = 5;
  const VerifyReport a = verify(inst, opt);
  EXPECT_NEAR(a.error_rate + a.correct_rate + a.undecided_rate, 1.0, 1e-12);
  EXPECT_EQ(a.records.size(), 60u);
  EXPECT_LE(a.min_rounds, a.q25_rounds);
  EXPECT_LE(a.q25_rounds, a.median_rounds);
  EXPECT_LE(a.median_rounds, a.q75_rounds);
  EXPECT_LE(a.q75_rounds, a.q90_rounds);
  EXPECT_LE(a.q90_rounds, a.max_rounds);
  EXPECT_DOUBLE_EQ(a.mean_observations, 2.0 * a.mean_rounds);
  ASSERT_TRUE(a.t_star_minimax.has_value());
  EXPECT_LE(*a.t_star_minimax, a.t_star_general);

  opt.workers = 3;
  const VerifyReport b = verify(inst, opt);
  EXPECT_EQ(verify_json(a), verify_json(b));
  std::ostringstream ra, rb;
  write_replications_csv(ra, a);
  write_replications_csv(rb, b);
  EXPECT_EQ(ra.str(), rb.str());
}

TEST(Verify, GoldenReplications) {
  const Instance inst = load_instance(data("two_arm.json"));
  VerifyOptions opt;
  opt.replications = 8;
  opt.seed = 1;
  std::ostringstream os;
  write_replications_csv(os, verify(inst, opt));
  expect_golden(os.str(), "replications_two_arm.csv");
}

TEST(Commands, RunWritesTraceAndSummary) {
  auto c = config("two_arm.json", "run");
  c.delta = 0.05;
  std::ostringstream log;
  const auto out = cmd_run(c, log);
  EXPECT_EQ(out.exit_code, 0);
  const auto j = nlohmann::json::parse(out.summary_json);
  EXPECT_EQ(j["status"], "decided");
  EXPECT_EQ(j["recommendation"], 1);
  EXPECT_EQ(j["observations"].get<int>(), 2 * j["rounds"].get<int>());
  const std::string trace = slurp(c.out_dir / "trace.csv");
  EXPECT_EQ(trace.substr(0, trace.find('\n')), "round,best,contender,probe1,probe2,stop_flag");
  expect_golden(trace, "trace_two_arm.csv");
  EXPECT_EQ(slurp(c.out_dir / "run_summary.csv").substr(0, 6), "status");
}

TEST(Commands, BudgetCapIsUndecided) {
  auto c = config("two_arm.json", "run_cap");
  c.budget_cap = 1;
  std::ostringstream log;
  const auto out = cmd_run(c, log);
  EXPECT_NE(out.exit_code, 0);
  const auto j = nlohmann::json::parse(out.summary_json);
  EXPECT_EQ(j["status"], "undecided");
  EXPECT_TRUE(j["recommendation"].is_null());
  EXPECT_NE(log.str().find("budget cap"), std::string::npos);
}

TEST(Commands, WarnsAboveTheoryRange) {
  auto c = config("two_arm.json", "run_warn");
  c.delta = 0.2;
  std::ostringstream log;
  cmd_run(c, log);
  EXPECT_NE(log.str().find("warning"), std::string::npos);
}

TEST(Commands, MissingInstanceFails) {
  auto c = config("does_not_exist.json", "missing");
  std::ostringstream log;
  EXPECT_THROW(cmd_run(c, log), std::exception);
}

TEST(Sweep, ClosedFormAndMonotone) {
  auto c = config("two_arm.json", "sweep");
  c.replications = 50;
  std::ostringstream log;
  const std::vector<double> deltas{0.01, 0.05, 0.1};
  const auto out = cmd_sweep(c, deltas, log);
  EXPECT_EQ(out.exit_code, 0);
  const Instance inst = load_instance(c.instance);
  VerifyOptions opt;
  opt.replications = 50;
  const auto rows = sweep(inst, deltas, opt);
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    EXPECT_EQ(rows[k].status, "ok");
    ASSERT_TRUE(rows[k].tau_star.has_value());
    EXPECT_NEAR(*rows[k].tau_star / (8.0 * std::log(1.0 / (4.0 * deltas[k]))), 1.0, 0.01);
    if (k > 0) {
      EXPECT_LE(*rows[k].tau_star, *rows[k - 1].tau_star);
      EXPECT_LE(rows[k].t_star_general, rows[k - 1].t_star_general);
    }
    EXPECT_GE(rows[k].mean_observations, *rows[k].tau_star);
    EXPECT_LE(rows[k].mean_rounds, static_cast<double>(rows[k].t_star_general));
  }
  std::ostringstream os;
  write_sweep_csv(os, rows);
  EXPECT_EQ(os.str(), slurp(c.out_dir / "sweep.csv"));
}

TEST(Sweep, BadDeltaRowReportsError) {
  const Instance inst = load_instance(data("two_arm.json"));
  VerifyOptions opt;
  opt.replications = 5;
  const auto rows = sweep(inst, {0.1, 1.5}, opt);
  EXPECT_EQ(rows[0].status, "ok");
  EXPECT_NE(rows[1].status.find("error"), std::string::npos);
}

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "sbai/confidence.hpp"

using namespace sbai;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
// High-precision evaluations of the formula.
constexpr double kBeta1At01 = 4.804682428737913083427630598256981494122;
constexpr double kBeta1At005 = 6.287298374648837102272262284487949846476;
constexpr double kBeta10At01 = 6.596740713715356061318657230146585438138;
constexpr double kHalfWidth1At005 = 3.546067786901101275187600299983546384596;
}  // namespace

TEST(Beta, MatchesHighPrecisionValues) {
  EXPECT_NEAR(beta(1, 0.1), kBeta1At01, 1e-12);
  EXPECT_NEAR(beta(1, 0.05), kBeta1At005, 1e-12);
  EXPECT_NEAR(beta(10, 0.1), kBeta10At01, 1e-12);
  EXPECT_EQ(beta(0, 0.1), beta(1, 0.1));
}

TEST(Beta, IncrementIdentityAndMonotonicity) {
  for (double d : {0.3, 0.1, 0.01, 1e-6}) {
    double prev = beta(1, d);
    for (std::uint64_t t : {2ULL, 3ULL, 10ULL, 1000ULL, 123456789ULL}) {
      const double b = beta(t, d);
      EXPECT_GE(b, prev);
      const double inc = 1.5 * std::max(0.0, std::log(std::log(std::exp(1.0) * static_cast<double>(t))));
      EXPECT_NEAR(b - beta(1, d), inc, 1e-12);
      EXPECT_NEAR(b, static_cast<double>(oracle::beta_reference(t, d)), 1e-12);
      prev = b;
    }
  }
}

TEST(Beta, RejectsOutOfRangeDelta) {
  EXPECT_THROW(beta(1, 0.0), std::invalid_argument);
  EXPECT_THROW(beta(1, 1.0), std::invalid_argument);
  EXPECT_THROW(beta(1, -0.5), std::invalid_argument);
  EXPECT_THROW(beta(1, std::nan("")), std::invalid_argument);
}

TEST(ConfidenceTracker, UnobservedIsUnbounded) {
  ConfidenceTracker t(3, 0.1);
  EXPECT_EQ(t.interval(1), std::make_pair(-kInf, kInf));
  const auto s = t.stats(2);
  EXPECT_EQ(s.n, 0u);
  EXPECT_EQ(s.mean, 0.0);
  EXPECT_THROW(t.interval(3), std::out_of_range);
}

TEST(ConfidenceTracker, FirstObservation) {
  ConfidenceTracker t(2, 0.2);
  EXPECT_DOUBLE_EQ(t.per_observable_risk(), 0.05);
  t.observe(0, 0.5);
  const auto s = t.stats(0);
  EXPECT_EQ(s.n, 1u);
  EXPECT_EQ(s.mean, 0.5);
  EXPECT_NEAR(s.lower, 0.5 - kHalfWidth1At005, 1e-12);
  EXPECT_NEAR(s.upper, 0.5 + kHalfWidth1At005, 1e-12);
  EXPECT_EQ(t.interval(1), std::make_pair(-kInf, kInf));
}

TEST(ConfidenceTracker, MeanAndErrors) {
  ConfidenceTracker t(2, 0.1);
  t.observe(1, 0.4);
  t.observe(1, 0.6);
  EXPECT_DOUBLE_EQ(t.stats(1).mean, 0.5);
  EXPECT_THROW(t.observe(2, 0.0), std::out_of_range);
  EXPECT_THROW(t.observe(0, kInf), std::invalid_argument);
  EXPECT_THROW(t.observe(0, std::nan("")), std::invalid_argument);
}

TEST(ConfidenceTracker, ClippingKeepsTighterBounds) {
  ConfidenceTracker t(1, 0.1);
  for (int k = 0; k < 50; ++k) t.observe(0, 0.0);
  const auto [lo, up] = t.interval(0);
  // A far outlier moves the raw interval; the stored upper limit cannot grow.
  t.observe(0, 100.0);
  EXPECT_GE(t.interval(0).first, lo);
  EXPECT_LE(t.interval(0).second, up);
  EXPECT_EQ(t.interval(0).second, up);
}

TEST(ConfidenceTracker, MonotoneUnderRandomUpdates) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> noise(0.0, 3.0);
  ConfidenceTracker t(4, 0.05);
  std::vector<double> lo(4, -kInf), up(4, kInf);
  for (int k = 0; k < 5000; ++k) {
    const ObsIndex i = rng() % 4;
    t.observe(i, noise(rng));
    for (ObsIndex a = 0; a < 4; ++a) {
      EXPECT_GE(t.lowers()[a], lo[a]);
      EXPECT_LE(t.uppers()[a], up[a]);
      lo[a] = t.lowers()[a];
      up[a] = t.uppers()[a];
    }
  }
}

TEST(ConfidenceTracker, WidthLawWithoutClipping) {
  ConfidenceTracker t(3, 0.1, ConfidenceTracker::Options{false});
  std::mt19937_64 rng(9);
  std::normal_distribution<double> noise(0.0, 1.0);
  const double risk = 0.1 / 6.0;
  for (std::uint64_t n = 1; n <= 300; ++n) {
    t.observe(2, noise(rng));
    const auto s = t.stats(2);
    const double w = std::sqrt(2.0 * beta(n, risk) / static_cast<double>(n));
    EXPECT_NEAR((s.upper - s.lower) / 2.0, w, 1e-12);
    EXPECT_NEAR(t.half_width(n), w, 1e-15);
    EXPECT_NEAR((s.upper + s.lower) / 2.0, s.mean, 1e-12);
  }
}

TEST(ConfidenceTracker, CompensatedMeanIsStable) {
  ConfidenceTracker t(1, 0.1);
  const int n = 1'000'000;
  for (int k = 0; k < n; ++k) t.observe(0, 0.1);
  EXPECT_NEAR(t.stats(0).mean, 0.1, 1e-15);
}

TEST(ConfidenceTracker, CrossoverIsRecordedNotFatal) {
  ConfidenceTracker t(1, 0.1);
  for (int k = 0; k < 200; ++k) t.observe(0, 0.0);
  EXPECT_FALSE(t.crossover());
  for (int k = 0; k < 2000; ++k) t.observe(0, 5.0);
  EXPECT_TRUE(t.crossover());
  EXPECT_GT(t.interval(0).first, t.interval(0).second);
}

TEST(ConfidenceTracker, GoodEventMonitor) {
  ConfidenceTracker t(1, 0.1);
  EXPECT_FALSE(t.good_event().has_value());
  t.set_truth(std::vector<double>{0.0});
  t.observe(0, 0.1);
  EXPECT_TRUE(*t.good_event());
  for (int k = 0; k < 100; ++k) t.observe(0, 3.0);
  EXPECT_FALSE(*t.good_event());
}

TEST(ConfidenceTracker, RiskRange) {
  EXPECT_TRUE(ConfidenceTracker(2, 0.1).risk_within_theory());
  EXPECT_FALSE(ConfidenceTracker(1, 0.5).risk_within_theory());
  EXPECT_THROW(ConfidenceTracker(2, 1.5), std::invalid_argument);
  EXPECT_THROW(ConfidenceTracker(0, 0.1), std::invalid_argument);
}

TEST(ConfidenceTracker, CsvDump) {
  ConfidenceTracker t(2, 0.1);
  t.observe(0, 1.0);
  std::ostringstream os;
  t.write_csv(os);
  const std::string s = os.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "observable,n,mean,lower,upper");
  EXPECT_NE(s.find("\n1,1,1,"), std::string::npos);
  EXPECT_NE(s.find("\n2,0,0,-inf,inf"), std::string::npos);
}

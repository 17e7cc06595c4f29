#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "oracles.hpp"
#include "sbai/envs.hpp"
#include "sbai/game_io.hpp"

using namespace sbai;

namespace {

Instance depth2(double hi = 0.8, double lo = 0.2) {
  std::vector<double> mu(9, lo);
  for (int i = 0; i < 3; ++i) mu[static_cast<std::size_t>(i)] = hi;
  return Instance(RewardMap::minimax(oracle::to_game(oracle::depth2_tree(3, 3), 9)), mu);
}

// Empirical E exp(lambda (X - mu)) with its standard error.
std::pair<double, double> empirical_mgf(const Instance& inst, double lambda, int n) {
  SeededStream s(31, static_cast<std::uint64_t>(std::abs(lambda) * 10 + (lambda < 0 ? 100 : 0)));
  double sum = 0.0, sq = 0.0;
  for (int k = 0; k < n; ++k) {
    const double e = std::exp(lambda * (inst.sample(0, s) - inst.means()[0]));
    sum += e;
    sq += e * e;
  }
  const double m = sum / n;
  return {m, std::sqrt((sq / n - m * m) / n)};
}

}  // namespace

TEST(Instance, DeterministicSample) {
  const Instance inst(RewardMap::identity(2), {0.7, 0.1}, NoiseSpec::deterministic());
  SeededStream s(1, 0);
  EXPECT_EQ(inst.sample(0, s), 0.7);
  EXPECT_THROW(inst.sample(2, s), std::out_of_range);
}

TEST(Instance, SameStreamSameDraws) {
  const Instance inst(RewardMap::identity(2), {0.7, 0.1});
  SeededStream a(8, 3), b(8, 3);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(inst.sample(k % 2, a), inst.sample(k % 2, b));
}

TEST(Instance, GaussianSampleMean) {
  const Instance inst(RewardMap::identity(2), {0.7, 0.1});
  SeededStream s(12, 0);
  const int n = 1'000'000;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) sum += inst.sample(0, s);
  EXPECT_LT(std::abs(sum / n - 0.7), 4.0 / 1000.0);
}

TEST(Instance, UniformSupport) {
  const Instance inst(RewardMap::identity(2), {0.5, 0.0}, NoiseSpec::uniform(1.0));
  SeededStream s(4, 0);
  for (int k = 0; k < 10000; ++k) {
    const double y = inst.sample(0, s);
    ASSERT_GE(y, -0.5);
    ASSERT_LT(y, 1.5);
  }
}

TEST(Instance, SubgaussianMgf) {
  const std::vector<NoiseSpec> families{NoiseSpec::gaussian(), NoiseSpec::gaussian(0.5),
                                        NoiseSpec::uniform(1.0), NoiseSpec::deterministic()};
  for (const auto& noise : families) {
    const Instance inst(RewardMap::identity(2), {0.3, 0.0}, noise);
    for (double lambda : {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0}) {
      const auto [m, se] = empirical_mgf(inst, lambda, 100000);
      EXPECT_LE(m, std::exp(lambda * lambda / 2.0) + 4.0 * se + 1e-12)
          << to_string(noise.kind) << " lambda=" << lambda;
    }
  }
}

TEST(Instance, Validation) {
  EXPECT_THROW(Instance(RewardMap::identity(2), {0.1}), std::invalid_argument);
  EXPECT_THROW(Instance(RewardMap::identity(2), {0.1, NAN}), std::invalid_argument);
  EXPECT_THROW(Instance(RewardMap::identity(2), {0.1, 0.0}, NoiseSpec::gaussian(1.5)), std::invalid_argument);
  EXPECT_THROW(Instance(RewardMap::identity(2), {0.1, 0.0}, NoiseSpec::uniform(2.0)), std::invalid_argument);
  Instance ok(RewardMap::identity(2), {0.1, 0.0});
  EXPECT_THROW(ok.set_departures({{1.0}}), std::invalid_argument);
}

TEST(BestArm, ExamplesAndTies) {
  EXPECT_EQ(best_arm(Instance(RewardMap::identity(2), {1.0, 0.0})), 0u);
  EXPECT_EQ(best_arm(depth2()), 0u);
  EXPECT_THROW(best_arm(Instance(RewardMap::identity(3), {0.5, 0.5, 0.1})), UniquenessError);
  EXPECT_THROW(best_arm(depth2(0.2, 0.2)), UniquenessError);
}

TEST(InstanceIo, ParseIdentityAndGame) {
  const Instance a = parse_instance(
      R"({"reward_map": "identity", "L": 2, "means": [1, 0], "noise": {"kind": "uniform", "param": 0.5}})");
  EXPECT_EQ(a.reward_map().kind(), RewardMap::Kind::identity);
  EXPECT_EQ(a.noise().kind, NoiseSpec::Kind::uniform);
  EXPECT_EQ(a.noise().param, 0.5);

  const Instance b = load_instance(std::string(SBAI_TEST_DATA_DIR) + "/transposition.json");
  EXPECT_EQ(b.reward_map().kind(), RewardMap::Kind::minimax);
  EXPECT_EQ(b.reward_map().payoff(b.means()), (std::vector<double>{0.8, 0.3, 0.1}));
  EXPECT_EQ(b.noise().kind, NoiseSpec::Kind::gaussian);
  EXPECT_FALSE(b.departures().has_value());

  const Instance z = load_instance(std::string(SBAI_TEST_DATA_DIR) + "/zero_departures.json");
  ASSERT_TRUE(z.departures().has_value());
  EXPECT_TRUE(z.departures()->empty());
}

TEST(InstanceIo, RoundTrip) {
  Instance a(RewardMap::minimax(oracle::to_game(oracle::transposition_tree(), 6)),
             {0.9, 0.4, 0.8, 0.3, 0.2, 0.1}, NoiseSpec::uniform(0.25));
  a.set_departures({{0.1, 0, 0, 0, 0, -0.2}});
  const Instance b = parse_instance(serialize_instance(a));
  EXPECT_EQ(*b.reward_map().game(), *a.reward_map().game());
  EXPECT_EQ(b.means(), a.means());
  EXPECT_EQ(b.noise().param, 0.25);
  EXPECT_EQ(*b.departures(), *a.departures());
}

TEST(InstanceIo, Errors) {
  EXPECT_THROW(parse_instance(R"({"reward_map": "identity", "L": 2})"), ParseError);
  EXPECT_THROW(parse_instance(R"({"reward_map": "banana", "L": 2, "means": [1, 0]})"), ParseError);
  EXPECT_THROW(parse_instance(R"({"reward_map": "identity", "L": 2, "means": [1, 0],
                                  "noise": {"kind": "cauchy", "param": 1}})"),
               ParseError);
  EXPECT_THROW(parse_instance(R"({"reward_map": "identity", "L": 2, "means": [1, "x"]})"), ParseError);
  EXPECT_THROW(parse_instance(R"({"reward_map": "identity", "L": 2, "means": [1, 0, 3]})"), ParseError);
  EXPECT_THROW(load_instance("/nonexistent.json"), ParseError);
}

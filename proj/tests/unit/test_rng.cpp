#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "sbai/rng.hpp"

using namespace sbai;

// Known-answer vectors of the Random123 reference implementation.
TEST(Philox, KnownAnswers) {
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}),
            (PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(SeededStream, Deterministic) {
  SeededStream a(42, 7), b(42, 7);
  for (int k = 0; k < 1000; ++k) ASSERT_EQ(a(), b());
  SeededStream c(42, 8);
  SeededStream d(43, 7);
  SeededStream a2(42, 7);
  int same_c = 0, same_d = 0;
  for (int k = 0; k < 1000; ++k) {
    const auto x = a2();
    same_c += x == c() ? 1 : 0;
    same_d += x == d() ? 1 : 0;
  }
  EXPECT_EQ(same_c, 0);
  EXPECT_EQ(same_d, 0);
}

TEST(SeededStream, SeekReproducesPositions) {
  SeededStream a(1, 3);
  std::vector<std::uint64_t> words;
  for (int k = 0; k < 37; ++k) words.push_back(a());
  EXPECT_EQ(a.position(), 37u);
  SeededStream b(1, 3);
  b.seek(21);
  EXPECT_EQ(b(), words[21]);
  b.seek(4);
  EXPECT_EQ(b(), words[4]);
}

TEST(SeededStream, GaussianConsumesTwoWords) {
  SeededStream a(5, 0);
  for (int k = 0; k < 10; ++k) a.gaussian();
  EXPECT_EQ(a.position(), 20u);
  SeededStream b(5, 0);
  b.seek(14);
  SeededStream c(5, 0);
  for (int k = 0; k < 7; ++k) c.gaussian();
  EXPECT_EQ(b.gaussian(), c.gaussian());
}

TEST(SeededStream, UniformRanges) {
  SeededStream s(9, 1);
  for (int k = 0; k < 100000; ++k) {
    const double u = s.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double v = s.uniform_open_zero();
    ASSERT_GT(v, 0.0);
    ASSERT_LE(v, 1.0);
  }
}

TEST(SeededStream, WorksWithStdDistributions) {
  SeededStream s(2, 2);
  std::uniform_int_distribution<int> die(1, 6);
  for (int k = 0; k < 1000; ++k) {
    const int x = die(s);
    ASSERT_GE(x, 1);
    ASSERT_LE(x, 6);
  }
}

TEST(SeededStream, GaussianMoments) {
  SeededStream s(2024, 0);
  const int n = 1'000'000;
  double sum = 0.0, sq = 0.0;
  for (int k = 0; k < n; ++k) {
    const double g = s.gaussian();
    sum += g;
    sq += g * g;
  }
  const double mean = sum / n;
  EXPECT_LT(std::abs(mean), 4.0 / 1000.0);
  EXPECT_NEAR(sq / n - mean * mean, 1.0, 0.01);
}

TEST(SeededStream, StreamsAreUncorrelated) {
  SeededStream a(77, 0), b(77, 1);
  const int n = 100000;
  double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
  for (int k = 0; k < n; ++k) {
    const double x = a.gaussian(), y = b.gaussian();
    sa += x;
    sb += y;
    saa += x * x;
    sbb += y * y;
    sab += x * y;
  }
  const double cov = sab / n - (sa / n) * (sb / n);
  const double rho = cov / std::sqrt((saa / n - (sa / n) * (sa / n)) * (sbb / n - (sb / n) * (sb / n)));
  EXPECT_LT(std::abs(rho), 0.01);
}

#include <gtest/gtest.h>

#include <array>
#include <cstdint>
#include <set>

#include "pimrl/lcg.hpp"

using namespace pimrl;

TEST(Lcg, FirstStepsFromOne) {
  RngState rng(1);
  EXPECT_EQ(lcg_next(rng), 16807U);
  EXPECT_EQ(lcg_next(rng), 282475249U);
}

// Park & Miller's published check value for the minimal standard generator.
TEST(Lcg, TenThousandthStateFromOne) {
  RngState rng(1);
  std::uint32_t v = 0;
  for (int i = 0; i < 10000; ++i) {
    v = lcg_next(rng);
    ASSERT_GE(v, 1U);
    ASSERT_LE(v, 2147483646U);
  }
  EXPECT_EQ(v, 1043618065U);
}

TEST(Lcg, ZeroSeedIsRemapped) {
  EXPECT_EQ(RngState(0).value(), 1U);
  EXPECT_EQ(RngState(kLcgModulus).value(), 1U);
  EXPECT_EQ(RngState(kLcgModulus + 5).value(), 5U);
}

TEST(RandBelow, Examples) {
  RngState rng(1);
  EXPECT_EQ(rand_below(rng, 10), 7U);  // 16807 mod 10
  for (int i = 0; i < 100; ++i) EXPECT_EQ(rand_below(rng, 1), 0U);
  EXPECT_THROW(rand_below(rng, 0), DomainError);
}

TEST(RandBelow, UniformOverFourWithinOnePercent) {
  RngState rng(12345);
  std::array<int, 4> counts{};
  const int n = 100'000;
  for (int i = 0; i < n; ++i) ++counts[rand_below(rng, 4)];
  for (int c : counts) EXPECT_NEAR(static_cast<double>(c) / n, 0.25, 0.01);
}

TEST(LcgPower, MatchesIteratedSteps) {
  RngState rng(1);
  EXPECT_EQ(lcg_power(0), 1U);
  for (std::uint64_t e = 1; e <= 2000; ++e) ASSERT_EQ(lcg_power(e), lcg_next(rng)) << e;
  EXPECT_EQ(lcg_power(10000), 1043618065U);
  EXPECT_EQ(lcg_power(kLcgModulus - 1), 1U);  // full period
}

TEST(DeriveStream, DistinctAndDeterministic) {
  std::set<std::uint64_t> starts;
  for (std::uint64_t k = 0; k < 4096; ++k) {
    const RngState a = derive_stream(99, k);
    EXPECT_EQ(a, derive_stream(99, k));
    EXPECT_NE(a.value(), 0U);
    starts.insert(a.value());
  }
  EXPECT_EQ(starts.size(), 4096U);
  EXPECT_NE(derive_stream(1, 0), derive_stream(2, 0));
}

// The residues of two streams used side by side (policy action mod 4, slip
// mod 3) must not be correlated.
TEST(DeriveStream, NeighbouringStreamsLookIndependent) {
  for (std::uint64_t seed : {0ULL, 1ULL, 2ULL, 7ULL, 1000ULL}) {
    RngState a = derive_stream(seed, 0);
    RngState b = derive_stream(seed, 1);
    std::array<std::array<double, 3>, 4> joint{};
    const int n = 24000;
    for (int i = 0; i < n; ++i) joint[rand_below(a, 4)][rand_below(b, 3)] += 1;
    double chi2 = 0;
    const double expected = n / 12.0;
    for (const auto& row : joint)
      for (double c : row) chi2 += (c - expected) * (c - expected) / expected;
    EXPECT_LT(chi2, 31.3) << "seed " << seed;  // 99.9% quantile, 11 dof
  }
}

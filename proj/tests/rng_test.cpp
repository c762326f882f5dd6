#include "ksvrg/rng.hpp"

#include <algorithm>
#include <set>
#include <vector>

#include <gtest/gtest.h>

using namespace ksvrg;

TEST(Rng, SameSeedSameSequence) {
  SplitMix64 a(12345), b(12345);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(Rng, DifferentSeedsDiffer) {
  SplitMix64 a(1), b(2);
  int same = 0;
  for (int i = 0; i < 64; ++i) same += a.next() == b.next();
  EXPECT_EQ(same, 0);
}

TEST(Rng, SplitIsIndependentOfConsumption) {
  SplitMix64 a(99);
  SplitMix64 b(99);
  b.next();
  b.next();
  SplitMix64 ca = a.split(7);
  SplitMix64 cb = b.split(7);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(ca.next(), cb.next());
}

TEST(Rng, SplitStreamsDiffer) {
  SplitMix64 base(5);
  SplitMix64 s0 = base.split(0);
  SplitMix64 s1 = base.split(1);
  int same = 0;
  for (int i = 0; i < 64; ++i) same += s0.next() == s1.next();
  EXPECT_LE(same, 1);
}

TEST(Rng, NextDoubleInUnitInterval) {
  SplitMix64 g(3);
  for (int i = 0; i < 10000; ++i) {
    const double v = g.next_double();
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
}

TEST(Rng, NextBelowRangeAndRoughUniformity) {
  SplitMix64 g(17);
  std::vector<int> counts(10, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const auto v = g.next_below(10);
    ASSERT_LT(v, 10u);
    counts[static_cast<std::size_t>(v)] += 1;
  }
  for (int c : counts) {
    EXPECT_GT(c, draws / 10 - draws / 50);
    EXPECT_LT(c, draws / 10 + draws / 50);
  }
  EXPECT_THROW(g.next_below(0), std::invalid_argument);
}

TEST(Rng, SampleWithoutReplacement) {
  SplitMix64 g(21);
  const auto s = sample_without_replacement(25, 100, g);
  EXPECT_EQ(s.size(), 25u);
  std::set<int> uniq(s.begin(), s.end());
  EXPECT_EQ(uniq.size(), 25u);
  for (int v : s) {
    EXPECT_GE(v, 0);
    EXPECT_LT(v, 100);
  }
  SplitMix64 g2(21);
  EXPECT_EQ(sample_without_replacement(25, 100, g2), s);
  EXPECT_THROW(sample_without_replacement(5, 4, g), std::invalid_argument);
  EXPECT_THROW(sample_without_replacement(-1, 4, g), std::invalid_argument);
}

TEST(Rng, FullPermutationCoversAll) {
  SplitMix64 g(33);
  auto p = random_permutation(50, g);
  std::sort(p.begin(), p.end());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(p[static_cast<std::size_t>(i)], i);
}

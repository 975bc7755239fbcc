#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "mcp/rng.hpp"

using mcp::Philox4x32;
using mcp::Rng;
using mcp::Stream;

// Known-answer vectors published with the Random123 reference
// implementation (kat_vectors, philox4x32_10).
TEST(Philox, KnownAnswerZero) {
  const auto out = Philox4x32::block({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out, (Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
}

TEST(Philox, KnownAnswerOnes) {
  const auto out = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                     {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(out, (Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
}

TEST(Philox, KnownAnswerPi) {
  const auto out = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                     {0xa4093822u, 0x299f31d0u});
  EXPECT_EQ(out, (Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Rng, SameSeedSameSequence) {
  Rng a(42, Stream::kSignal, 3), b(42, Stream::kSignal, 3);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a(), b());
}

TEST(Rng, StreamsAndSubstreamsDiffer) {
  Rng a(42, Stream::kSignal), b(42, Stream::kMatrix), c(42, Stream::kSignal, 1);
  int same_ab = 0, same_ac = 0;
  for (int i = 0; i < 256; ++i) {
    const auto x = a(), y = b(), z = c();
    same_ab += x == y;
    same_ac += x == z;
  }
  EXPECT_LT(same_ab, 3);
  EXPECT_LT(same_ac, 3);
}

TEST(Rng, FirstWordsAreTheZeroBlock) {
  Rng r(0);
  EXPECT_EQ(r(), 0x6627e8d5u);
  EXPECT_EQ(r(), 0xe169c58du);
}

TEST(Rng, UniformStaysInRange) {
  Rng r(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double v = r.uniform_open();
    ASSERT_GT(v, 0.0);
    ASSERT_LT(v, 1.0);
  }
}

TEST(Rng, NormalMoments) {
  Rng r(2);
  const int n = 200000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 5.0 * std::sqrt(2.0 / n));
}

TEST(Rng, BelowIsUniformOnSmallRanges) {
  Rng r(3);
  const int bound = 7, draws = 70000;
  std::vector<int> count(bound, 0);
  for (int i = 0; i < draws; ++i) ++count[r.below(bound)];
  double chi2 = 0.0;
  const double expect = static_cast<double>(draws) / bound;
  for (int c : count) chi2 += (c - expect) * (c - expect) / expect;
  EXPECT_LT(chi2, 22.46);  // chi-square 6 dof, upper 0.1% point
}

TEST(Rng, ShuffleIsAPermutation) {
  Rng r(4);
  std::vector<int> v(50);
  for (int i = 0; i < 50; ++i) v[i] = i;
  r.shuffle(v);
  EXPECT_EQ(std::set<int>(v.begin(), v.end()).size(), 50u);
}

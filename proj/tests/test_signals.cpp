#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "mcp/errors.hpp"
#include "mcp/signals.hpp"

using namespace mcp;

namespace {

SignalSpec spec_of(SignalClass cls, std::uint64_t seed) {
  SignalSpec s;
  s.cls = cls;
  s.seed = seed;
  s.n = 32;
  s.k = 3;
  s.m = Resolution(6);
  s.rows = 6;
  s.cols = 5;
  s.rank = 2;
  s.p = 0.7;
  return s;
}

}  // namespace

class EveryClass : public ::testing::TestWithParam<SignalClass> {};

TEST_P(EveryClass, MembershipAndCertificate) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SignalSpec spec = spec_of(GetParam(), seed);
    const GeneratedSignal g = generate(spec);
    std::string why;
    EXPECT_TRUE(check_membership(spec, g, &why)) << to_string(GetParam()) << ": " << why;
    EXPECT_EQ(static_cast<std::size_t>(g.x.size()), spec.length());
    EXPECT_GE(g.x.minCoeff(), 0.0);
    EXPECT_LE(g.x.maxCoeff(), 1.0);
    ASSERT_TRUE(g.coder);
    EXPECT_EQ(g.cert.coder, g.coder->id());
    EXPECT_DOUBLE_EQ(g.cert.kappa, double(g.cert.bits) / spec.m.bits());
    if (GetParam() == SignalClass::kLowRank) {
      // A matrix codeword plus the bit that records the shift to [0,1].
      EXPECT_EQ(g.code.size() + 1, g.cert.bits);
    } else {
      EXPECT_EQ(g.code.size(), g.cert.bits);
      const QuantizedSignal back = g.coder->decode(g.code, spec.length(), spec.m);
      const BitString again = g.coder->encode(back);
      EXPECT_LE(again.size(), g.cert.bits);
      EXPECT_EQ(g.coder->decode(again, spec.length(), spec.m), back);
    }
    if (GetParam() != SignalClass::kUniformRandom) {
      EXPECT_LE(g.cert.kappa, g.cert.class_bound + 1e-9) << to_string(GetParam());
    }
  }
}

TEST_P(EveryClass, Deterministic) {
  const SignalSpec spec = spec_of(GetParam(), 5);
  EXPECT_EQ(generate(spec).x, generate(spec).x);
  EXPECT_EQ(generate(spec).code, generate(spec).code);
  EXPECT_EQ(signal_class_from_string(to_string(GetParam())), GetParam());
}

INSTANTIATE_TEST_SUITE_P(All, EveryClass,
                         ::testing::Values(SignalClass::kSparse, SignalClass::kPowerLaw,
                                           SignalClass::kPiecewisePoly, SignalClass::kSmooth,
                                           SignalClass::kLowRank, SignalClass::kUniformRandom));

TEST(Sparse, ExactSupportAndOnGridAmplitudes) {
  const SignalSpec spec = spec_of(SignalClass::kSparse, 1);
  const GeneratedSignal g = generate(spec);
  EXPECT_EQ((g.x.array() != 0.0).count(), 3);
  for (double v : g.x) {
    EXPECT_EQ(std::ldexp(v, 6), std::floor(std::ldexp(v, 6)));
  }
}

TEST(PowerLaw, DecayHoldsAtEveryIndex) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SignalSpec spec = spec_of(SignalClass::kPowerLaw, seed);
    const GeneratedSignal g = generate(spec);
    std::vector<double> mags(g.x.data(), g.x.data() + g.x.size());
    std::sort(mags.rbegin(), mags.rend());
    double norm_p = 0.0;
    for (double v : mags) norm_p += std::pow(v, spec.p);
    norm_p = std::pow(norm_p, 1.0 / spec.p);
    EXPECT_LE(norm_p, 1.0 + 1e-12);
    for (std::size_t i = 0; i < mags.size(); ++i) {
      EXPECT_LE(mags[i], std::pow(double(i + 1), -1.0 / spec.p) + 1e-12);
    }
    ASSERT_TRUE(g.approximant);
  }
}

TEST(BestKTerm, KeepsLargestEntries) {
  Eigen::VectorXd x(5);
  x << 0.1, 0.5, 0.05, 0.3, 0.2;
  const auto b = best_k_term(x, 2);
  Eigen::VectorXd want(5);
  want << 0, 0.5, 0, 0.3, 0;
  EXPECT_EQ(b.x_tilde, want);
  EXPECT_NEAR(b.eps, std::sqrt(0.01 + 0.0025 + 0.04), 1e-15);
}

TEST(Smooth, DerivativeBoundsAndApproximation) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SignalSpec spec = spec_of(SignalClass::kSmooth, seed);
    spec.beta = 2;
    spec.n = 64;
    const GeneratedSignal g = generate(spec);
    ASSERT_TRUE(g.smooth);
    double factorial = 1.0;
    for (std::size_t j = 0; j <= spec.beta + 1; ++j) {
      if (j > 0) factorial *= double(j);
      for (double t = 0.0; t <= 1.0; t += 1.0 / 256) {
        EXPECT_LE(std::abs(g.smooth->derivative(j, t)), factorial + 1e-12);
      }
    }
    const auto approx = poly_approx_smooth(*g.smooth, spec.beta, spec.n);
    EXPECT_LE(approx.eps_l2, approx.eps_l2_bound + 1e-12);
  }
}

TEST(LowRank, RankAndNorm) {
  const SignalSpec spec = spec_of(SignalClass::kLowRank, 3);
  const GeneratedSignal g = generate(spec);
  ASSERT_TRUE(g.matrix);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(*g.matrix);
  EXPECT_LE(svd.singularValues()[0], 1.0 + 1e-12);
  EXPECT_LT(svd.singularValues()[spec.rank], 1e-10);
}

TEST(Signals, RejectsBadSpecs) {
  SignalSpec s = spec_of(SignalClass::kSparse, 0);
  s.k = 40;
  EXPECT_ANY_THROW(generate(s));
  EXPECT_THROW(signal_class_from_string("fractal"), ConfigError);
}

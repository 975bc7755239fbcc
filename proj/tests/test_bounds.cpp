#include <gtest/gtest.h>

#include <cmath>

#include "mcp/bounds.hpp"
#include "mcp/errors.hpp"
#include "mcp/reference_values.hpp"
#include "mcp/rng.hpp"

using namespace mcp;
namespace ref = mcp::reference;

namespace {

void expect_rel(double got, double want, double rel = 1e-10) {
  EXPECT_NEAR(got, want, rel * std::abs(want)) << "want " << want;
}

}  // namespace

TEST(Bounds, FrozenReferenceValues) {
  const auto t1 = t1_bound(256, 24, 8, 4, 0.965);
  expect_rel(t1.epsilon, ref::kT1Epsilon);
  expect_rel(t1.log_fail_prob, ref::kT1LogFail);
  expect_rel(t1.fail_prob, std::exp(ref::kT1LogFail));

  const auto t2 = t2_bound(1, 9, 1000, 5, 25);
  expect_rel(t2.log_fail_prob, ref::kT2LogFail);
  expect_rel(t2_quadratic_root(1e6, 1e6, 1, 4), ref::kT2QuadraticRoot);

  const auto t3 = t3_bound(256, 100, 8, 4, 0.965, 1.0);
  expect_rel(t3.extra("noise_term"), ref::kT3NoiseTerm);
  expect_rel(t3.epsilon, ref::kT3Epsilon);

  expect_rel(t4_bound(1e4, 100, 10, 1, 0.965, 0.01).epsilon, ref::kT4EpsilonE);
  expect_rel(t4_bound(1e4, 100, 14, 1, 0.965, 0.01).epsilon, ref::kT4Epsilon2);

  const auto t5 = t5_bound(256, 128, 8, 2, 0.9, std::exp(1.0), 1, 1, 1);
  expect_rel(t5.epsilon, ref::kT5Epsilon);
  expect_rel(t5.log_fail_prob, ref::kT5LogFail);
  EXPECT_EQ(t5.fail_prob, 1.0);

  expect_rel(chi_lower_bound(20, 0.5).log_fail_prob, ref::kChiLowerLog);
  expect_rel(chi_upper_bound(20, 0.5).log_fail_prob, ref::kChiUpperLog);
}

TEST(Bounds, HandWorkedT1) {
  // (1-t)^-1/2 = 2, sqrt(n/d) + 2 = 3, 2^-m sqrt(n) = 1.
  const auto r = t1_bound(4, 4, 1, 1, 0.75);
  EXPECT_DOUBLE_EQ(r.epsilon, 7.0);
  EXPECT_NEAR(r.fail_prob, 2.0 * std::exp(2.0 * (0.75 + std::log(0.25))) + std::exp(-2.0),
              1e-15);
  EXPECT_TRUE(r.valid);
}

TEST(Bounds, T2RadiusAndRequirement) {
  const auto r = t2_bound(2.0, 4.0, 100, 3, 2);
  EXPECT_DOUBLE_EQ(r.epsilon, 3.0);
  EXPECT_DOUBLE_EQ(r.extra("epsilon_sq"), 9.0);
  EXPECT_DOUBLE_EQ(t2_required_d(4.0, 2.0, 3), 192.0);
  EXPECT_FALSE(r.condition("d_meets_requirement"));
  EXPECT_FALSE(r.valid);
}

TEST(Bounds, CorollaryConditionFlags) {
  const auto c1 = c1_bound(256, 4, LogBase::kE);
  EXPECT_FALSE(c1.condition("epsilon_claim"));
  expect_rel(c1.extra("raw_epsilon"), ref::kC1RawEpsilon);
  expect_rel(c1.extra("raw_log_fail_prob"), ref::kC1RawLogFail);
  EXPECT_FALSE(c1.valid);

  const auto c2 = c2_bound(1e6, 10, LogBase::kE);
  EXPECT_FALSE(c2.condition("intermediate"));
  expect_rel(c2.extra("intermediate_log_lhs"), ref::kC2IntermediateLhs);
  expect_rel(c2.extra("intermediate_log_rhs"), ref::kC2IntermediateRhs);
  expect_rel(c2.log_fail_prob, ref::kC2LogFail);

  const auto c3 = c3_bound(1e4, 1, 0.01, LogBase::k2, 100);
  EXPECT_EQ(c3.param("m"), 14.0);
  EXPECT_TRUE(c3.condition("epsilon_claim"));
  const auto c3e = c3_bound(1e4, 1, 0.01, LogBase::kE, 100);
  EXPECT_FALSE(c3e.condition("epsilon_claim"));
}

TEST(Bounds, FailProbClampedButLogKept) {
  const auto r = t1_bound(256, 2, 8, 4, 0.965);
  EXPECT_EQ(r.fail_prob, 1.0);
  EXPECT_GT(r.log_fail_prob, 0.0);
}

TEST(Bounds, MonotoneInD) {
  double previous = INFINITY;
  for (int d = 1; d <= 200; ++d) {
    const double lf = t1_bound(256, d, 8, 4, 0.965).log_fail_prob;
    EXPECT_LE(lf, previous);
    previous = lf;
  }
}

TEST(Bounds, DomainErrors) {
  EXPECT_THROW(t1_bound(0, 4, 2, 1, 0.5), DomainError);
  EXPECT_THROW(t1_bound(4, 4, 2, 1, 1.0), DomainError);
  EXPECT_THROW(t1_bound(4, 4, 0, 1, 0.5), DomainError);
  EXPECT_THROW(t1_bound(4, 4, 2, -1, 0.5), DomainError);
  EXPECT_THROW(t2_bound(1, 1, 10, 2, 1), DomainError);
  EXPECT_THROW(t2_bound(0, 2, 10, 2, 1), DomainError);
  EXPECT_THROW(chi_lower_bound(5, 1.0), DomainError);
  EXPECT_THROW(c2_validity_threshold(1, LogBase::kE, 1024), DomainError);
  EXPECT_THROW(evaluate_bound(BoundKind::kT1, {{"n", 4}}), ConfigError);
  EXPECT_THROW(bound_from_string("T9"), ConfigError);
}

TEST(Bounds, EvaluateDispatchMatchesDirectCall) {
  const auto a = evaluate_bound(BoundKind::kT1,
                                {{"n", 256}, {"d", 24}, {"m", 8}, {"kappa", 4}, {"t", 0.965}});
  EXPECT_EQ(a.epsilon, t1_bound(256, 24, 8, 4, 0.965).epsilon);
  for (auto k : {BoundKind::kT1, BoundKind::kT2, BoundKind::kT5, BoundKind::kLemmaChiLower}) {
    EXPECT_EQ(bound_from_string(to_string(k)), k);
  }
}

TEST(Invert, SmallestDMeetingTarget) {
  // Independent search with mpmath: d = 25, fail(24) = 1.56e-3, fail(25) = 4.74e-4.
  const auto r = invert_for_d(BoundKind::kT1, 1e-3,
                              {{"n", 1e6}, {"m", 8}, {"kappa", 4}, {"t", 0.965}});
  EXPECT_EQ(r.d, 25u);
  EXPECT_NEAR(r.fail_at_d, 4.741486310741015e-4, 1e-15);
  EXPECT_NEAR(r.fail_at_d_minus_1, 1.5581970204035326e-3, 1e-15);
  EXPECT_TRUE(r.monotone);

  const auto trivial = invert_for_d(BoundKind::kT1, 1.0,
                                    {{"n", 16}, {"m", 8}, {"kappa", 4}, {"t", 0.965}});
  EXPECT_EQ(trivial.d, 1u);
  EXPECT_FALSE(trivial.notes.empty());
}

TEST(Invert, GenericPredicate) {
  const auto r = invert_for_d([](double d) { return 1.0 / d; }, 0.01);
  EXPECT_EQ(r.d, 100u);
}

TEST(SubexpDiagnostics, GaussianSamplesSatisfyAllChecks) {
  Rng rng(3);
  std::vector<double> z(50000);
  for (auto& v : z) v = rng.normal();
  const auto d = subexp_diagnostics(z);
  EXPECT_TRUE(d.all_hold);
  EXPECT_GT(d.sg_c2, 0.0);
  EXPECT_GE(d.sg_c3, std::exp(d.sg_c2));
  EXPECT_EQ(d.moments.size(), 3u);
  EXPECT_EQ(d.exp_moments.size(), 3u);
  EXPECT_FALSE(d.group_tails.empty());
}

TEST(SubexpDiagnostics, DegenerateSamples) {
  const auto zeros = subexp_diagnostics(std::vector<double>(100, 0.0));
  EXPECT_TRUE(zeros.all_hold);
  EXPECT_TRUE(zeros.group_tails.empty());
  Rng rng(4);
  std::vector<double> signs(1000);
  for (auto& v : signs) v = rng.rademacher();
  EXPECT_TRUE(subexp_diagnostics(signs).all_hold);
  EXPECT_THROW(subexp_diagnostics({}), DimensionError);
}

TEST(Bounds, SgC3) {
  EXPECT_DOUBLE_EQ(sg_c3(2.0, 0.5), std::max(std::exp(0.5), 2.0 * std::exp(-0.5)));
  EXPECT_DOUBLE_EQ(sg_c3(100.0, 0.1), 100.0 * std::exp(-0.1));
}

#include <gtest/gtest.h>

#include <cmath>

#include "mcp/errors.hpp"
#include "mcp/sensing.hpp"
#include "mcp/stats.hpp"

using namespace mcp;

TEST(DrawMatrix, DeterministicPerSeed) {
  const Ensemble e{EnsembleKind::kGaussStd, 6, 9, 17};
  EXPECT_EQ(draw_matrix(e), draw_matrix(e));
  const Ensemble f{EnsembleKind::kGaussStd, 6, 9, 18};
  EXPECT_NE(draw_matrix(e), draw_matrix(f));
}

TEST(DrawMatrix, RowMajorPrefixStable) {
  // Appending rows keeps the earlier rows: the matrix stream is consumed
  // row by row.
  const Eigen::MatrixXd A = draw_matrix(Ensemble{EnsembleKind::kRademacher, 4, 5, 3});
  const Eigen::MatrixXd B = draw_matrix(Ensemble{EnsembleKind::kRademacher, 7, 5, 3});
  EXPECT_EQ(B.topRows(4), A);
}

TEST(DrawMatrix, FloatAndDoubleAgree) {
  const Ensemble e{EnsembleKind::kUniformPM, 3, 4, 8};
  const Eigen::MatrixXd A = draw_matrix<double>(e);
  const Eigen::MatrixXf F = draw_matrix<float>(e);
  EXPECT_TRUE(A.cast<float>().isApprox(F));
}

class EnsembleMoments : public ::testing::TestWithParam<EnsembleKind> {};

TEST_P(EnsembleMoments, ZeroMeanAndExpectedVariance) {
  const std::size_t n = 50;
  const Ensemble e{GetParam(), 2000, n, 99};
  const Eigen::MatrixXd A = draw_matrix(e);
  const double count = static_cast<double>(A.size());
  const double mean = A.mean();
  const double var = A.array().square().mean() - mean * mean;
  const double want = GetParam() == EnsembleKind::kGaussScaled ? 1.0 / n : 1.0;
  EXPECT_NEAR(mean, 0.0, 5.0 * std::sqrt(want / count));
  EXPECT_NEAR(var / want, 1.0, 0.02);
  if (GetParam() == EnsembleKind::kRademacher) {
    EXPECT_TRUE((A.array().abs() == 1.0).all());
  }
  if (GetParam() == EnsembleKind::kUniformPM) {
    EXPECT_LE(A.cwiseAbs().maxCoeff(), std::sqrt(3.0));
  }
}

INSTANTIATE_TEST_SUITE_P(AllKinds, EnsembleMoments,
                         ::testing::Values(EnsembleKind::kGaussStd, EnsembleKind::kGaussScaled,
                                           EnsembleKind::kRademacher, EnsembleKind::kUniformPM));

TEST(SgConstants, DominateExactTails) {
  const std::size_t n = 16;
  for (double t = 0.0; t <= 6.0; t += 0.01) {
    const auto g = sg_constants(EnsembleKind::kGaussStd, n);
    EXPECT_LE(2.0 * (1.0 - normal_cdf(t)), g.c1 * std::exp(-g.c2 * t * t) + 1e-15);
    const auto s = sg_constants(EnsembleKind::kGaussScaled, n);
    EXPECT_LE(2.0 * (1.0 - normal_cdf(t * std::sqrt(double(n)))),
              s.c1 * std::exp(-s.c2 * t * t) + 1e-15);
    const auto r = sg_constants(EnsembleKind::kRademacher, n);
    EXPECT_LE(t < 1.0 ? 1.0 : 0.0, r.c1 * std::exp(-r.c2 * t * t));
    const auto u = sg_constants(EnsembleKind::kUniformPM, n);
    EXPECT_LE(std::max(0.0, 1.0 - t / std::sqrt(3.0)), u.c1 * std::exp(-u.c2 * t * t));
  }
}

TEST(SpectralNorm, MatchesSvd) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Eigen::MatrixXd A =
        draw_matrix(Ensemble{EnsembleKind::kGaussStd, 3 + seed % 7, 2 + seed % 11, seed});
    const double want = Eigen::JacobiSVD<Eigen::MatrixXd>(A).singularValues()[0];
    EXPECT_NEAR(spectral_norm(A), want, 1e-8 * want);
  }
  EXPECT_EQ(spectral_norm(Eigen::MatrixXd::Zero(3, 3)), 0.0);
}

TEST(Measure, NoiselessIsExact) {
  const Eigen::MatrixXd A = draw_matrix(Ensemble{EnsembleKind::kGaussStd, 4, 3, 1});
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(3, 0.25);
  const Measurement m = measure(A, x, NoiseModel::none(), 1);
  EXPECT_EQ(m.y, A * x);
  EXPECT_TRUE(m.w.isZero());
}

TEST(Measure, BoundedNoiseHasNormE) {
  const Eigen::MatrixXd A = draw_matrix(Ensemble{EnsembleKind::kGaussStd, 5, 3, 2});
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(3, 0.5);
  const Measurement adv = measure(A, x, NoiseModel::bounded(0.3), 2);
  EXPECT_NEAR(adv.w.norm(), 0.3, 1e-14);
  // Adversarial noise is parallel to A x.
  EXPECT_NEAR(std::abs(adv.w.dot(A * x)), 0.3 * (A * x).norm(), 1e-12);
  const Measurement sph = measure(A, x, NoiseModel::bounded(0.3, NoiseDirection::kRandomSphere), 2);
  EXPECT_NEAR(sph.w.norm(), 0.3, 1e-14);
  const Measurement zero = measure(A, Eigen::VectorXd::Zero(3), NoiseModel::bounded(0.3), 2);
  EXPECT_NEAR(zero.w[0], 0.3, 1e-15);
}

TEST(Measure, GaussianNoiseVariance) {
  const Eigen::MatrixXd A = Eigen::MatrixXd::Zero(20000, 1);
  const Measurement m = measure(A, Eigen::VectorXd::Zero(1), NoiseModel::gaussian(0.5), 4);
  EXPECT_NEAR(m.w.squaredNorm() / 20000.0, 0.25, 0.01);
}

TEST(Measure, RejectsBadInput) {
  const Eigen::MatrixXd A = Eigen::MatrixXd::Ones(2, 3);
  EXPECT_THROW(measure(A, Eigen::VectorXd::Zero(2), NoiseModel::none(), 0), DimensionError);
  EXPECT_THROW(measure(A, Eigen::VectorXd::Zero(3), NoiseModel::bounded(-1.0), 0), DomainError);
  EXPECT_THROW(draw_matrix(Ensemble{EnsembleKind::kGaussStd, 0, 3, 0}), DimensionError);
}

TEST(Ensemble, Names) {
  for (auto k : {EnsembleKind::kGaussStd, EnsembleKind::kGaussScaled, EnsembleKind::kRademacher,
                 EnsembleKind::kUniformPM}) {
    EXPECT_EQ(ensemble_from_string(to_string(k)), k);
  }
  EXPECT_THROW(ensemble_from_string("bernoulli"), ConfigError);
}

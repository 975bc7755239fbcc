#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <string>

#include "mcp/errors.hpp"
#include "mcp/rng.hpp"

namespace mcp {

enum class EnsembleKind { kGaussStd, kGaussScaled, kRademacher, kUniformPM };

std::string to_string(EnsembleKind kind);
EnsembleKind ensemble_from_string(const std::string& name);

struct Ensemble {
  EnsembleKind kind = EnsembleKind::kGaussStd;
  std::size_t d = 1;
  std::size_t n = 1;
  std::uint64_t seed = 0;
};

// Constants (c1, c2) with P(|A_ij| > t) <= c1 exp(-c2 t^2) for all t >= 0.
// These are valid, not tight; measured fits come from subexp_diagnostics.
struct SgConstants {
  double c1;
  double c2;
};
SgConstants sg_constants(EnsembleKind kind, std::size_t n);

// Entries are drawn in row-major order from the matrix stream of the seed.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> draw_matrix(
    const Ensemble& ens) {
  if (ens.d == 0 || ens.n == 0) throw DimensionError("draw_matrix: empty shape");
  Rng rng(ens.seed, Stream::kMatrix);
  const auto d = static_cast<Eigen::Index>(ens.d);
  const auto n = static_cast<Eigen::Index>(ens.n);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> A(d, n);
  const double scaled_sd = 1.0 / std::sqrt(static_cast<double>(ens.n));
  const double half_width = std::sqrt(3.0);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double v = 0.0;
      switch (ens.kind) {
        case EnsembleKind::kGaussStd: v = rng.normal(); break;
        case EnsembleKind::kGaussScaled: v = scaled_sd * rng.normal(); break;
        case EnsembleKind::kRademacher: v = rng.rademacher(); break;
        case EnsembleKind::kUniformPM: v = rng.uniform(-half_width, half_width); break;
      }
      A(i, j) = static_cast<Scalar>(v);
    }
  }
  return A;
}

// Largest singular value by power iteration on the smaller Gram matrix,
// started from a fixed vector. Stops when the eigen-residual falls below
// tol times the Rayleigh quotient.
template <typename Derived>
typename Derived::RealScalar spectral_norm(const Eigen::MatrixBase<Derived>& A,
                                           int max_iterations = 100000,
                                           double tol = 1e-11) {
  using Real = typename Derived::RealScalar;
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>;
  if (A.size() == 0) return Real(0);
  const Mat G = A.rows() <= A.cols() ? Mat(A * A.adjoint()) : Mat(A.adjoint() * A);
  const Eigen::Index k = G.rows();
  Vec v(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    v[i] = Real(1) + Real(i) / Real(2 * k);
  }
  v.normalize();
  for (int it = 0; it < max_iterations; ++it) {
    const Vec w = G * v;
    const Real lambda = std::real(v.dot(w));
    const Real wn = w.norm();
    if (wn == Real(0)) return Real(0);
    if ((w - lambda * v).norm() <= Real(tol) * lambda) {
      return std::sqrt(lambda);
    }
    v = w / wn;
  }
  throw NumericalError("spectral_norm: power iteration did not converge");
}

enum class NoiseKind { kNone, kGaussIID, kBoundedDet };
enum class NoiseDirection { kAdversarial, kRandomSphere };

struct NoiseModel {
  NoiseKind kind = NoiseKind::kNone;
  double sigma = 0.0;
  double e = 0.0;
  NoiseDirection direction = NoiseDirection::kAdversarial;

  static NoiseModel none() { return {}; }
  static NoiseModel gaussian(double sigma) {
    return {NoiseKind::kGaussIID, sigma, 0.0, NoiseDirection::kAdversarial};
  }
  static NoiseModel bounded(double e, NoiseDirection dir = NoiseDirection::kAdversarial) {
    return {NoiseKind::kBoundedDet, 0.0, e, dir};
  }
};

std::string to_string(NoiseKind kind);

struct Measurement {
  Eigen::VectorXd y;
  Eigen::VectorXd w;
};

// y = A x + w. Gaussian and random-sphere noise come from the noise stream
// of the seed. Adversarial bounded noise points along A x (along e_1 when
// A x = 0) with norm exactly e.
Measurement measure(const Eigen::MatrixXd& A, const Eigen::VectorXd& x,
                    const NoiseModel& noise, std::uint64_t seed);

struct SensingInstance {
  Eigen::MatrixXd A;
  Eigen::VectorXd x_true;
  Eigen::VectorXd y;
  Eigen::VectorXd w;
  NoiseModel noise;
  std::uint64_t seed = 0;
};

SensingInstance make_instance(const Ensemble& ens, const Eigen::VectorXd& x,
                              const NoiseModel& noise);

}  // namespace mcp

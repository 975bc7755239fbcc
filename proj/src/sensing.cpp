#include "mcp/sensing.hpp"

#include <numbers>

#include "mcp/errors.hpp"

namespace mcp {

std::string to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::kGaussStd: return "gauss";
    case EnsembleKind::kGaussScaled: return "gauss_scaled";
    case EnsembleKind::kRademacher: return "rademacher";
    case EnsembleKind::kUniformPM: return "uniform_pm";
  }
  return "unknown";
}

EnsembleKind ensemble_from_string(const std::string& name) {
  for (EnsembleKind k : {EnsembleKind::kGaussStd, EnsembleKind::kGaussScaled,
                         EnsembleKind::kRademacher, EnsembleKind::kUniformPM}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown ensemble '" + name + "'");
}

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kNone: return "none";
    case NoiseKind::kGaussIID: return "gauss";
    case NoiseKind::kBoundedDet: return "bounded";
  }
  return "unknown";
}

SgConstants sg_constants(EnsembleKind kind, std::size_t n) {
  switch (kind) {
    case EnsembleKind::kGaussStd: return {2.0, 0.5};
    case EnsembleKind::kGaussScaled: return {2.0, 0.5 * static_cast<double>(n)};
    // Bounded entries: the tail is zero beyond the bound and at most 1
    // before it, and (1 - t/sqrt 3) e^{t^2} peaks near 1.37 < e.
    case EnsembleKind::kRademacher:
    case EnsembleKind::kUniformPM: return {std::numbers::e, 1.0};
  }
  return {0.0, 0.0};
}

Measurement measure(const Eigen::MatrixXd& A, const Eigen::VectorXd& x,
                    const NoiseModel& noise, std::uint64_t seed) {
  if (A.cols() != x.size()) throw DimensionError("measure: A and x disagree");
  Measurement out;
  const Eigen::VectorXd ax = A * x;
  out.w = Eigen::VectorXd::Zero(A.rows());
  Rng rng(seed, Stream::kNoise);
  switch (noise.kind) {
    case NoiseKind::kNone:
      break;
    case NoiseKind::kGaussIID:
      if (noise.sigma < 0.0) throw DomainError("noise sigma must be nonnegative");
      for (Eigen::Index i = 0; i < out.w.size(); ++i) {
        out.w[i] = noise.sigma * rng.normal();
      }
      break;
    case NoiseKind::kBoundedDet: {
      if (noise.e < 0.0) throw DomainError("noise budget e must be nonnegative");
      Eigen::VectorXd dir;
      if (noise.direction == NoiseDirection::kAdversarial) {
        dir = ax;
      } else {
        dir.resize(A.rows());
        for (Eigen::Index i = 0; i < dir.size(); ++i) dir[i] = rng.normal();
      }
      const double norm = dir.norm();
      if (norm == 0.0) {
        dir = Eigen::VectorXd::Unit(A.rows(), 0);
      } else {
        dir /= norm;
      }
      out.w = noise.e * dir;
      break;
    }
  }
  out.y = ax + out.w;
  return out;
}

SensingInstance make_instance(const Ensemble& ens, const Eigen::VectorXd& x,
                              const NoiseModel& noise) {
  if (static_cast<std::size_t>(x.size()) != ens.n) {
    throw DimensionError("make_instance: signal length differs from n");
  }
  SensingInstance inst;
  inst.A = draw_matrix(ens);
  inst.x_true = x;
  Measurement m = measure(inst.A, x, noise, ens.seed);
  inst.y = std::move(m.y);
  inst.w = std::move(m.w);
  inst.noise = noise;
  inst.seed = ens.seed;
  return inst;
}

}  // namespace mcp

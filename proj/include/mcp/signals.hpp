#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mcp/bits.hpp"
#include "mcp/coders.hpp"
#include "mcp/quantize.hpp"

namespace mcp {

enum class SignalClass {
  kSparse,
  kPowerLaw,
  kPiecewisePoly,
  kSmooth,
  kLowRank,
  kUniformRandom,
};

std::string to_string(SignalClass c);
SignalClass signal_class_from_string(const std::string& name);

// Nonzero sparse amplitudes: multiples of 2^-m in (0,1), or uniform on (0,1).
enum class Amplitude { kOnGrid, kUniform };

std::string to_string(Amplitude a);
Amplitude amplitude_from_string(const std::string& name);

struct SignalSpec {
  SignalClass cls = SignalClass::kSparse;
  std::size_t n = 16;
  std::size_t k = 1;               // Sparse
  double p = 0.5;                  // PowerLaw
  std::size_t breakpoints = 2;     // PiecewisePoly Q
  std::size_t degree = 2;          // PiecewisePoly N
  std::size_t beta = 1;            // Smooth
  std::size_t rows = 4;            // LowRank M
  std::size_t cols = 4;            // LowRank N
  std::size_t rank = 1;            // LowRank r
  Resolution m{8};                 // certificate resolution
  std::uint64_t seed = 0;
  Amplitude amplitude = Amplitude::kOnGrid;

  // n, or rows * cols for LowRank.
  std::size_t length() const;
};

// bits is the exact length of `code`; kappa = bits / m; class_bound is the
// matching closed form in the same units as kappa.
struct ComplexityCertificate {
  CoderId coder = CoderId::kSparse;
  std::size_t bits = 0;
  double kappa = 0.0;
  double class_bound = 0.0;
  Resolution m{1};
  std::vector<std::pair<std::string, double>> extras;

  double extra(const std::string& name) const;
};

// Degree-(beta+2) polynomial on [0,1] with |f^{(j)}| <= j! for j <= beta+1
// and values in [0,1], guaranteed by the coefficient construction.
struct SmoothFunction {
  std::vector<double> coeffs;

  double operator()(double t) const { return derivative(0, t); }
  double derivative(std::size_t j, double t) const;
};

struct GeneratedSignal {
  Eigen::VectorXd x;
  // LowRank: the [-1,1] matrix before the shift x = (X + 1)/2.
  std::optional<Eigen::MatrixXd> matrix;
  // PiecewisePoly and Smooth: the exact pieces (Smooth: the approximation).
  std::vector<PolySegment> segments;
  std::optional<SmoothFunction> smooth;
  // PowerLaw: the best k-term approximation that was certified.
  std::optional<Eigen::VectorXd> approximant;
  CoderPtr coder;
  BitString code;
  ComplexityCertificate cert;
};

// Deterministic in SignalSpec; all randomness comes from the signal stream.
GeneratedSignal generate(const SignalSpec& spec);

// Exact class membership: support size, l_p norm and sorted decay,
// coefficient constraints, derivative bounds at the samples, sigma_max and
// rank, and the [0,1] domain.
bool check_membership(const SignalSpec& spec, const GeneratedSignal& g,
                      std::string* why = nullptr);

struct BestKTerm {
  Eigen::VectorXd x_tilde;
  double eps;
};
BestKTerm best_k_term(const Eigen::VectorXd& x, std::size_t k);

struct SmoothApprox {
  std::vector<PolySegment> segments;  // local signed basis
  double r_n;
  double eps_linf;      // measured on the samples
  double eps_l2;        // measured on the samples
  double eps_l2_bound;  // sqrt(n) r_n^{beta+1}
};

// Degree-beta Taylor pieces of width r_n = n^{-1/(beta+3/2)}, each expanded
// about its first sample point.
SmoothApprox poly_approx_smooth(const SmoothFunction& f, std::size_t beta,
                                std::size_t n);

// Class bounds in bits.
double sparse_bound_bits(std::size_t n, std::size_t k, Resolution m);
double piecewise_poly_bound_bits(const PiecewisePolyCoder& coder, std::size_t n,
                                 Resolution m);
double low_rank_bound_bits(std::size_t rows, std::size_t cols, std::size_t r,
                           Resolution m);
// 2 (2 + beta)(n^{2/(2 beta + 3)} + 1), the smooth-class KID at m = log n.
double smooth_regime_kappa(std::size_t n, std::size_t beta);

// Slack of the low-rank bound: tag and empty flag (4), delta(r) - log* r
// (at most 3), and the offset bit of the [0,1] shift.
inline constexpr double kLowRankBoundConstant = 8.0;

}  // namespace mcp

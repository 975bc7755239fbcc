#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace mcp {

enum class BoundKind {
  kT1,
  kC1,
  kC2,
  kT2,
  kT3,
  kT4,
  kC3,
  kT5,
  kLemmaChiLower,
  kLemmaChiUpper,
  kLemmaSubexpTail,
  kLemmaSpectrum,
};

std::string to_string(BoundKind kind);
BoundKind bound_from_string(const std::string& name);

// Base of the "log n" that fixes m and d in the corollaries. Every other
// logarithm has a fixed base stated next to its formula.
enum class LogBase { kE, k2 };

std::string to_string(LogBase base);
double log_in(LogBase base, double x);

// fail_prob is clamped to [0,1] only at the end; log_fail_prob keeps the
// natural log of the unclamped sum. `conditions` records every numerically
// checked hypothesis or proof step; `valid` is their conjunction.
struct BoundReport {
  BoundKind theorem = BoundKind::kT1;
  std::vector<std::pair<std::string, double>> params;
  double epsilon = 0.0;
  double fail_prob = 0.0;
  double log_fail_prob = 0.0;
  bool valid = true;
  std::vector<std::pair<std::string, bool>> conditions;
  std::vector<std::pair<std::string, double>> extras;

  double param(const std::string& name) const;
  double extra(const std::string& name) const;
  bool condition(const std::string& name) const;
};

// Error radius ((1-t)^-1/2 (sqrt(n/d) + 2) + 1) 2^-m sqrt(n) and failure
// probability 2^{kappa m} e^{(d/2)(t + ln(1-t))} + e^{-d/2}.
BoundReport t1_bound(double n, double d, int m, double kappa, double t);

// m = ceil(log n), d = ceil(kappa log n), t = 0.965: radius 20/sqrt(d) and
// failure probability 2 e^{-d/2}. The raw T1 values at those choices are in
// extras; conditions say whether each claimed inequality holds.
BoundReport c1_bound(double n, double kappa, LogBase base = LogBase::kE);

// m = 2 ceil(log n), t = 1 - 1/n, d = ceil(3 kappa): radius 4/d and failure
// probability e^{-0.1 kappa ln n} + e^{-d/2}. Checks the intermediate
// inequality 2^{2 kappa log n} e^{1.5 kappa (1 - ln n)} < e^{-0.1 kappa ln n}.
BoundReport c2_bound(double n, double kappa, LogBase base = LogBase::kE);
// Smallest power of two n = 2^j (j <= max_exponent) from which the
// intermediate inequality holds at every larger power checked; 0 if none.
double c2_validity_threshold(double kappa, LogBase base = LogBase::kE,
                             int max_exponent = 1023);

// Radius 3 sigma / sqrt(r) (epsilon_sq = 9 sigma^2 / r in extras) and
// failure probability 6 e^{-0.01 d} + e^{-0.3 m kappa}. r must exceed 1.
BoundReport t2_bound(double sigma, double r, double d, int m, double kappa);
// d = ceil(8 r kappa m).
double t2_required_d(double r, double kappa, int m);
// Positive root of D^2 - 2D(6/sqrt n + 3/sqrt d + sigma sqrt(2/r)) - 8 sigma/sqrt d.
double t2_quadratic_root(double n, double d, double sigma, double r);

// T1 radius plus e / sqrt((1-t) d); T1 failure probability.
BoundReport t3_bound(double n, double d, int m, double kappa, double t,
                     double e);
// (1-t)^-1/2 (sqrt(n/d) + 2)(2^-m sqrt(n) + 2 eps_n) + 2^-m sqrt(n); T1
// failure probability.
BoundReport t4_bound(double n, double d, int m, double kappa, double t,
                     double eps_n);
// m = ceil(log n), t = 0.965, d = ceil(kappa log n) unless given (d > 0):
// radius 25 eps_n sqrt(n/d), failure probability 2 e^{-d/2}. Raw T4 values
// in extras.
BoundReport c3_bound(double n, double kappa, double eps_n,
                     LogBase base = LogBase::kE, double d = 0.0);

// Subgaussian constant c3 = max(e^{c2}, c1 e^{-c2}).
double sg_c3(double c1, double c2);

// Radius (tau^-1 (sqrt((c2' + 1) n/d) + 1) + 1) 2^-m sqrt(n), failure
// probability 2^{2 kappa m} e^{-d c2^2 (tau^2-1)^2 / (16 c3)} + e^{-c1' n}.
// Requires 1 - c3/c2 < tau < 1.
BoundReport t5_bound(double n, double d, int m, double kappa, double tau,
                     double c1, double c2, double c1p, double c2p);

// P(chi2_d < d(1-tau)) <= e^{(d/2)(tau + ln(1-tau))}, tau in (0,1).
BoundReport chi_lower_bound(double d, double tau);
// P(chi2_d > d(1+tau)) <= e^{-(d/2)(tau - ln(1+tau))}, tau > 0.
BoundReport chi_upper_bound(double d, double tau);

struct ChiTails {
  double lower;
  double upper;
};
ChiTails chi_square_tails(double d, double tau);

// P(|sum (Z_i^2 - 1)| > n t) <= 2 e^{-n c2^2 t^2 / (16 c3)}, t in (0, c3/c2).
BoundReport lemma_subexp_tail(double n, double t, double c1, double c2);
// sigma_max(A) <= sqrt(d) + c1' sqrt(n) + t except with probability
// e^{-c2' t^2}; epsilon holds the spectral radius bound.
BoundReport lemma_spectrum(double d, double n, double t, double c1p,
                           double c2p);

using BoundParams = std::map<std::string, double>;

// Dispatch by kind with named parameters: n, d, m, kappa, t, tau, sigma, r,
// e, eps_n, c1, c2, c1p, c2p, and base (2 for base 2, anything else base e).
// Throws ConfigError naming a missing parameter.
BoundReport evaluate_bound(BoundKind kind, const BoundParams& params);

struct InversionResult {
  std::uint64_t d;
  double fail_at_d;
  double fail_at_d_minus_1;
  // Failure probability nonincreasing over [d-1, d+16].
  bool monotone;
  std::vector<std::string> notes;
};

// Smallest integer d with fail_prob <= target, by exponential search and
// bisection on the predicate, re-verified at d - 1 and d.
InversionResult invert_for_d(BoundKind kind, double target,
                             const BoundParams& params);
InversionResult invert_for_d(const std::function<double(double)>& fail_of_d,
                             double target);

struct MomentCheck {
  int p;
  double empirical;
  double bound;
  bool holds;
};

struct ExpMomentCheck {
  double lambda;
  double empirical;
  double bound;
  bool holds;
};

struct TailCheck {
  double t;
  double empirical;
  double bound;
  double std_error;
  bool holds;
};

struct SubexpDiagnostics {
  // Subexponential fit P(|Z| > t) <= c1 e^{-c2 t}.
  double se_c1;
  double se_c2;
  // Subgaussian fit P(|Z| > t) <= c1 e^{-c2 t^2} and its c3.
  double sg_c1;
  double sg_c2;
  double sg_c3;
  std::vector<MomentCheck> moments;
  std::vector<ExpMomentCheck> exp_moments;
  std::vector<TailCheck> group_tails;
  std::size_t group_size;
  bool all_hold;
};

// Fits tail constants to the samples, then checks the moment bound
// E|Z|^p <= 2 c1 p!/c2^p for p in {2,4,6}, the exponential-moment bound
// E e^{lambda Z} <= e^{4 c1 lambda^2/c2^2} for lambda < c2/2, and the tail
// of sums of Z^2 - 1 over disjoint groups. Group checks allow three
// binomial standard errors.
SubexpDiagnostics subexp_diagnostics(const std::vector<double>& samples,
                                     std::size_t group_size = 10);

}  // namespace mcp

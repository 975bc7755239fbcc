#include "mcp/signals.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mcp/errors.hpp"
#include "mcp/rng.hpp"

namespace mcp {

std::string to_string(SignalClass c) {
  switch (c) {
    case SignalClass::kSparse: return "sparse";
    case SignalClass::kPowerLaw: return "power_law";
    case SignalClass::kPiecewisePoly: return "piecewise_poly";
    case SignalClass::kSmooth: return "smooth";
    case SignalClass::kLowRank: return "low_rank";
    case SignalClass::kUniformRandom: return "uniform";
  }
  return "unknown";
}

SignalClass signal_class_from_string(const std::string& name) {
  for (SignalClass c : {SignalClass::kSparse, SignalClass::kPowerLaw,
                        SignalClass::kPiecewisePoly, SignalClass::kSmooth,
                        SignalClass::kLowRank, SignalClass::kUniformRandom}) {
    if (to_string(c) == name) return c;
  }
  throw ConfigError("unknown signal class '" + name + "'");
}

std::string to_string(Amplitude a) {
  return a == Amplitude::kOnGrid ? "on_grid" : "uniform";
}

Amplitude amplitude_from_string(const std::string& name) {
  if (name == "on_grid") return Amplitude::kOnGrid;
  if (name == "uniform") return Amplitude::kUniform;
  throw ConfigError("unknown amplitude rule '" + name + "'");
}

std::size_t SignalSpec::length() const {
  return cls == SignalClass::kLowRank ? rows * cols : n;
}

double ComplexityCertificate::extra(const std::string& name) const {
  for (const auto& [k, v] : extras) {
    if (k == name) return v;
  }
  throw ConfigError("certificate has no extra '" + name + "'");
}

double SmoothFunction::derivative(std::size_t j, double t) const {
  double v = 0.0;
  for (std::size_t i = coeffs.size(); i-- > j;) {
    double falling = 1.0;
    for (std::size_t r = 0; r < j; ++r) falling *= static_cast<double>(i - r);
    v = v * t + coeffs[i] * falling;
  }
  return v;
}

namespace {

double log_star0(double v) { return v < 1.0 ? 0.0 : log_star(v); }

ComplexityCertificate make_cert(CoderId id, std::size_t bits, Resolution m,
                                double bound_bits) {
  ComplexityCertificate c;
  c.coder = id;
  c.bits = bits;
  c.m = m;
  c.kappa = static_cast<double>(bits) / m.bits();
  c.class_bound = bound_bits / m.bits();
  return c;
}

std::vector<std::size_t> random_support(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::size_t> pos(n);
  std::iota(pos.begin(), pos.end(), 0);
  rng.shuffle(pos);
  pos.resize(k);
  std::sort(pos.begin(), pos.end());
  return pos;
}

void certify_sparse(GeneratedSignal& g, const Eigen::VectorXd& v, std::size_t k,
                    Resolution m) {
  g.coder = std::make_shared<SparseCoder>();
  g.code = g.coder->encode(truncate(v, m));
  g.cert = make_cert(CoderId::kSparse, g.code.size(), m,
                     sparse_bound_bits(static_cast<std::size_t>(v.size()), k, m));
}

GeneratedSignal gen_sparse(const SignalSpec& s, Rng& rng) {
  if (s.k > s.n) throw DomainError("sparse: k exceeds n");
  GeneratedSignal g;
  g.x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.n));
  for (std::size_t i : random_support(s.n, s.k, rng)) {
    double v;
    if (s.amplitude == Amplitude::kOnGrid) {
      v = std::ldexp(static_cast<double>(1 + rng.below(s.m.max_index())), -s.m.bits());
    } else {
      v = rng.uniform_open();
    }
    g.x[static_cast<Eigen::Index>(i)] = v;
  }
  certify_sparse(g, g.x, s.k, s.m);
  return g;
}

GeneratedSignal gen_power_law(const SignalSpec& s, Rng& rng) {
  if (!(s.p > 0.0 && s.p <= 1.0)) throw DomainError("power_law: p must lie in (0,1]");
  GeneratedSignal g;
  double harmonic = 0.0;
  for (std::size_t i = 1; i <= s.n; ++i) harmonic += 1.0 / static_cast<double>(i);
  const double c = std::pow(harmonic, -1.0 / s.p);
  std::vector<std::size_t> pos(s.n);
  std::iota(pos.begin(), pos.end(), 0);
  rng.shuffle(pos);
  g.x.resize(static_cast<Eigen::Index>(s.n));
  for (std::size_t r = 0; r < s.n; ++r) {
    g.x[static_cast<Eigen::Index>(pos[r])] =
        c * std::pow(static_cast<double>(r + 1), -1.0 / s.p);
  }
  const auto k = static_cast<std::size_t>(
      std::ceil(std::pow(static_cast<double>(s.n), s.p / 2.0)));
  const BestKTerm best = best_k_term(g.x, std::min(k, s.n));
  g.approximant = best.x_tilde;
  certify_sparse(g, best.x_tilde, std::min(k, s.n), s.m);
  g.cert.extras = {{"k", static_cast<double>(k)},
                   {"eps", best.eps},
                   {"eps_bound", std::pow(static_cast<double>(k), -1.0 / s.p + 0.5)}};
  return g;
}

GeneratedSignal gen_piecewise_poly(const SignalSpec& s, Rng& rng) {
  if (s.n < 2) throw DomainError("piecewise_poly: n must be at least 2");
  if (s.breakpoints + 1 > s.n) throw DomainError("piecewise_poly: too many breakpoints");
  GeneratedSignal g;
  std::vector<std::size_t> cuts(s.n - 1);
  std::iota(cuts.begin(), cuts.end(), 1);
  rng.shuffle(cuts);
  cuts.resize(s.breakpoints);
  std::sort(cuts.begin(), cuts.end());
  cuts.insert(cuts.begin(), 0);
  for (std::size_t start : cuts) {
    std::vector<double> u(s.degree + 1);
    double sum = 0.0;
    for (auto& v : u) {
      v = rng.uniform_open();
      sum += v;
    }
    const double scale = rng.uniform(0.05, 0.95) / sum;
    for (auto& v : u) v *= scale;
    g.segments.push_back({start, std::move(u)});
  }
  const auto coder = std::make_shared<PiecewisePolyCoder>(s.breakpoints, s.degree);
  g.x = coder->evaluate(g.segments, s.n);
  g.code = coder->encode_segments(g.segments, s.n, s.m);
  g.coder = coder;
  g.cert = make_cert(CoderId::kPiecewisePoly, g.code.size(), s.m,
                     piecewise_poly_bound_bits(*coder, s.n, s.m));
  return g;
}

GeneratedSignal gen_smooth(const SignalSpec& s, Rng& rng) {
  if (s.n < 2) throw DomainError("smooth: n must be at least 2");
  GeneratedSignal g;
  SmoothFunction f;
  const std::size_t degree = s.beta + 2;
  f.coeffs.resize(degree + 1);
  // |c_i| <= 0.45 2^-i gives sum_{i>=j} C(i,j)|c_i| <= 0.9, hence
  // |f^{(j)}| <= 0.9 j!, and keeps f inside [0.05, 0.95].
  f.coeffs[0] = 0.5 + 0.05 * rng.uniform(-1.0, 1.0);
  for (std::size_t i = 1; i <= degree; ++i) {
    f.coeffs[i] = 0.45 * std::ldexp(1.0, -static_cast<int>(i)) * rng.uniform(-1.0, 1.0);
  }
  g.x.resize(static_cast<Eigen::Index>(s.n));
  for (std::size_t i = 0; i < s.n; ++i) {
    g.x[static_cast<Eigen::Index>(i)] = f(static_cast<double>(i) / static_cast<double>(s.n));
  }
  const SmoothApprox approx = poly_approx_smooth(f, s.beta, s.n);
  g.smooth = f;
  g.segments = approx.segments;
  const auto coder = std::make_shared<PiecewisePolyCoder>(
      approx.segments.size() - 1, s.beta, PolyBasis::kLocalSigned);
  g.code = coder->encode_segments(approx.segments, s.n, s.m);
  g.coder = coder;
  g.cert = make_cert(CoderId::kPiecewisePoly, g.code.size(), s.m,
                     piecewise_poly_bound_bits(*coder, s.n, s.m));
  g.cert.extras = {{"r_n", approx.r_n},
                   {"eps_linf", approx.eps_linf},
                   {"eps_l2", approx.eps_l2},
                   {"eps_l2_bound", approx.eps_l2_bound},
                   {"pieces", static_cast<double>(approx.segments.size())},
                   {"regime_kappa", smooth_regime_kappa(s.n, s.beta)}};
  return g;
}

Eigen::MatrixXd random_orthonormal(std::size_t rows, std::size_t r, Rng& rng) {
  Eigen::MatrixXd G(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(r));
  for (Eigen::Index i = 0; i < G.rows(); ++i) {
    for (Eigen::Index j = 0; j < G.cols(); ++j) G(i, j) = rng.normal();
  }
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
  return qr.householderQ() * Eigen::MatrixXd::Identity(G.rows(), G.cols());
}

GeneratedSignal gen_low_rank(const SignalSpec& s, Rng& rng) {
  if (s.rows == 0 || s.cols == 0) throw DomainError("low_rank: empty shape");
  if (s.rank == 0 || s.rank > std::min(s.rows, s.cols)) {
    throw DomainError("low_rank: rank must lie in [1, min(M, N)]");
  }
  GeneratedSignal g;
  const Eigen::MatrixXd U = random_orthonormal(s.rows, s.rank, rng);
  const Eigen::MatrixXd V = random_orthonormal(s.cols, s.rank, rng);
  std::vector<double> sigma(s.rank);
  for (auto& v : sigma) v = rng.uniform(0.05, 1.0);
  std::sort(sigma.rbegin(), sigma.rend());
  Eigen::VectorXd sv(static_cast<Eigen::Index>(s.rank));
  for (std::size_t i = 0; i < s.rank; ++i) sv[static_cast<Eigen::Index>(i)] = sigma[i];
  const Eigen::MatrixXd X = U * sv.asDiagonal() * V.transpose();
  g.matrix = X;
  g.x.resize(static_cast<Eigen::Index>(s.rows * s.cols));
  for (std::size_t i = 0; i < s.rows; ++i) {
    for (std::size_t j = 0; j < s.cols; ++j) {
      const double v = (X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) + 1.0) / 2.0;
      g.x[static_cast<Eigen::Index>(i * s.cols + j)] = std::clamp(v, 0.0, 1.0);
    }
  }
  const auto coder = std::make_shared<LowRankCoder>(s.rows, s.cols, s.rank);
  g.code = coder->encode_matrix(X, s.rank, s.m);
  g.coder = coder;
  // One more bit records the affine shift between X and the signal.
  g.cert = make_cert(CoderId::kLowRank, g.code.size() + 1, s.m,
                     low_rank_bound_bits(s.rows, s.cols, s.rank, s.m));
  g.cert.extras = {{"offset_bits", 1.0}};
  return g;
}

GeneratedSignal gen_uniform(const SignalSpec& s, Rng& rng) {
  GeneratedSignal g;
  g.x.resize(static_cast<Eigen::Index>(s.n));
  for (Eigen::Index i = 0; i < g.x.size(); ++i) g.x[i] = rng.uniform();
  g.coder = std::make_shared<LZCoder>();
  g.code = g.coder->encode(truncate(g.x, s.m));
  const double bound = static_cast<double>(s.n) * s.m.bits() + LZCoder::kHeaderBits;
  g.cert = make_cert(CoderId::kLZ, g.code.size(), s.m, bound);
  g.cert.extras = {{"kappa_over_n", g.cert.kappa / static_cast<double>(s.n)}};
  return g;
}

}  // namespace

GeneratedSignal generate(const SignalSpec& spec) {
  if (spec.length() == 0) throw DomainError("signal length must be positive");
  Rng rng(spec.seed, Stream::kSignal);
  switch (spec.cls) {
    case SignalClass::kSparse: return gen_sparse(spec, rng);
    case SignalClass::kPowerLaw: return gen_power_law(spec, rng);
    case SignalClass::kPiecewisePoly: return gen_piecewise_poly(spec, rng);
    case SignalClass::kSmooth: return gen_smooth(spec, rng);
    case SignalClass::kLowRank: return gen_low_rank(spec, rng);
    case SignalClass::kUniformRandom: return gen_uniform(spec, rng);
  }
  throw ConfigError("unknown signal class");
}

bool check_membership(const SignalSpec& spec, const GeneratedSignal& g,
                      std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (static_cast<std::size_t>(g.x.size()) != spec.length()) return fail("length");
  for (Eigen::Index i = 0; i < g.x.size(); ++i) {
    if (!(g.x[i] >= 0.0 && g.x[i] <= 1.0)) return fail("value outside [0,1]");
  }
  switch (spec.cls) {
    case SignalClass::kSparse: {
      std::size_t nnz = 0;
      for (Eigen::Index i = 0; i < g.x.size(); ++i) nnz += g.x[i] != 0.0;
      if (nnz != spec.k) return fail("support size differs from k");
      break;
    }
    case SignalClass::kPowerLaw: {
      double norm = 0.0;
      for (Eigen::Index i = 0; i < g.x.size(); ++i) norm += std::pow(g.x[i], spec.p);
      if (norm > 1.0 + 1e-12) return fail("outside the l_p ball");
      std::vector<double> mags(g.x.data(), g.x.data() + g.x.size());
      std::sort(mags.rbegin(), mags.rend());
      for (std::size_t i = 0; i < mags.size(); ++i) {
        if (mags[i] > std::pow(static_cast<double>(i + 1), -1.0 / spec.p) * (1.0 + 1e-12)) {
          return fail("sorted magnitudes exceed i^{-1/p}");
        }
      }
      break;
    }
    case SignalClass::kPiecewisePoly: {
      if (g.segments.size() > spec.breakpoints + 1) return fail("too many pieces");
      for (const auto& seg : g.segments) {
        if (seg.coeffs.size() > spec.degree + 1) return fail("degree above N");
        double sum = 0.0;
        for (double a : seg.coeffs) {
          if (!(a >= 0.0 && a <= 1.0)) return fail("coefficient outside [0,1]");
          sum += a;
        }
        if (!(sum < 1.0)) return fail("coefficient sum not below 1");
      }
      break;
    }
    case SignalClass::kSmooth: {
      if (!g.smooth) return fail("no smooth function");
      double factorial = 1.0;
      for (std::size_t j = 0; j <= spec.beta + 1; ++j) {
        if (j > 0) factorial *= static_cast<double>(j);
        for (std::size_t i = 0; i < spec.n; ++i) {
          const double t = static_cast<double>(i) / static_cast<double>(spec.n);
          if (std::abs(g.smooth->derivative(j, t)) > factorial) {
            return fail("derivative bound violated");
          }
        }
      }
      break;
    }
    case SignalClass::kLowRank: {
      if (!g.matrix) return fail("no matrix");
      const Eigen::JacobiSVD<Eigen::MatrixXd> svd(*g.matrix);
      const Eigen::VectorXd& sv = svd.singularValues();
      if (sv[0] > 1.0 + 1e-12) return fail("sigma_max above 1");
      for (Eigen::Index i = static_cast<Eigen::Index>(spec.rank); i < sv.size(); ++i) {
        if (sv[i] > 1e-9) return fail("rank above r");
      }
      break;
    }
    case SignalClass::kUniformRandom:
      break;
  }
  return true;
}

BestKTerm best_k_term(const Eigen::VectorXd& x, std::size_t k) {
  const auto n = static_cast<std::size_t>(x.size());
  if (k < 1 || k > n) throw DomainError("best_k_term: k must lie in [1, n]");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(x[static_cast<Eigen::Index>(a)]) > std::abs(x[static_cast<Eigen::Index>(b)]);
  });
  Eigen::VectorXd t = Eigen::VectorXd::Zero(x.size());
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = static_cast<Eigen::Index>(order[i]);
    t[j] = x[j];
  }
  return {t, (x - t).norm()};
}

SmoothApprox poly_approx_smooth(const SmoothFunction& f, std::size_t beta,
                                std::size_t n) {
  if (n == 0) throw DomainError("poly_approx_smooth: n must be positive");
  SmoothApprox out;
  const double nn = static_cast<double>(n);
  out.r_n = std::pow(nn, -1.0 / (static_cast<double>(beta) + 1.5));
  for (std::size_t i = 0; i < n;) {
    const double piece = std::floor(static_cast<double>(i) / nn / out.r_n);
    PolySegment seg{i, {}};
    const double t0 = static_cast<double>(i) / nn;
    double factorial = 1.0;
    for (std::size_t j = 0; j <= beta; ++j) {
      if (j > 0) factorial *= static_cast<double>(j);
      seg.coeffs.push_back(f.derivative(j, t0) / factorial);
    }
    out.segments.push_back(std::move(seg));
    while (i < n && std::floor(static_cast<double>(i) / nn / out.r_n) == piece) ++i;
  }
  const PiecewisePolyCoder evaluator(out.segments.size() - 1, beta,
                                     PolyBasis::kLocalSigned);
  const Eigen::VectorXd approx = evaluator.evaluate(out.segments, n);
  double linf = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = std::abs(f(static_cast<double>(i) / nn) - approx[static_cast<Eigen::Index>(i)]);
    linf = std::max(linf, e);
    sq += e * e;
  }
  out.eps_linf = linf;
  out.eps_l2 = std::sqrt(sq);
  out.eps_l2_bound = std::sqrt(nn) * std::pow(out.r_n, static_cast<double>(beta) + 1.0);
  return out;
}

double sparse_bound_bits(std::size_t n, std::size_t k, Resolution m) {
  const double nn = static_cast<double>(n);
  return static_cast<double>(k) * m.bits() + nn * binary_entropy(static_cast<double>(k) / nn) +
         0.5 * std::log2(nn) + SparseCoder::kBoundConstant;
}

double piecewise_poly_bound_bits(const PiecewisePolyCoder& coder, std::size_t n,
                                 Resolution m) {
  const double q = static_cast<double>(coder.max_breakpoints());
  const double N = static_cast<double>(coder.max_degree());
  const double cells = (q + 1.0) * (N + 1.0);
  return cells * (m.bits() + ceil_log2(coder.max_degree() + 1)) + log_star0(N) +
         log_star0(q) + q * log_star0(static_cast<double>(n)) + coder.bound_constant();
}

double low_rank_bound_bits(std::size_t rows, std::size_t cols, std::size_t r,
                           Resolution m) {
  const double rr = static_cast<double>(r);
  const double per = m.bits() + ceil_log2(3 * static_cast<std::uint64_t>(r));
  return log_star0(rr) + rr * static_cast<double>(rows + cols + 1) * per - rr +
         kLowRankBoundConstant;
}

double smooth_regime_kappa(std::size_t n, std::size_t beta) {
  const double b = static_cast<double>(beta);
  return 2.0 * (2.0 + b) * (std::pow(static_cast<double>(n), 2.0 / (2.0 * b + 3.0)) + 1.0);
}

}  // namespace mcp

#include "mcp/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mcp/errors.hpp"

namespace mcp {

namespace {

using Real = long double;

constexpr Real kLn2 = std::numbers::ln2_v<long double>;

Real log_add(Real a, Real b) {
  if (a < b) std::swap(a, b);
  if (b == -INFINITY) return a;
  return a + std::log1p(std::exp(b - a));
}

void finalize(BoundReport& r, Real log_fail) {
  r.log_fail_prob = static_cast<double>(log_fail);
  r.fail_prob = static_cast<double>(std::clamp<Real>(std::exp(log_fail), 0.0L, 1.0L));
  r.valid = std::all_of(r.conditions.begin(), r.conditions.end(),
                        [](const auto& c) { return c.second; });
}

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

void require_open_unit(double t, const char* name) {
  require(t > 0.0 && t < 1.0, std::string(name) + " must lie in (0,1)");
}

void require_dims(double n, double d) {
  require(n >= 1.0, "n must be at least 1");
  require(d >= 1.0, "d must be at least 1");
}

// T1 with 1 - t passed directly so that t = 1 - 1/n survives huge n.
BoundReport t1_core(double n, double d, int m, double kappa, Real one_minus_t) {
  require_dims(n, d);
  require(m >= 1, "m must be at least 1");
  require(kappa >= 0.0, "kappa must be nonnegative");
  require(one_minus_t > 0.0L && one_minus_t < 1.0L, "t must lie in (0,1)");
  BoundReport r;
  r.theorem = BoundKind::kT1;
  const Real t = 1.0L - one_minus_t;
  r.params = {{"n", n}, {"d", d}, {"m", m}, {"kappa", kappa},
              {"t", static_cast<double>(t)}};
  const Real step = std::ldexp(std::sqrt(static_cast<Real>(n)), -m);
  r.epsilon = static_cast<double>(
      ((std::sqrt(static_cast<Real>(n) / d) + 2.0L) / std::sqrt(one_minus_t) + 1.0L) *
      step);
  const Real first = kappa * m * kLn2 + (d / 2.0L) * (t + std::log(one_minus_t));
  r.extras = {{"log_first_term", static_cast<double>(first)}};
  finalize(r, log_add(first, -d / 2.0L));
  return r;
}

int ceil_log(LogBase base, double n) {
  return std::max(1, static_cast<int>(std::ceil(log_in(base, n))));
}

}  // namespace

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::kT1: return "T1";
    case BoundKind::kC1: return "C1";
    case BoundKind::kC2: return "C2";
    case BoundKind::kT2: return "T2";
    case BoundKind::kT3: return "T3";
    case BoundKind::kT4: return "T4";
    case BoundKind::kC3: return "C3";
    case BoundKind::kT5: return "T5";
    case BoundKind::kLemmaChiLower: return "LemmaChiLower";
    case BoundKind::kLemmaChiUpper: return "LemmaChiUpper";
    case BoundKind::kLemmaSubexpTail: return "LemmaSubexpTail";
    case BoundKind::kLemmaSpectrum: return "LemmaSpectrum";
  }
  return "unknown";
}

BoundKind bound_from_string(const std::string& name) {
  for (int k = 0; k <= static_cast<int>(BoundKind::kLemmaSpectrum); ++k) {
    const auto kind = static_cast<BoundKind>(k);
    if (to_string(kind) == name) return kind;
  }
  throw ConfigError("unknown bound '" + name + "'");
}

std::string to_string(LogBase base) { return base == LogBase::k2 ? "2" : "e"; }

double log_in(LogBase base, double x) {
  return base == LogBase::k2 ? std::log2(x) : std::log(x);
}

double BoundReport::param(const std::string& name) const {
  for (const auto& [k, v] : params) {
    if (k == name) return v;
  }
  throw ConfigError("report has no parameter '" + name + "'");
}

double BoundReport::extra(const std::string& name) const {
  for (const auto& [k, v] : extras) {
    if (k == name) return v;
  }
  throw ConfigError("report has no extra '" + name + "'");
}

bool BoundReport::condition(const std::string& name) const {
  for (const auto& [k, v] : conditions) {
    if (k == name) return v;
  }
  throw ConfigError("report has no condition '" + name + "'");
}

BoundReport t1_bound(double n, double d, int m, double kappa, double t) {
  require_open_unit(t, "t");
  return t1_core(n, d, m, kappa, 1.0L - static_cast<Real>(t));
}

BoundReport c1_bound(double n, double kappa, LogBase base) {
  require(n >= 2.0, "n must be at least 2");
  require(kappa > 0.0, "kappa must be positive");
  const int m = ceil_log(base, n);
  const double d = std::max(1.0, std::ceil(kappa * log_in(base, n)));
  const double t = 0.965;
  const BoundReport raw = t1_bound(n, d, m, kappa, t);
  BoundReport r;
  r.theorem = BoundKind::kC1;
  r.params = {{"n", n}, {"kappa", kappa}, {"base", base == LogBase::k2 ? 2.0 : std::numbers::e},
              {"m", m}, {"d", d}, {"t", t}};
  r.epsilon = 20.0 / std::sqrt(d);
  const Real log_claim = kLn2 - d / 2.0L;
  r.extras = {{"raw_epsilon", raw.epsilon},
              {"raw_fail_prob", raw.fail_prob},
              {"raw_log_fail_prob", raw.log_fail_prob}};
  r.conditions = {
      {"d_le_n", d <= n},
      {"quantization_step", std::ldexp(std::sqrt(n), -m) <= 1.0 / std::sqrt(n)},
      {"epsilon_claim", raw.epsilon <= r.epsilon},
      {"fail_claim", raw.log_fail_prob <= static_cast<double>(log_claim)},
  };
  finalize(r, log_claim);
  return r;
}

namespace {

Real c2_intermediate_lhs(Real n, double kappa, LogBase base) {
  const Real log_n = base == LogBase::k2 ? std::log2(n) : std::log(n);
  return 2.0L * kappa * log_n * kLn2 + 1.5L * kappa * (1.0L - std::log(n));
}

}  // namespace

BoundReport c2_bound(double n, double kappa, LogBase base) {
  require(n >= 2.0, "n must be at least 2");
  require(kappa > 0.0, "kappa must be positive");
  const int m = 2 * ceil_log(base, n);
  const double d = std::max(1.0, std::ceil(3.0 * kappa));
  const Real one_minus_t = 1.0L / n;
  const BoundReport raw = t1_core(n, d, m, kappa, one_minus_t);
  BoundReport r;
  r.theorem = BoundKind::kC2;
  r.params = {{"n", n}, {"kappa", kappa}, {"base", base == LogBase::k2 ? 2.0 : std::numbers::e},
              {"m", m}, {"d", d}, {"t", static_cast<double>(1.0L - one_minus_t)}};
  r.epsilon = 4.0 / d;
  const Real ln_n = std::log(static_cast<Real>(n));
  const Real log_target = -0.1L * kappa * ln_n;
  const Real lhs = c2_intermediate_lhs(n, kappa, base);
  const Real log_claim = log_add(log_target, -0.5L * d);
  r.extras = {{"raw_epsilon", raw.epsilon},
              {"raw_fail_prob", raw.fail_prob},
              {"raw_log_fail_prob", raw.log_fail_prob},
              {"intermediate_log_lhs", static_cast<double>(lhs)},
              {"intermediate_log_rhs", static_cast<double>(log_target)},
              {"validity_threshold_n", c2_validity_threshold(kappa, base)}};
  r.conditions = {
      {"intermediate", lhs < log_target},
      {"epsilon_claim", raw.epsilon <= r.epsilon},
      {"fail_claim", raw.log_fail_prob <= static_cast<double>(log_claim)},
  };
  finalize(r, log_claim);
  return r;
}

double c2_validity_threshold(double kappa, LogBase base, int max_exponent) {
  require(max_exponent >= 1 && max_exponent <= 1023, "max_exponent out of range");
  int first = 0;
  for (int j = max_exponent; j >= 1; --j) {
    const Real n = std::ldexp(1.0L, j);
    if (!(c2_intermediate_lhs(n, kappa, base) < -0.1L * kappa * std::log(n))) break;
    first = j;
  }
  return first == 0 ? 0.0 : std::ldexp(1.0, first);
}

double t2_required_d(double r, double kappa, int m) {
  return std::ceil(8.0 * r * kappa * m);
}

BoundReport t2_bound(double sigma, double r, double d, int m, double kappa) {
  require(r > 1.0, "T2 needs r > 1");
  require(sigma > 0.0, "T2 needs sigma > 0");
  require(d >= 1.0, "d must be at least 1");
  require(m >= 1, "m must be at least 1");
  BoundReport rep;
  rep.theorem = BoundKind::kT2;
  rep.params = {{"sigma", sigma}, {"r", r}, {"d", d}, {"m", m}, {"kappa", kappa}};
  rep.epsilon = 3.0 * sigma / std::sqrt(r);
  const double required = t2_required_d(r, kappa, m);
  rep.extras = {{"epsilon_sq", 9.0 * sigma * sigma / r}, {"required_d", required}};
  rep.conditions = {{"d_meets_requirement", d >= required}};
  finalize(rep, log_add(std::log(6.0L) - 0.01L * d, -0.3L * m * kappa));
  return rep;
}

double t2_quadratic_root(double n, double d, double sigma, double r) {
  require_dims(n, d);
  require(r > 0.0 && sigma >= 0.0, "quadratic root needs r > 0, sigma >= 0");
  const double b = 6.0 / std::sqrt(n) + 3.0 / std::sqrt(d) + sigma * std::sqrt(2.0 / r);
  const double c = 8.0 * sigma / std::sqrt(d);
  return b + std::sqrt(b * b + c);
}

BoundReport t3_bound(double n, double d, int m, double kappa, double t,
                     double e) {
  require(e >= 0.0, "e must be nonnegative");
  BoundReport r = t1_bound(n, d, m, kappa, t);
  r.theorem = BoundKind::kT3;
  r.params.emplace_back("e", e);
  const double extra = e / std::sqrt((1.0 - t) * d);
  r.extras.emplace_back("noise_term", extra);
  r.epsilon += extra;
  return r;
}

BoundReport t4_bound(double n, double d, int m, double kappa, double t,
                     double eps_n) {
  require(eps_n >= 0.0, "eps_n must be nonnegative");
  BoundReport r = t1_bound(n, d, m, kappa, t);
  r.theorem = BoundKind::kT4;
  r.params.emplace_back("eps_n", eps_n);
  const double step = std::ldexp(std::sqrt(n), -m);
  r.epsilon = (std::sqrt(n / d) + 2.0) * (step + 2.0 * eps_n) / std::sqrt(1.0 - t) + step;
  return r;
}

BoundReport c3_bound(double n, double kappa, double eps_n, LogBase base,
                     double d) {
  require(n >= 2.0, "n must be at least 2");
  require(kappa > 0.0, "kappa must be positive");
  const int m = ceil_log(base, n);
  if (d <= 0.0) d = std::max(1.0, std::ceil(kappa * log_in(base, n)));
  const double t = 0.965;
  const BoundReport raw = t4_bound(n, d, m, kappa, t, eps_n);
  BoundReport r;
  r.theorem = BoundKind::kC3;
  r.params = {{"n", n}, {"kappa", kappa}, {"eps_n", eps_n},
              {"base", base == LogBase::k2 ? 2.0 : std::numbers::e},
              {"m", m}, {"d", d}, {"t", t}};
  r.epsilon = 25.0 * eps_n * std::sqrt(n / d);
  const Real log_claim = kLn2 - d / 2.0L;
  r.extras = {{"raw_epsilon", raw.epsilon},
              {"raw_fail_prob", raw.fail_prob},
              {"raw_log_fail_prob", raw.log_fail_prob}};
  r.conditions = {
      {"d_lt_n", d < n},
      {"epsilon_claim", raw.epsilon <= r.epsilon},
      {"fail_claim", raw.log_fail_prob <= static_cast<double>(log_claim)},
  };
  finalize(r, log_claim);
  return r;
}

double sg_c3(double c1, double c2) {
  return std::max(std::exp(c2), c1 * std::exp(-c2));
}

BoundReport t5_bound(double n, double d, int m, double kappa, double tau,
                     double c1, double c2, double c1p, double c2p) {
  require_dims(n, d);
  require(m >= 1, "m must be at least 1");
  require(c1 > 0.0 && c2 > 0.0, "T5 needs positive c1, c2");
  require(c1p >= 0.0 && c2p >= 0.0, "T5 needs nonnegative c1', c2'");
  const double c3 = sg_c3(c1, c2);
  require(tau > std::max(0.0, 1.0 - c3 / c2) && tau < 1.0,
          "T5 needs max(0, 1 - c3/c2) < tau < 1");
  BoundReport r;
  r.theorem = BoundKind::kT5;
  r.params = {{"n", n}, {"d", d}, {"m", m}, {"kappa", kappa}, {"tau", tau},
              {"c1", c1}, {"c2", c2}, {"c1p", c1p}, {"c2p", c2p}};
  r.extras = {{"c3", c3}};
  r.epsilon = ((std::sqrt((c2p + 1.0) * n / d) + 1.0) / tau + 1.0) *
              std::ldexp(std::sqrt(n), -m);
  const Real gap = static_cast<Real>(tau) * tau - 1.0L;
  const Real first = 2.0L * kappa * m * kLn2 - d * c2 * c2 * gap * gap / (16.0L * c3);
  r.extras.emplace_back("log_first_term", static_cast<double>(first));
  finalize(r, log_add(first, -static_cast<Real>(c1p) * n));
  return r;
}

BoundReport chi_lower_bound(double d, double tau) {
  require(d >= 1.0, "d must be at least 1");
  require_open_unit(tau, "tau");
  BoundReport r;
  r.theorem = BoundKind::kLemmaChiLower;
  r.params = {{"d", d}, {"tau", tau}};
  r.epsilon = d * (1.0 - tau);
  finalize(r, (d / 2.0L) * (tau + std::log1p(-static_cast<Real>(tau))));
  return r;
}

BoundReport chi_upper_bound(double d, double tau) {
  require(d >= 1.0, "d must be at least 1");
  require(tau > 0.0, "tau must be positive");
  BoundReport r;
  r.theorem = BoundKind::kLemmaChiUpper;
  r.params = {{"d", d}, {"tau", tau}};
  r.epsilon = d * (1.0 + tau);
  finalize(r, -(d / 2.0L) * (tau - std::log1p(static_cast<Real>(tau))));
  return r;
}

ChiTails chi_square_tails(double d, double tau) {
  return {chi_lower_bound(d, tau).fail_prob, chi_upper_bound(d, tau).fail_prob};
}

BoundReport lemma_subexp_tail(double n, double t, double c1, double c2) {
  require(n >= 1.0, "n must be at least 1");
  require(c1 > 0.0 && c2 > 0.0, "needs positive c1, c2");
  const double c3 = sg_c3(c1, c2);
  require(t > 0.0 && t < c3 / c2, "t must lie in (0, c3/c2)");
  BoundReport r;
  r.theorem = BoundKind::kLemmaSubexpTail;
  r.params = {{"n", n}, {"t", t}, {"c1", c1}, {"c2", c2}};
  r.extras = {{"c3", c3}};
  r.epsilon = n * t;
  finalize(r, kLn2 - static_cast<Real>(n) * c2 * c2 * t * t / (16.0L * c3));
  return r;
}

BoundReport lemma_spectrum(double d, double n, double t, double c1p,
                           double c2p) {
  require_dims(n, d);
  require(t >= 0.0 && c1p >= 0.0 && c2p >= 0.0, "needs nonnegative t, c1', c2'");
  BoundReport r;
  r.theorem = BoundKind::kLemmaSpectrum;
  r.params = {{"d", d}, {"n", n}, {"t", t}, {"c1p", c1p}, {"c2p", c2p}};
  r.epsilon = std::sqrt(d) + c1p * std::sqrt(n) + t;
  finalize(r, -static_cast<Real>(c2p) * t * t);
  return r;
}

namespace {

class ParamReader {
 public:
  ParamReader(BoundKind kind, const BoundParams& p) : kind_(kind), p_(p) {}

  double get(const std::string& name) const {
    const auto it = p_.find(name);
    if (it == p_.end()) {
      throw ConfigError(to_string(kind_) + " needs parameter '" + name + "'");
    }
    return it->second;
  }
  double get_or(const std::string& name, double fallback) const {
    const auto it = p_.find(name);
    return it == p_.end() ? fallback : it->second;
  }
  int get_int(const std::string& name) const {
    const double v = get(name);
    if (v != std::floor(v)) {
      throw ConfigError(to_string(kind_) + ": parameter '" + name +
                        "' must be an integer");
    }
    return static_cast<int>(v);
  }
  LogBase base() const { return get_or("base", 0.0) == 2.0 ? LogBase::k2 : LogBase::kE; }

 private:
  BoundKind kind_;
  const BoundParams& p_;
};

}  // namespace

BoundReport evaluate_bound(BoundKind kind, const BoundParams& params) {
  const ParamReader p(kind, params);
  switch (kind) {
    case BoundKind::kT1:
      return t1_bound(p.get("n"), p.get("d"), p.get_int("m"), p.get("kappa"), p.get("t"));
    case BoundKind::kC1:
      return c1_bound(p.get("n"), p.get("kappa"), p.base());
    case BoundKind::kC2:
      return c2_bound(p.get("n"), p.get("kappa"), p.base());
    case BoundKind::kT2:
      return t2_bound(p.get("sigma"), p.get("r"), p.get("d"), p.get_int("m"), p.get("kappa"));
    case BoundKind::kT3:
      return t3_bound(p.get("n"), p.get("d"), p.get_int("m"), p.get("kappa"), p.get("t"),
                      p.get("e"));
    case BoundKind::kT4:
      return t4_bound(p.get("n"), p.get("d"), p.get_int("m"), p.get("kappa"), p.get("t"),
                      p.get("eps_n"));
    case BoundKind::kC3:
      return c3_bound(p.get("n"), p.get("kappa"), p.get("eps_n"), p.base(),
                      p.get_or("d", 0.0));
    case BoundKind::kT5:
      return t5_bound(p.get("n"), p.get("d"), p.get_int("m"), p.get("kappa"), p.get("tau"),
                      p.get("c1"), p.get("c2"), p.get("c1p"), p.get("c2p"));
    case BoundKind::kLemmaChiLower:
      return chi_lower_bound(p.get("d"), p.get("tau"));
    case BoundKind::kLemmaChiUpper:
      return chi_upper_bound(p.get("d"), p.get("tau"));
    case BoundKind::kLemmaSubexpTail:
      return lemma_subexp_tail(p.get("n"), p.get("t"), p.get("c1"), p.get("c2"));
    case BoundKind::kLemmaSpectrum:
      return lemma_spectrum(p.get("d"), p.get("n"), p.get("t"), p.get("c1p"), p.get("c2p"));
  }
  throw ConfigError("unknown bound");
}

InversionResult invert_for_d(const std::function<double(double)>& fail_of_d,
                             double target) {
  InversionResult out{1, 0.0, 1.0, true, {}};
  if (target >= 1.0) {
    out.fail_at_d = fail_of_d(1.0);
    out.notes.push_back("target >= 1 is met by every d");
    return out;
  }
  require(target > 0.0, "target failure probability must be positive");
  std::uint64_t hi = 1;
  while (fail_of_d(static_cast<double>(hi)) > target) {
    if (hi >= (std::uint64_t{1} << 62)) {
      throw DomainError("target failure probability is unreachable in d");
    }
    hi *= 2;
  }
  std::uint64_t lo = hi / 2;  // fails the target unless hi == 1
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (fail_of_d(static_cast<double>(mid)) <= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  out.d = hi;
  out.fail_at_d = fail_of_d(static_cast<double>(hi));
  out.fail_at_d_minus_1 = hi > 1 ? fail_of_d(static_cast<double>(hi - 1)) : 1.0;
  if (hi > 1 && out.fail_at_d_minus_1 <= target) {
    out.notes.push_back("d - 1 also meets the target: predicate is not monotone");
    out.monotone = false;
  }
  double prev = out.fail_at_d_minus_1;
  for (std::uint64_t k = hi; k <= hi + 16; ++k) {
    const double f = fail_of_d(static_cast<double>(k));
    if (f > prev) {
      out.monotone = false;
      std::ostringstream msg;
      msg << "failure probability increases at d = " << k;
      out.notes.push_back(msg.str());
      break;
    }
    prev = f;
  }
  return out;
}

InversionResult invert_for_d(BoundKind kind, double target,
                             const BoundParams& params) {
  if (kind == BoundKind::kC1 || kind == BoundKind::kC2 || kind == BoundKind::kC3) {
    throw ConfigError(to_string(kind) + " fixes d itself");
  }
  return invert_for_d(
      [&](double d) {
        BoundParams p = params;
        p["d"] = d;
        return evaluate_bound(kind, p).fail_prob;
      },
      target);
}

namespace {

// Empirical survival P(|Z| >= u) at each distinct magnitude u, ascending.
struct Survival {
  std::vector<double> u;
  std::vector<double> at_least;
};

Survival survival(std::vector<double> a) {
  std::sort(a.begin(), a.end());
  Survival s;
  const double n = static_cast<double>(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i == 0 || a[i] != a[i - 1]) {
      s.u.push_back(a[i]);
      s.at_least.push_back(static_cast<double>(a.size() - i) / n);
    }
  }
  return s;
}

// Least-squares slope of log survival against phi(t), over thresholds with
// at least `min_count` exceedances.
double fitted_rate(const Survival& s, std::size_t n, double (*phi)(double),
                   std::size_t min_count) {
  std::vector<double> xs, ys;
  const std::size_t stride = std::max<std::size_t>(1, s.u.size() / 200);
  for (std::size_t i = 0; i + 1 < s.u.size(); i += stride) {
    const double strictly_above = s.at_least[i + 1];
    if (strictly_above * static_cast<double>(n) < static_cast<double>(min_count)) break;
    xs.push_back(phi(s.u[i]));
    ys.push_back(std::log(strictly_above));
  }
  if (xs.size() < 2) return 0.0;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxx > 0.0 ? -sxy / sxx : 0.0;
}

// Smallest c1 with P(|Z| > t) <= c1 e^{-c2 phi(t)} for every t >= 0 under
// the empirical law: on [u_{i-1}, u_i) the survival is P(|Z| >= u_i).
double covering_c1(const Survival& s, double c2, double (*phi)(double)) {
  double c1 = 0.0;
  for (std::size_t i = 0; i < s.u.size(); ++i) {
    if (s.u[i] == 0.0) continue;
    c1 = std::max(c1, s.at_least[i] * std::exp(c2 * phi(s.u[i])));
  }
  return std::max(c1, 1e-300);
}

double identity(double t) { return t; }
double square(double t) { return t * t; }

}  // namespace

SubexpDiagnostics subexp_diagnostics(const std::vector<double>& samples,
                                     std::size_t group_size) {
  if (samples.empty()) throw DimensionError("subexp_diagnostics: no samples");
  if (group_size == 0) throw DomainError("group size must be positive");
  const std::size_t n = samples.size();
  std::vector<double> mags(n);
  for (std::size_t i = 0; i < n; ++i) mags[i] = std::abs(samples[i]);
  const double max_mag = *std::max_element(mags.begin(), mags.end());
  const Survival s = survival(mags);

  SubexpDiagnostics out{};
  out.group_size = group_size;
  if (max_mag == 0.0) {
    out.se_c1 = out.sg_c1 = 1.0;
    out.se_c2 = out.sg_c2 = 1.0;
  } else {
    out.se_c2 = fitted_rate(s, n, identity, 30);
    if (!(out.se_c2 > 0.0)) out.se_c2 = 1.0 / max_mag;
    out.se_c1 = covering_c1(s, out.se_c2, identity);
    out.sg_c2 = fitted_rate(s, n, square, 30);
    if (!(out.sg_c2 > 0.0)) out.sg_c2 = 1.0 / (max_mag * max_mag);
    out.sg_c1 = covering_c1(s, out.sg_c2, square);
  }
  out.sg_c3 = sg_c3(out.sg_c1, out.sg_c2);

  double factorial = 1.0;
  for (int p = 1; p <= 6; ++p) {
    factorial *= p;
    if (p % 2 != 0) continue;
    double mean = 0.0;
    for (double a : mags) mean += std::pow(a, p);
    mean /= static_cast<double>(n);
    const double bound = 2.0 * out.se_c1 * factorial / std::pow(out.se_c2, p);
    out.moments.push_back({p, mean, bound, mean <= bound});
  }

  for (double frac : {0.1, 0.25, 0.45}) {
    const double lambda = frac * out.se_c2;
    double mean = 0.0;
    for (double z : samples) mean += std::exp(lambda * z);
    mean /= static_cast<double>(n);
    const double bound =
        std::exp(4.0 * out.se_c1 * lambda * lambda / (out.se_c2 * out.se_c2));
    out.exp_moments.push_back({lambda, mean, bound, mean <= bound});
  }

  double second = 0.0;
  for (double z : samples) second += z * z;
  second /= static_cast<double>(n);
  const std::size_t groups = n / group_size;
  if (std::abs(second - 1.0) <= 0.05 && groups > 0) {
    std::vector<double> sums(groups, 0.0);
    for (std::size_t g = 0; g < groups; ++g) {
      for (std::size_t i = 0; i < group_size; ++i) {
        const double z = samples[g * group_size + i];
        sums[g] += z * z - 1.0;
      }
    }
    const double t_max = out.sg_c3 / out.sg_c2;
    const double gs = static_cast<double>(group_size);
    for (double frac : {0.25, 0.5, 0.75}) {
      const double t = frac * t_max;
      std::size_t hits = 0;
      for (double v : sums) hits += std::abs(v) > gs * t ? 1 : 0;
      const double freq = static_cast<double>(hits) / static_cast<double>(groups);
      const double bound = std::min(
          1.0, 2.0 * std::exp(-gs * out.sg_c2 * out.sg_c2 * t * t / (16.0 * out.sg_c3)));
      const double se = std::sqrt(bound * (1.0 - bound) / static_cast<double>(groups));
      out.group_tails.push_back({t, freq, bound, se, freq <= bound + 3.0 * se});
    }
  }

  out.all_hold = std::all_of(out.moments.begin(), out.moments.end(),
                             [](const auto& c) { return c.holds; }) &&
                 std::all_of(out.exp_moments.begin(), out.exp_moments.end(),
                             [](const auto& c) { return c.holds; }) &&
                 std::all_of(out.group_tails.begin(), out.group_tails.end(),
                             [](const auto& c) { return c.holds; });
  return out;
}

}  // namespace mcp

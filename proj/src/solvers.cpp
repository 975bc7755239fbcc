#include "mcp/solvers.hpp"

#include <boost/container_hash/hash.hpp>

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>

#include "mcp/errors.hpp"
#include "mcp/sensing.hpp"

namespace mcp {

std::string to_string(Program p) {
  switch (p) {
    case Program::kMCP: return "mcp";
    case Program::kLLS: return "lls";
    case Program::kRMCP: return "rmcp";
  }
  return "unknown";
}

Program program_from_string(const std::string& name) {
  for (Program p : {Program::kMCP, Program::kLLS, Program::kRMCP}) {
    if (to_string(p) == name) return p;
  }
  throw ConfigError("unknown program '" + name + "'");
}

void SolverSpec::validate() const {
  if (!coder) throw ConfigError("solver: no coder given");
  if (program == Program::kLLS && !budget_bits) {
    throw ConfigError("solver: lls needs budget_bits");
  }
  if (program == Program::kRMCP && !z_n) {
    throw ConfigError("solver: rmcp needs z_n");
  }
  if (z_n && !(*z_n >= 0.0)) throw ConfigError("solver: z_n must be nonnegative");
  if (const auto* a = std::get_if<AnnealStrategy>(&strategy)) {
    if (a->restarts == 0) throw ConfigError("solver: restarts must be positive");
    if (!(a->schedule.rho > 0.0 && a->schedule.rho <= 1.0)) {
      throw ConfigError("solver: rho must lie in (0, 1]");
    }
  }
}

double feasibility_tolerance(const Eigen::MatrixXd& A, Resolution m) {
  const double n = static_cast<double>(A.cols());
  return spectral_norm(A) * m.step() * std::sqrt(n) * (1.0 + 1e-9);
}

double residual(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                const QuantizedSignal& q) {
  return (A * q.values() - y).norm();
}

std::vector<std::uint64_t> grid_neighbor(const std::vector<std::uint64_t>& s,
                                         Resolution m, Rng& rng) {
  std::vector<std::uint64_t> out = s;
  const std::size_t i = rng.below(s.size());
  switch (rng.below(3)) {
    case 0:
      out[i] = s[i] == m.max_index() ? s[i] - 1 : s[i] + 1;
      break;
    case 1:
      out[i] = s[i] == 0 ? 1 : s[i] - 1;
      break;
    default:
      out[i] = 0;
      break;
  }
  return out;
}

namespace {

enum class Order { kBitsFirst, kResidualFirst };

struct Candidate {
  QuantizedSignal q;
  std::size_t bits;
  double res;
};

bool better(const Candidate& a, const Candidate& b, Order order) {
  if (order == Order::kBitsFirst) {
    if (a.bits != b.bits) return a.bits < b.bits;
    if (a.res != b.res) return a.res < b.res;
  } else {
    if (a.res != b.res) return a.res < b.res;
    if (a.bits != b.bits) return a.bits < b.bits;
  }
  return a.q < b.q;
}

// The program as a constraint plus an ordering over admissible points.
struct Problem {
  Order order;
  double tol = std::numeric_limits<double>::infinity();
  std::size_t budget = std::numeric_limits<std::size_t>::max();

  bool feasible_residual(double res) const { return res <= tol; }
  bool admissible(std::size_t bits, double res) const {
    return res <= tol && bits <= budget;
  }
};

class Tracker {
 public:
  explicit Tracker(Order order) : order_(order) {}

  void seen(double res) { min_res_ = std::min(min_res_, res); }
  void offer(const QuantizedSignal& q, std::size_t bits, double res) {
    Candidate c{q, bits, res};
    if (!best_ || better(c, *best_, order_)) best_ = std::move(c);
  }
  const std::optional<Candidate>& best() const { return best_; }
  double min_res() const { return min_res_; }

 private:
  Order order_;
  std::optional<Candidate> best_;
  double min_res_ = std::numeric_limits<double>::infinity();
};

RecoveryResult finish(const Tracker& tracker, std::size_t iterations,
                      bool certified, std::vector<std::string> notes,
                      const std::string& program) {
  if (!tracker.best()) {
    std::ostringstream msg;
    msg << program << ": no feasible grid point; smallest residual "
        << tracker.min_res();
    throw InfeasibleError(msg.str(), tracker.min_res());
  }
  const Candidate& c = *tracker.best();
  return {c.q, c.bits, c.res, iterations, certified, std::move(notes)};
}

// Calls f on every grid point with exactly k nonzero coordinates.
template <typename F>
void for_each_with_support(std::size_t n, Resolution m, std::size_t k, F&& f) {
  std::vector<std::size_t> support(k);
  for (std::size_t i = 0; i < k; ++i) support[i] = i;
  std::vector<std::uint64_t> idx(n, 0);
  while (true) {
    std::vector<std::uint64_t> vals(k, 1);
    while (true) {
      std::fill(idx.begin(), idx.end(), 0);
      for (std::size_t i = 0; i < k; ++i) idx[support[i]] = vals[i];
      f(QuantizedSignal(idx, m));
      std::size_t p = k;
      while (p > 0 && vals[p - 1] == m.max_index()) vals[--p] = 1;
      if (p == 0) break;
      ++vals[p - 1];
    }
    std::size_t p = k;
    while (p > 0 && support[p - 1] == n - k + p - 1) --p;
    if (p == 0) break;
    ++support[p - 1];
    for (std::size_t i = p; i < k; ++i) support[i] = support[i - 1] + 1;
  }
}

// Grid points with exactly k nonzero indices: C(n, k) (2^m - 1)^k.
double support_level_count(std::size_t n, Resolution m, std::size_t k) {
  const double nonzero = static_cast<double>(m.max_index());
  double c = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    c *= static_cast<double>(n - i) / static_cast<double>(i + 1) * nonzero;
  }
  return c;
}

// Support-size levels grouped by code length, ascending; empty when the
// coder's length is not a function of the support size.
std::vector<std::pair<std::size_t, std::vector<std::size_t>>> support_levels(
    const Coder& coder, std::size_t n, Resolution m) {
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t k = 0; k <= n; ++k) {
    const auto bits = coder.bits_for_support_size(n, m, k);
    if (!bits) return {};
    groups[*bits].push_back(k);
  }
  return {groups.begin(), groups.end()};
}

RecoveryResult exhaustive(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                          const Coder& coder, Resolution m, const Problem& prob,
                          double cap, const std::string& program) {
  const auto n = static_cast<std::size_t>(A.cols());
  const auto over_cap = [&](double count, const char* what) {
    std::ostringstream msg;
    msg << program << ": " << what << ' ' << count << " points, cap is " << cap;
    return BudgetError(msg.str(), count);
  };
  Tracker tracker(prob.order);
  std::size_t iterations = 0;
  std::vector<std::string> notes;

  const auto levels = support_levels(coder, n, m);
  if (!levels.empty()) {
    notes.push_back("support-level enumeration");
    // The cap bounds the levels actually visited, charged before each one.
    double visited = 0.0;
    for (const auto& [bits, ks] : levels) {
      if (bits > prob.budget) break;
      for (std::size_t k : ks) visited += support_level_count(n, m, k);
      if (visited > cap) throw over_cap(visited, "support levels need");
      for (std::size_t k : ks) {
        for_each_with_support(n, m, k, [&](const QuantizedSignal& q) {
          ++iterations;
          const double res = residual(A, y, q);
          tracker.seen(res);
          if (prob.admissible(bits, res)) tracker.offer(q, bits, res);
        });
      }
      if (prob.order == Order::kBitsFirst && tracker.best()) break;
    }
    return finish(tracker, iterations, true, std::move(notes), program);
  }

  const double count = grid_count(n, m);
  if (count > cap) throw over_cap(count, "grid has");
  GridEnumerator grid(n, m, cap);
  QuantizedSignal u = QuantizedSignal::zeros(n, m);
  while (grid.next(u)) {
    ++iterations;
    const double res = residual(A, y, u);
    tracker.seen(res);
    if (!prob.feasible_residual(res)) continue;
    if (prob.order == Order::kResidualFirst && tracker.best() &&
        res > tracker.best()->res) {
      continue;
    }
    const auto bits = coder.try_length(u);
    if (bits && prob.admissible(*bits, res)) tracker.offer(u, *bits, res);
  }
  return finish(tracker, iterations, true, std::move(notes), program);
}

struct VectorHash {
  std::size_t operator()(const std::vector<std::uint64_t>& v) const {
    return boost::hash_range(v.begin(), v.end());
  }
};

struct Evaluation {
  double res;
  std::optional<std::size_t> bits;
  bool bits_known;
};

// Memoized residual and code length per visited grid point. Code lengths
// are computed lazily because they dominate the cost.
class Evaluator {
 public:
  Evaluator(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
            const Coder& coder, Resolution m)
      : A_(A), y_(y), coder_(coder), m_(m) {}

  Evaluation& get(const std::vector<std::uint64_t>& s, bool need_bits) {
    auto [it, inserted] = memo_.try_emplace(s);
    Evaluation& e = it->second;
    if (inserted) {
      e.res = residual(A_, y_, QuantizedSignal(s, m_));
      e.bits_known = false;
    }
    if (need_bits && !e.bits_known) {
      e.bits = coder_.try_length(QuantizedSignal(s, m_));
      e.bits_known = true;
    }
    return e;
  }

 private:
  const Eigen::MatrixXd& A_;
  const Eigen::VectorXd& y_;
  const Coder& coder_;
  Resolution m_;
  std::unordered_map<std::vector<std::uint64_t>, Evaluation, VectorHash> memo_;
};

std::vector<std::uint64_t> random_state(std::size_t n, Resolution m, Rng& rng) {
  std::vector<std::uint64_t> s(n);
  for (auto& v : s) v = rng.below(m.levels());
  return s;
}

// Least-squares solution clipped to [0,1] and rounded to the grid.
std::vector<std::uint64_t> projected_least_squares(const Eigen::MatrixXd& A,
                                                   const Eigen::VectorXd& y,
                                                   Resolution m) {
  const Eigen::VectorXd x = A.completeOrthogonalDecomposition().solve(y);
  std::vector<std::uint64_t> s(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double v = std::clamp(x[i], 0.0, 1.0);
    const double j = std::floor(std::ldexp(v, m.bits()) + 0.5);
    s[static_cast<std::size_t>(i)] = static_cast<std::uint64_t>(
        std::min(j, static_cast<double>(m.max_index())));
  }
  return s;
}

RecoveryResult annealed(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                        const Coder& coder, Resolution m, const Problem& prob,
                        const AnnealStrategy& strat, const std::string& program) {
  const auto n = static_cast<std::size_t>(A.cols());
  Evaluator eval(A, y, coder, m);
  Tracker tracker(prob.order);
  const bool bits_first = prob.order == Order::kBitsFirst;
  const double nm = static_cast<double>(n) * m.bits();
  const double b_max = nm + 64.0;
  const double lambda_mcp =
      nm / std::max({y.norm(), std::isfinite(prob.tol) ? prob.tol : 0.0, 1e-12});
  double lambda_lls = 1.0;

  // Every evaluated state is offered to the tracker, so the answer is the
  // best admissible point seen under the program's own ordering.
  auto objective = [&](const std::vector<std::uint64_t>& s) {
    if (bits_first) {
      Evaluation& e = eval.get(s, false);
      tracker.seen(e.res);
      if (!prob.feasible_residual(e.res)) {
        return b_max + lambda_mcp * (e.res - prob.tol);
      }
      eval.get(s, true);
      if (!e.bits) return b_max;
      tracker.offer(QuantizedSignal(s, m), *e.bits, e.res);
      return static_cast<double>(*e.bits);
    }
    Evaluation& e = eval.get(s, true);
    tracker.seen(e.res);
    const double bits = e.bits ? static_cast<double>(*e.bits) : b_max;
    if (e.bits && prob.admissible(*e.bits, e.res)) {
      tracker.offer(QuantizedSignal(s, m), *e.bits, e.res);
    }
    return e.res * e.res +
           lambda_lls * std::max(0.0, bits - static_cast<double>(prob.budget));
  };
  auto propose = [&](const std::vector<std::uint64_t>& s, Rng& rng) {
    return grid_neighbor(s, m, rng);
  };

  const std::vector<std::uint64_t> start =
      bits_first ? std::vector<std::uint64_t>(n, 0)
                 : projected_least_squares(A, y, m);
  std::size_t iterations = 0;
  std::vector<std::string> notes;
  for (std::size_t r = 0; r < strat.restarts; ++r) {
    Rng rng(strat.seed, Stream::kSolver, static_cast<std::uint32_t>(r));
    AnnealSchedule schedule = strat.schedule;
    std::vector<std::vector<std::uint64_t>> probes;
    for (std::size_t p = 0; p < schedule.probes; ++p) {
      probes.push_back(random_state(n, m, rng));
    }
    if (!bits_first) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (const auto& s : probes) {
        const double res = eval.get(s, false).res;
        lo = std::min(lo, res * res);
        hi = std::max(hi, res * res);
      }
      lambda_lls = hi > lo ? 10.0 * (hi - lo) : 1.0;
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& s : probes) {
      const double v = objective(s);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (schedule.t0 < 0.0) schedule.t0 = hi > lo ? hi - lo : 1.0;
    const auto out = anneal(start, objective, propose, schedule, rng);
    iterations += out.iterations;
  }
  return finish(tracker, iterations, false, std::move(notes), program);
}

RecoveryResult run(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                   const SolverSpec& spec, const Problem& prob) {
  spec.validate();
  if (A.rows() != y.size()) throw DimensionError("solver: A and y disagree");
  if (A.cols() == 0) throw DimensionError("solver: empty signal");
  const std::string program = to_string(spec.program);
  if (const auto* ex = std::get_if<ExhaustiveStrategy>(&spec.strategy)) {
    return exhaustive(A, y, *spec.coder, spec.m, prob, ex->cap, program);
  }
  return annealed(A, y, *spec.coder, spec.m, prob,
                  std::get<AnnealStrategy>(spec.strategy), program);
}

}  // namespace

RecoveryResult solve_mcp(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                         const SolverSpec& spec) {
  Problem prob{Order::kBitsFirst};
  prob.tol = spec.tau_feas ? *spec.tau_feas : feasibility_tolerance(A, spec.m);
  return run(A, y, spec, prob);
}

RecoveryResult solve_lls(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                         const SolverSpec& spec) {
  spec.validate();
  Problem prob{Order::kResidualFirst};
  prob.budget = *spec.budget_bits;
  return run(A, y, spec, prob);
}

RecoveryResult solve_rmcp(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                          const SolverSpec& spec) {
  spec.validate();
  Problem prob{Order::kBitsFirst};
  prob.tol = *spec.z_n;
  return run(A, y, spec, prob);
}

RecoveryResult solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                     const SolverSpec& spec) {
  switch (spec.program) {
    case Program::kMCP: return solve_mcp(A, y, spec);
    case Program::kLLS: return solve_lls(A, y, spec);
    case Program::kRMCP: return solve_rmcp(A, y, spec);
  }
  throw ConfigError("unknown program");
}

}  // namespace mcp

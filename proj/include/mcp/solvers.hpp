#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mcp/coders.hpp"
#include "mcp/quantize.hpp"
#include "mcp/rng.hpp"

namespace mcp {

enum class Program { kMCP, kLLS, kRMCP };

std::string to_string(Program p);
Program program_from_string(const std::string& name);

// Geometric schedule T_k = t0 * rho^k. A negative t0 asks the solver to
// estimate it as the objective range over `probes` random grid points;
// t0 = 0 is greedy descent.
struct AnnealSchedule {
  double t0 = -1.0;
  double rho = 0.995;
  std::size_t iterations = 20000;
  std::size_t probes = 32;
};

struct ExhaustiveStrategy {
  double cap = 67108864.0;  // 2^26 grid points
};

struct AnnealStrategy {
  AnnealSchedule schedule;
  std::uint64_t seed = 0;
  std::size_t restarts = 1;
};

using Strategy = std::variant<ExhaustiveStrategy, AnnealStrategy>;

struct SolverSpec {
  Program program = Program::kMCP;
  CoderPtr coder;
  Resolution m{1};
  std::optional<std::size_t> budget_bits;  // LLS
  std::optional<double> z_n;               // R-MCP
  // MCP feasibility tolerance; defaults to feasibility_tolerance(A, m).
  std::optional<double> tau_feas;
  Strategy strategy = ExhaustiveStrategy{};

  // Throws ConfigError when the program's parameter is missing.
  void validate() const;
};

struct RecoveryResult {
  QuantizedSignal x_hat;
  std::size_t bits = 0;
  double residual = 0.0;
  std::size_t iterations = 0;
  bool oracle_certified = false;
  std::vector<std::string> fallbacks;
};

// sigma_max(A) 2^-m sqrt(n): the largest residual the truncation of a
// noiseless signal can leave. A relative slack of 1e-9 absorbs the
// power-iteration tolerance.
double feasibility_tolerance(const Eigen::MatrixXd& A, Resolution m);

// ||A q - y||_2, evaluated the same way everywhere so that ties compare
// identically across strategies.
double residual(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                const QuantizedSignal& q);

// MCP: fewest bits among grid points with residual <= tau_feas. Ties go to
// the smaller residual, then to the lexicographically smaller point.
RecoveryResult solve_mcp(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                         const SolverSpec& spec);
// LLS: smallest residual among grid points with bits <= budget; ties go to
// fewer bits, then lexicographic.
RecoveryResult solve_lls(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                         const SolverSpec& spec);
// R-MCP: as MCP with the tolerance replaced by z_n.
RecoveryResult solve_rmcp(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                          const SolverSpec& spec);
RecoveryResult solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                     const SolverSpec& spec);

template <typename State>
struct AnnealOutcome {
  State best;
  double best_value;
  std::size_t iterations;
  std::size_t accepted;
};

// Metropolis search over a discrete state space. `objective(s)` returns the
// value to minimize and `propose(s, rng)` a neighbour. Deterministic given
// the generator state; the best state ever evaluated is returned, so the
// result is never worse than the start.
template <typename State, typename Objective, typename Propose>
AnnealOutcome<State> anneal(State start, Objective&& objective,
                            Propose&& propose, const AnnealSchedule& schedule,
                            Rng& rng) {
  State current = std::move(start);
  double current_value = objective(current);
  AnnealOutcome<State> out{current, current_value, 0, 0};
  double T = std::max(schedule.t0, 0.0);
  for (std::size_t k = 0; k < schedule.iterations; ++k, T *= schedule.rho) {
    State candidate = propose(current, rng);
    const double value = objective(candidate);
    const double delta = value - current_value;
    const double u = rng.uniform();
    bool accept = delta <= 0.0;
    if (!accept && T > 0.0) accept = u < std::exp(-delta / T);
    if (accept) {
      current = std::move(candidate);
      current_value = value;
      ++out.accepted;
      if (current_value < out.best_value) {
        out.best = current;
        out.best_value = current_value;
      }
    }
    ++out.iterations;
  }
  return out;
}

// Grid neighbourhood: one coordinate moves one step up or down (reflecting
// at the ends) or is set to zero, each with probability 1/3.
std::vector<std::uint64_t> grid_neighbor(const std::vector<std::uint64_t>& s,
                                         Resolution m, Rng& rng);

}  // namespace mcp

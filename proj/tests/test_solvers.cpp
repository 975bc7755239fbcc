#include <gtest/gtest.h>

#include <cmath>

#include "mcp/coders.hpp"
#include "mcp/errors.hpp"
#include "mcp/sensing.hpp"
#include "mcp/solvers.hpp"

using namespace mcp;

namespace {

// Sparse code lengths without the support-size shortcut, forcing the
// solvers onto full grid enumeration.
class PlainSparse final : public Coder {
 public:
  CoderId id() const override { return inner_.id(); }
  std::string describe() const override { return "plain-sparse"; }
  std::optional<BitString> try_encode(const QuantizedSignal& q) const override {
    return inner_.try_encode(q);
  }
  using Coder::decode;
  QuantizedSignal decode(BitReader& in, std::size_t n, Resolution m) const override {
    return inner_.decode(in, n, m);
  }
  std::size_t header_bits(std::size_t n, Resolution m) const override {
    return inner_.header_bits(n, m);
  }

 private:
  SparseCoder inner_;
};

struct Instance {
  Eigen::MatrixXd A;
  Eigen::VectorXd y;
  QuantizedSignal truth;
};

Instance sparse_instance(std::size_t n, std::size_t d, Resolution m, std::uint64_t seed) {
  Rng rng(seed, Stream::kSignal);
  std::vector<std::uint64_t> idx(n, 0);
  idx[rng.below(n)] = m.max_index() / 2 + 1 + rng.below(m.max_index() / 2);
  QuantizedSignal truth(idx, m);
  Eigen::MatrixXd A = draw_matrix(Ensemble{EnsembleKind::kGaussStd, d, n, seed});
  Eigen::VectorXd y = A * truth.values();
  return {std::move(A), std::move(y), std::move(truth)};
}

SolverSpec spec_for(Program p, CoderPtr coder, Resolution m) {
  SolverSpec s;
  s.program = p;
  s.coder = std::move(coder);
  s.m = m;
  return s;
}

}  // namespace

TEST(Mcp, FeasibleAndNoLongerThanTruth) {
  const Resolution m(4);
  const auto coder = std::make_shared<SparseCoder>();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Instance in = sparse_instance(4, 6, m, seed);
    const auto r = solve_mcp(in.A, in.y, spec_for(Program::kMCP, coder, m));
    EXPECT_LE(r.residual, feasibility_tolerance(in.A, m));
    EXPECT_LE(r.bits, coder->length(in.truth));
    EXPECT_EQ(r.bits, coder->length(r.x_hat));
    EXPECT_TRUE(r.oracle_certified);
  }
}

TEST(Mcp, SupportLevelsAgreeWithFullEnumeration) {
  const Resolution m(3);
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Instance in = sparse_instance(4, 3, m, 100 + seed);
    for (Program p : {Program::kMCP, Program::kLLS, Program::kRMCP}) {
      SolverSpec fast = spec_for(p, std::make_shared<SparseCoder>(), m);
      SolverSpec slow = spec_for(p, std::make_shared<PlainSparse>(), m);
      fast.budget_bits = slow.budget_bits = fast.coder->length(in.truth);
      fast.z_n = slow.z_n = 0.5;
      std::optional<RecoveryResult> a, b;
      try {
        a = solve(in.A, in.y, fast);
      } catch (const InfeasibleError&) {
      }
      try {
        b = solve(in.A, in.y, slow);
      } catch (const InfeasibleError&) {
      }
      ASSERT_EQ(a.has_value(), b.has_value()) << to_string(p) << " seed " << seed;
      if (!a) continue;
      EXPECT_EQ(a->x_hat, b->x_hat) << to_string(p) << " seed " << seed;
      EXPECT_EQ(a->bits, b->bits);
      EXPECT_EQ(a->residual, b->residual);
    }
  }
}

TEST(Lls, RespectsBudgetAndBeatsTruthResidual) {
  const Resolution m(3);
  const auto coder = std::make_shared<SparseCoder>();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Instance in = sparse_instance(4, 5, m, 200 + seed);
    in.y += 0.1 * Eigen::VectorXd::Ones(in.y.size());
    SolverSpec s = spec_for(Program::kLLS, coder, m);
    s.budget_bits = coder->length(in.truth);
    const auto r = solve_lls(in.A, in.y, s);
    EXPECT_LE(r.bits, *s.budget_bits);
    EXPECT_LE(r.residual, residual(in.A, in.y, in.truth));
  }
}

TEST(Rmcp, HugeRadiusGivesShortestCode) {
  const Resolution m(3);
  const auto coder = std::make_shared<SparseCoder>();
  const Instance in = sparse_instance(5, 4, m, 7);
  SolverSpec s = spec_for(Program::kRMCP, coder, m);
  s.z_n = 1e9;
  const auto r = solve_rmcp(in.A, in.y, s);
  EXPECT_EQ(r.x_hat, QuantizedSignal::zeros(5, m));
  EXPECT_EQ(r.bits, *coder->bits_for_support_size(5, m, 0));
}

TEST(Mcp, BitsNondecreasingAsRowsAreAppended) {
  const Resolution m(3);
  const auto coder = std::make_shared<SparseCoder>();
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Instance in = sparse_instance(4, 12, m, 300 + seed);
    SolverSpec s = spec_for(Program::kMCP, coder, m);
    s.tau_feas = feasibility_tolerance(in.A, m);
    std::size_t previous = 0;
    for (Eigen::Index d = 1; d <= in.A.rows(); ++d) {
      const auto r = solve_mcp(in.A.topRows(d), in.y.head(d), s);
      EXPECT_GE(r.bits, previous) << "seed " << seed << " d " << d;
      previous = r.bits;
    }
  }
}

TEST(Solvers, BudgetAndInfeasibleErrors) {
  const Resolution m(4);
  const Eigen::MatrixXd A = draw_matrix(Ensemble{EnsembleKind::kGaussStd, 3, 8, 1});
  const Eigen::VectorXd y = Eigen::VectorXd::Constant(3, 50.0);
  SolverSpec s = spec_for(Program::kRMCP, make_coder(CoderId::kLZ), m);
  s.z_n = 1.0;
  s.strategy = ExhaustiveStrategy{1e6};
  try {
    solve(A, y, s);
    FAIL() << "expected BudgetError";
  } catch (const BudgetError& e) {
    EXPECT_EQ(e.count(), std::ldexp(1.0, 32));
  }
  s.coder = std::make_shared<SparseCoder>();
  s.strategy = ExhaustiveStrategy{};
  const Eigen::MatrixXd B = A.leftCols(3);
  try {
    solve(B, y, s);
    FAIL() << "expected InfeasibleError";
  } catch (const InfeasibleError& e) {
    EXPECT_GT(e.min_residual(), 1.0);
  }
}

TEST(Solvers, SupportLevelsChargeOnlyVisitedPoints) {
  const Resolution m(4);
  const Instance in = sparse_instance(16, 10, m, 5);
  SolverSpec s = spec_for(Program::kMCP, std::make_shared<SparseCoder>(), m);
  s.tau_feas = 1e-9;
  const auto r = solve(in.A, in.y, s);
  EXPECT_EQ(r.x_hat, in.truth);
  s.strategy = ExhaustiveStrategy{100};
  try {
    solve(in.A, in.y, s);
    FAIL() << "expected BudgetError";
  } catch (const BudgetError& e) {
    EXPECT_EQ(e.count(), 1.0 + 16.0 * 15.0);
  }
}

TEST(Solvers, MissingParametersAreConfigErrors) {
  const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(2, 2);
  const Eigen::VectorXd y = Eigen::VectorXd::Zero(2);
  const auto coder = std::make_shared<SparseCoder>();
  EXPECT_THROW(solve(A, y, spec_for(Program::kLLS, coder, Resolution(2))), ConfigError);
  EXPECT_THROW(solve(A, y, spec_for(Program::kRMCP, coder, Resolution(2))), ConfigError);
  EXPECT_THROW(solve(A, y, spec_for(Program::kMCP, nullptr, Resolution(2))), ConfigError);
  EXPECT_THROW(solve(A, Eigen::VectorXd::Zero(3), spec_for(Program::kMCP, coder, Resolution(2))),
               DimensionError);
}

TEST(Anneal, NeverWorseThanStartAndDeterministic) {
  auto objective = [](int s) { return std::abs(s - 37) + 0.5 * ((s / 3) % 2); };
  auto propose = [](int s, Rng& rng) { return s + (rng.uniform() < 0.5 ? -1 : 1); };
  const AnnealSchedule schedule{2.0, 0.99, 3000, 0};
  for (int start : {-50, 0, 37, 100}) {
    Rng a(5), b(5);
    const auto x = anneal(start, objective, propose, schedule, a);
    const auto y = anneal(start, objective, propose, schedule, b);
    EXPECT_LE(x.best_value, objective(start));
    EXPECT_EQ(objective(x.best), x.best_value);
    EXPECT_EQ(x.best, y.best);
    EXPECT_EQ(x.accepted, y.accepted);
    EXPECT_EQ(x.best, 37);
  }
}

TEST(Anneal, SolverMatchesExhaustiveOnSmallInstance) {
  const Resolution m(3);
  const auto coder = std::make_shared<SparseCoder>();
  const Instance in = sparse_instance(4, 6, m, 11);
  SolverSpec ex = spec_for(Program::kMCP, coder, m);
  SolverSpec an = ex;
  an.strategy = AnnealStrategy{AnnealSchedule{-1.0, 0.995, 20000, 32}, 3, 3};
  const auto a = solve(in.A, in.y, ex);
  const auto b = solve(in.A, in.y, an);
  EXPECT_FALSE(b.oracle_certified);
  EXPECT_EQ(a.bits, b.bits);
}

TEST(GridNeighbor, StaysOnGridAndChangesOneCoordinate) {
  const Resolution m(2);
  Rng rng(9);
  std::vector<std::uint64_t> s = {0, 3, 1, 2};
  for (int i = 0; i < 2000; ++i) {
    const auto t = grid_neighbor(s, m, rng);
    int changed = 0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      EXPECT_LE(t[j], m.max_index());
      changed += t[j] != s[j];
    }
    EXPECT_LE(changed, 1);
    s = t;
  }
}

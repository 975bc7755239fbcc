#include <gtest/gtest.h>

#include "mcp/errors.hpp"
#include "mcp/harness.hpp"

using namespace mcp;

namespace {

ExperimentConfig tiny(std::size_t trials, std::size_t workers = 1) {
  Config c = Config::parse(
      "signal.class = sparse\nsignal.n = 6\nsignal.k = 1\nsignal.m = 2\n"
      "ensemble.d = 5\nsolver.program = mcp\nsolver.m = 2\nbound.kind = T1\n",
      "tiny.cfg");
  c.set("trials", std::to_string(trials));
  c.set("workers", std::to_string(workers));
  c.set("seed", "11");
  return experiment_from_config(c);
}

}  // namespace

TEST(Harness, ZeroTrialsSkip) {
  const auto s = run_experiment(tiny(0));
  EXPECT_EQ(s.verdict, "SKIP");
  EXPECT_TRUE(s.records.empty());
}

TEST(Harness, TinyCampaignStaysWithinBound) {
  const auto s = run_experiment(tiny(200));
  EXPECT_EQ(s.records.size(), 200u);
  EXPECT_EQ(s.errors, 0u);
  EXPECT_EQ(s.valid, 200u);
  EXPECT_EQ(s.verdict, "PASS");
  EXPECT_LE(s.empirical_freq, s.fail_prob + s.slack);
  for (const auto& r : s.records) {
    EXPECT_EQ(r.within_bound, r.error_l2 <= r.epsilon);
    EXPECT_EQ(r.success, r.bits == r.truth_bits);
    EXPECT_LE(r.bits, r.truth_bits);
    EXPECT_EQ(r.seed, 11 + r.trial);
  }
}

TEST(Harness, ReplayAndWorkerCountGiveIdenticalCsv) {
  const std::string a = records_csv(run_experiment(tiny(30, 1)));
  const std::string b = records_csv(run_experiment(tiny(30, 1)));
  const std::string c = records_csv(run_experiment(tiny(30, 3)));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  EXPECT_EQ(a.substr(0, a.find('\r')),
            "trial,seed,error_l2,error_linf,residual,bits,truth_bits,epsilon,fail_prob,"
            "within_bound,success,error");
}

TEST(Harness, SingleTrialMatchesCampaignRecord) {
  const ExperimentConfig cfg = tiny(5);
  const auto s = run_experiment(cfg);
  const TrialRecord r = run_trial(cfg, 3);
  EXPECT_EQ(r.error_l2, s.records[3].error_l2);
  EXPECT_EQ(r.bits, s.records[3].bits);
}

TEST(Harness, DescribeRoundTrips) {
  const ExperimentConfig cfg = tiny(7);
  Config c = Config::parse("", "echo");
  for (const auto& [k, v] : describe(cfg)) c.set(k, v);
  EXPECT_EQ(describe(experiment_from_config(c)), describe(cfg));
}

TEST(Harness, ConfigErrorsNameTheKey) {
  Config c = Config::parse("signal.n = 6\nsolver.colour = red\n", "bad.cfg");
  try {
    experiment_from_config(c);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(std::string(e.what()), "bad.cfg:2: key 'solver.colour' is not recognised");
  }
  Config d = Config::parse("solver.program = lasso\n", "p.cfg");
  EXPECT_THROW(experiment_from_config(d), ConfigError);
}

TEST(Harness, TrialErrorsAreRecordedNotThrown) {
  ExperimentConfig cfg = tiny(3);
  cfg.coder = "lz";
  cfg.strategy = ExhaustiveStrategy{10.0};
  const auto s = run_experiment(cfg);
  EXPECT_EQ(s.errors, 3u);
  EXPECT_EQ(s.verdict, "ERROR");
  EXPECT_NE(s.records[0].error.find("cap"), std::string::npos);
}

TEST(Harness, CsvQuoting) {
  EXPECT_EQ(csv_quote("plain"), "plain");
  EXPECT_EQ(csv_quote("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_quote("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_quote("two\nlines"), "\"two\nlines\"");
}

TEST(Harness, SummaryJson) {
  const auto s = run_experiment(tiny(4));
  const Json j = summary_json(s);
  EXPECT_EQ(j["verdict"], s.verdict);
  EXPECT_EQ(j["config"]["signal.n"], "6");
  EXPECT_FALSE(j.contains("records"));
  EXPECT_EQ(summary_json(s, true)["records"].size(), 4u);
}

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mcp/bounds.hpp"
#include "mcp/coders.hpp"
#include "mcp/config.hpp"
#include "mcp/sensing.hpp"
#include "mcp/signals.hpp"
#include "mcp/solvers.hpp"

namespace mcp {

inline constexpr const char* kVersion = "mcp 0.1.0";

using Json = nlohmann::ordered_json;

// How R-MCP's z_n is chosen per trial: a fixed value, the MCP tolerance
// tau_feas, the noise budget e, tau_feas + e, or (sqrt(n) + 2 sqrt(d)) eps_n
// with eps_n the certified approximation bound.
enum class RadiusRule { kFixed, kTau, kNoise, kTauNoise, kApprox };

struct ExperimentConfig {
  SignalSpec signal;
  EnsembleKind ensemble = EnsembleKind::kGaussStd;
  std::size_t d = 1;
  NoiseModel noise;
  Program program = Program::kMCP;
  std::string coder = "sparse";
  Resolution m{2};
  // LLS budget: fixed, or the truth's code length when absent.
  std::optional<std::size_t> budget_bits;
  RadiusRule radius = RadiusRule::kFixed;
  double z_n = 0.0;
  Strategy strategy = ExhaustiveStrategy{};
  // Bound compared per trial: T1, T2, T3, T4 or none.
  std::optional<BoundKind> bound = BoundKind::kT1;
  double t = 0.965;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  bool record_wall_time = false;
};

// Keys accepted by experiment_from_config, for docs and validation.
const std::vector<std::string>& experiment_keys();
ExperimentConfig experiment_from_config(const Config& config);
// Canonical key = value listing of a config; parsing it back gives the
// same experiment.
std::vector<std::pair<std::string, std::string>> describe(const ExperimentConfig& c);

// Coder by name for signals of the given spec (low_rank needs the shape).
CoderPtr coder_by_name(const std::string& name, const SignalSpec& spec);

struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double error_l2 = 0.0;
  double error_linf = 0.0;
  double residual = 0.0;
  std::size_t bits = 0;
  std::size_t truth_bits = 0;
  double wall_ms = 0.0;
  double epsilon = 0.0;
  double fail_prob = 1.0;
  bool within_bound = false;
  // The solver reached the truth's code length.
  bool success = false;
  std::string error;
};

// One trial: signal, matrix and noise all seeded by seed + index.
TrialRecord run_trial(const ExperimentConfig& config, std::size_t index);

struct ExperimentSummary {
  ExperimentConfig config;
  std::vector<TrialRecord> records;
  std::size_t valid = 0;
  std::size_t failures = 0;
  std::size_t errors = 0;
  double empirical_freq = 0.0;
  double fail_prob = 0.0;  // mean of the per-trial bound probabilities
  double slack = 0.0;      // three binomial standard errors
  std::string verdict;     // PASS, FAIL, SKIP or ERROR
};

// Trials run on `workers` threads; records come back in trial order, so the
// output does not depend on scheduling.
ExperimentSummary run_experiment(const ExperimentConfig& config);

// Shortest round-trip decimal; nan and inf spelled out.
std::string format_number(double v);
std::string csv_quote(const std::string& s);
std::string records_csv(const ExperimentSummary& s);
Json summary_json(const ExperimentSummary& s, bool with_records = false);

Json to_json(const BoundReport& r);
Json to_json(const ComplexityCertificate& c);
Json to_json(const RecoveryResult& r);

}  // namespace mcp

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mcp {

// One measured quantity of a criterion against its threshold.
struct Check {
  std::string label;
  double value;
  double threshold;
  bool pass;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  std::vector<Check> checks;
};

struct SuiteOptions {
  std::uint64_t seed = 7;
  // Overrides the per-criterion trial count where one applies.
  std::optional<std::size_t> trials;
  std::size_t workers = 1;
};

inline constexpr int kCriterionCount = 11;

CriterionResult run_criterion(int id, const SuiteOptions& options);

// quantizer, coders, lemmas, oracle, recovery, bounds, acceptance (all).
const std::vector<std::string>& suite_names();
std::vector<int> suite_criteria(const std::string& suite);
std::vector<CriterionResult> run_suite(const std::string& suite,
                                       const SuiteOptions& options);

// "PASS 6 noiseless recovery: detail (1.23 s)"
std::string summary_line(const CriterionResult& r);
// criterion,name,check,value,threshold,pass rows.
std::string checks_csv(const std::vector<CriterionResult>& results);

}  // namespace mcp

#include <cstdlib>
#include <iostream>
#include <string>

#include "mcp/suites.hpp"

// One PASS/FAIL line per acceptance criterion. Optional arguments: a seed,
// then a single criterion id.
int main(int argc, char** argv) {
  mcp::SuiteOptions options;
  if (argc > 1) options.seed = std::stoull(argv[1]);
  int first = 1;
  int last = mcp::kCriterionCount;
  if (argc > 2) first = last = std::stoi(argv[2]);
  bool pass = true;
  for (int id = first; id <= last; ++id) {
    const mcp::CriterionResult r = mcp::run_criterion(id, options);
    std::cout << mcp::summary_line(r) << std::endl;
    for (const auto& c : r.checks) {
      if (!c.pass) {
        std::cout << "    failed check: " << c.label << " = " << c.value << " vs " << c.threshold
                  << std::endl;
      }
    }
    pass = pass && r.pass;
  }
  return pass ? EXIT_SUCCESS : EXIT_FAILURE;
}

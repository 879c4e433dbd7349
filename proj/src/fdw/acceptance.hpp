#pragma once

// The end-to-end acceptance checks, shared by the test binary and the CLI.

#include <string>
#include <vector>

namespace fdw {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

inline constexpr int kCriterionCount = 10;

/// Runs one criterion (1..10). Library errors inside a check count as a failure.
CriterionResult run_criterion(int id);

/// Runs the listed criteria in order; an empty list runs all of them.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids = {});

/// "criterion <id> <PASS|FAIL> <name> (<seconds>s): <detail>"
std::string format_result(const CriterionResult& r);

}  // namespace fdw

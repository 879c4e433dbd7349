// Runs the acceptance criteria and prints one pass/fail line each.
// Usage: acceptance_tests [id ...]; exits nonzero when any criterion fails.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "fdw/acceptance.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    const int id = std::atoi(argv[i]);
    if (id < 1 || id > fdw::kCriterionCount) {
      std::cerr << "no criterion " << argv[i] << '\n';
      return 2;
    }
    ids.push_back(id);
  }
  int failed = 0;
  for (const auto& r : fdw::run_acceptance(ids)) {
    std::cout << fdw::format_result(r) << std::endl;
    if (!r.passed) ++failed;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << '\n';
  return failed == 0 ? 0 : 1;
}

#pragma once

#include <string>
#include <vector>

namespace gammalab {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

enum class VerifyLevel { fast, full };

/// Runs the invariant suites. `fast` stays on N <= 256 grids; `full` adds
/// the N = 1024/2048 checks and the annealing seeds.
std::vector<CheckResult> run_verification(VerifyLevel level);

}  // namespace gammalab

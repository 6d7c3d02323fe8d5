#pragma once

#include <string>
#include <vector>

namespace ipdsaw {

enum class VerifyLevel { Fast, Full };

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Cross-module identity suites. Fast: IBP identities, inverse-tilt round
// trips, delta_c agreement and the L <= 10 oracle chain. Full adds the D_N
// ratio studies and the bead convolution identity up to L = 30.
std::vector<CheckResult> run_verify(VerifyLevel level);

}  // namespace ipdsaw

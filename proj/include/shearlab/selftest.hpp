#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace shearlab {

struct SelfTestResult {
  std::string suite;
  std::string property;
  std::size_t samples = 0;
  double worst = 0.0;      // largest observed violation
  double tolerance = 0.0;  // pass threshold for `worst`
  bool passed() const { return worst <= tolerance; }
};

// Randomized invariant checks across all modules (a few seconds in total).
std::vector<SelfTestResult> run_selftest(std::uint64_t seed = 1);

}  // namespace shearlab

// Acceptance gate: one PASS/FAIL line per criterion, exit 0 iff all pass.
#include <algorithm>
#include <cstdio>

#include "spectralset/verify.hpp"

int main() {
  const auto results = spectralset::run_acceptance({});
  bool all_passed = true;
  for (const auto& r : results) {
    std::printf("[%s] criterion %2d %-22s measured %.4e tolerance %.0e (%.1fs)\n",
                r.passed ? "PASS" : "FAIL", r.index, r.name.c_str(), r.measured,
                r.tolerance, r.seconds);
    if (!r.detail.empty()) std::printf("       %s\n", r.detail.c_str());
    all_passed = all_passed && r.passed;
  }
  std::printf("%d/%d criteria passed\n",
              static_cast<int>(results.size()) -
                  static_cast<int>(std::count_if(results.begin(), results.end(),
                                                 [](const auto& r) { return !r.passed; })),
              static_cast<int>(results.size()));
  return all_passed ? 0 : 1;
}

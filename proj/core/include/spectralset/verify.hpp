#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spectralset/types.hpp"

namespace spectralset {

/// One acceptance criterion outcome. `measured` is the headline quantity (the
/// worst deviation observed), compared against `tolerance`; sub-check detail
/// goes in `detail`.
struct CriterionResult {
  int index = 0;
  std::string name;
  bool passed = false;
  double measured = 0;
  double tolerance = 0;
  std::string detail;
  double seconds = 0;
};

struct VerifyOptions {
  int grid_n = 512;
  int fourier_k = 64;
  std::uint64_t seed = 0;
};

int criterion_count();

/// Run one criterion (1-based). Library errors are caught and reported as a
/// failed result, never thrown.
CriterionResult run_criterion(int index, const VerifyOptions& opts = {});

std::vector<CriterionResult> run_acceptance(const VerifyOptions& opts = {});

}  // namespace spectralset

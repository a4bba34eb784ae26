#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace drfsim {

struct SelftestReport {
  int passed = 0;
  int failed = 0;
  std::vector<std::string> failures;

  bool ok() const { return failed == 0; }
};

/// Structural invariant suite over 2j = 1 .. max_twice_j with randomized
/// states drawn from `seed`: Kraus and projector completeness, projector
/// algebra, trace preservation, positivity, diagonal closure, the mixed
/// fixed point, Legendre normalization, positivity of reconstructed
/// distributions along the fitted walk, coherent-population normalization.
SelftestReport run_selftest(std::uint64_t seed, int max_twice_j = 20);

}  // namespace drfsim

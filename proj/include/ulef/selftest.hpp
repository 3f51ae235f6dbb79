#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ulef/group.hpp"

namespace ulef {

struct SelftestOptions {
  std::uint64_t seed = 1;
  int trials = 100;
  /// Plants a flipped top simplex in the tetrahedron fixture, so the
  /// fundamental-cycle property must fail.
  bool corrupt_orientation = false;
};

struct PropertyResult {
  std::string name;
  int trials = 0;
  int passed = 0;
  json counterexample;  // null when every trial passed
  bool ok() const { return passed == trials; }
};

/// Seeded property suite: chain identities, fundamental cycles, subdivision
/// stability of Lefschetz classes, and certificate re-verification.
std::vector<PropertyResult> run_selftest(const SelftestOptions& options);
json selftest_to_json(const SelftestOptions& options, const std::vector<PropertyResult>& results);

}  // namespace ulef

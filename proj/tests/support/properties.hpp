// SPDX-License-Identifier: Apache-2.0
// Randomized property checks shared by the unit tests and the acceptance
// binary. Each returns the number of cases run and the violations found.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace webreq::testing {

struct PropertyResult {
  int cases = 0;
  int violations = 0;
  std::vector<std::string> failures;  // first few, for diagnostics

  void fail(std::string what) {
    ++violations;
    if (failures.size() < 5) failures.push_back(std::move(what));
  }
  bool ok() const noexcept { return violations == 0; }
};

/// Extracted literal URL set vs the branch-enumeration interpreter. Equal on
/// independent programs, superset on correlated ones.
PropertyResult oracle_equivalence(int programs, bool correlated, std::uint64_t seed);

/// Adding URL, method or data candidates never turns Consistent into a
/// mismatch.
PropertyResult any_combination_monotonicity(int cases, std::uint64_t seed);

/// A Sym in the URL at position i behaves like `{var}` in the template at i.
PropertyResult wildcard_symmetry(int cases, std::uint64_t seed);

/// Templates with a different segment count never match.
PropertyResult segment_count_necessity(int cases, std::uint64_t seed);

/// methods = {} yields the same finding as methods = {GET}.
PropertyResult default_method_equivalence(int cases, std::uint64_t seed);

/// Extraction is total and deterministic over generated programs.
PropertyResult extraction_totality(int programs, std::uint64_t seed);

}  // namespace webreq::testing

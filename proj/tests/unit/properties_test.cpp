// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "properties.hpp"

namespace webreq::testing {
namespace {

void expect_ok(const PropertyResult& r, int min_cases) {
  EXPECT_GE(r.cases, min_cases);
  EXPECT_EQ(r.violations, 0);
  for (const std::string& f : r.failures) ADD_FAILURE() << f;
}

TEST(Properties, OracleEquivalenceIndependent) { expect_ok(oracle_equivalence(150, false, 1000), 150); }
TEST(Properties, OracleSupersetCorrelated) { expect_ok(oracle_equivalence(150, true, 5000), 150); }
TEST(Properties, AnyCombinationMonotonicity) { expect_ok(any_combination_monotonicity(200, 11), 200); }
TEST(Properties, WildcardSymmetry) { expect_ok(wildcard_symmetry(300, 12), 300); }
TEST(Properties, SegmentCountNecessity) { expect_ok(segment_count_necessity(150, 13), 300); }
TEST(Properties, DefaultMethodEquivalence) { expect_ok(default_method_equivalence(200, 14), 200); }
TEST(Properties, ExtractionTotalityAndDeterminism) { expect_ok(extraction_totality(150, 9000), 150); }

}  // namespace
}  // namespace webreq::testing

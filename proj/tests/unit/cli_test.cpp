// SPDX-License-Identifier: Apache-2.0
// Spawns the webreq-lint binary and checks its exit-code contract.
#include <gtest/gtest.h>

#include "testing.hpp"

namespace webreq {
namespace {

using testing::run_command;

std::string lint(const std::string& args) { return std::string("'") + WEBREQ_LINT + "' " + args + " 2>/dev/null"; }

TEST(Cli, ExtractFixture) {
  auto r = run_command(lint("extract corpus/js/fig1_mapsengine.js --format json"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("/tables/{aid}/features/batchInsert"), std::string::npos);
  EXPECT_NE(r.output.find("\"POST\""), std::string::npos);
}

TEST(Cli, ExtractSyntaxErrorAndEmptyDir) {
  auto r = run_command(lint("extract corpus/js/syntax_error.js --format json"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("\"syntax-error\""), std::string::npos);
  testing::TempDir dir;
  r = run_command(lint("extract '" + dir.path().string() + "'"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("files: 0"), std::string::npos);
}

TEST(Cli, CheckExitCodes) {
  EXPECT_EQ(run_command(lint("check corpus/js/spotify_seach_typo.js --specs corpus/specs")).exit_code, 1);
  EXPECT_EQ(run_command(lint("check corpus/js/fig3_instagram.js corpus/js/fig6a_multiple_paths.js --specs corpus/specs"))
                .exit_code,
            0);
  EXPECT_EQ(run_command(lint("check corpus/js/symbolic_base.js --specs corpus/specs")).exit_code, 0);
  EXPECT_EQ(run_command(lint("check corpus/js --specs corpus/specs --fail-on errors-only")).exit_code, 1);
  EXPECT_EQ(run_command(lint("check corpus/js/spotify_seach_typo.js --specs corpus/specs --fail-on errors-only"))
                .exit_code,
            0);
}

TEST(Cli, SpotifyTypoText) {
  auto r = run_command(lint("check corpus/js/spotify_seach_typo.js --specs corpus/specs --format text"));
  EXPECT_NE(r.output.find(" PathMismatch "), std::string::npos);
  EXPECT_NE(r.output.find("PathMismatch: 1"), std::string::npos);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run_command(lint("check corpus/js")).exit_code, 2);
  EXPECT_EQ(run_command(lint("extract corpus/js --specs corpus/specs")).exit_code, 2);
  EXPECT_EQ(run_command(lint("extract no/such/path")).exit_code, 2);
  EXPECT_EQ(run_command(lint("check corpus/js --specs corpus/js")).exit_code, 2);
  EXPECT_EQ(run_command(lint("frobnicate")).exit_code, 2);
  EXPECT_EQ(run_command(lint("check corpus/js --specs corpus/specs --max-value-set 0")).exit_code, 2);
}

TEST(Cli, JqueryFlag) {
  const std::string base = "check corpus/js/spotify_country_in_data.js --specs corpus/specs";
  EXPECT_EQ(run_command(lint(base)).exit_code, 1);
  EXPECT_EQ(run_command(lint(base + " --jquery-get-data-as-query")).exit_code, 0);
}

TEST(Cli, GoldenReportByteForByte) {
  auto r = run_command(lint("check corpus/js --specs corpus/specs --format json"));
  EXPECT_EQ(r.output, testing::read_file("corpus/expected/check.json"));
  auto e = run_command(lint("extract corpus/js --format json"));
  EXPECT_EQ(e.output, testing::read_file("corpus/expected/extract.json"));
}

}  // namespace
}  // namespace webreq

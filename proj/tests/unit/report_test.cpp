// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "testing.hpp"
#include "webreq/driver.hpp"

namespace webreq {
namespace {

namespace fs = std::filesystem;

RunConfig corpus_check(unsigned jobs = 1) {
  RunConfig c;
  c.command = RunConfig::Command::Check;
  c.inputs = {"corpus/js"};
  c.specs_dir = "corpus/specs";
  c.jobs = jobs;
  return c;
}

TEST(Report, JsonRoundTrip) {
  Report r = run(corpus_check());
  Report back = report_from_json(nlohmann::json::parse(render_json(r)));
  EXPECT_EQ(back, r);
  RunConfig e = corpus_check();
  e.command = RunConfig::Command::Extract;
  e.specs_dir.clear();
  Report x = run(e);
  EXPECT_EQ(report_from_json(nlohmann::json::parse(render_json(x))), x);
}

TEST(Report, SummaryMismatchRejected) {
  nlohmann::json j = nlohmann::json::parse(render_json(run(corpus_check())));
  j["summary"]["requests"] = 0;
  EXPECT_THROW(report_from_json(j), std::invalid_argument);
}

TEST(Report, ParallelEqualsSequential) {
  EXPECT_EQ(render_json(run(corpus_check(1))), render_json(run(corpus_check(8))));
}

TEST(Report, SortedByPathThenLine) {
  Report r = run(corpus_check(4));
  for (std::size_t i = 1; i < r.files.size(); ++i) EXPECT_LT(r.files[i - 1].path, r.files[i].path);
  for (const FileRecord& f : r.files) {
    for (std::size_t i = 1; i < f.requests.size(); ++i) EXPECT_LE(f.requests[i - 1].line, f.requests[i].line);
  }
}

TEST(Report, TextCountsMatchJson) {
  Report r = run(corpus_check());
  const std::string text = render_text(r);
  const nlohmann::json j = nlohmann::json::parse(render_json(r));
  std::size_t total = 0;
  for (const auto& [name, n] : j["summary"]["outcomes"].items()) {
    const std::string line = "  " + name + ": " + std::to_string(n.get<std::size_t>()) + "\n";
    EXPECT_NE(text.find(line), std::string::npos) << line;
    total += n.get<std::size_t>();
  }
  EXPECT_EQ(total, j["summary"]["requests"].get<std::size_t>());
  std::size_t findings = 0;
  for (const auto& f : j["files"]) findings += f["requests"].size();
  EXPECT_EQ(findings, total);
}

TEST(Report, TextPathMismatchLine) {
  RunConfig c = corpus_check();
  c.inputs = {"corpus/js/spotify_seach_typo.js"};
  const std::string text = render_text(run(c));
  EXPECT_NE(text.find("PathMismatch"), std::string::npos);
  EXPECT_NE(text.find("nearest: /search"), std::string::npos);
}

TEST(Report, EmptyInputHasSummaryOnly) {
  testing::TempDir dir;
  RunConfig c = corpus_check();
  c.inputs = {dir.path()};
  const std::string text = render_text(run(c));
  EXPECT_EQ(text.rfind("\nfiles: 0 (skipped 0), requests: 0\n", 0), 0u);
}

TEST(Driver, UsageErrors) {
  RunConfig c = corpus_check();
  c.inputs = {"does/not/exist"};
  EXPECT_THROW(run(c), UsageError);
  c = corpus_check();
  c.specs_dir.clear();
  EXPECT_THROW(run(c), UsageError);
  testing::TempDir empty;
  c = corpus_check();
  c.specs_dir = empty.path();
  EXPECT_THROW(run(c), UsageError);
  c = corpus_check();
  c.command = RunConfig::Command::Extract;
  EXPECT_THROW(run(c), UsageError);
}

TEST(Driver, FileStatuses) {
  testing::TempDir dir;
  testing::write_file(dir.path() / "bad.js", "function (");
  testing::write_file(dir.path() / "empty.js", "");
  testing::write_file(dir.path() / "big.js", std::string(kMaxFileBytes + 1, ' '));
  testing::write_file(dir.path() / "ignored.txt", "$.get(");
  RunConfig c;
  c.inputs = {dir.path()};
  Report r = run(c);
  ASSERT_EQ(r.files.size(), 3u);
  EXPECT_EQ(r.files[0].status, FileStatus::SyntaxError);
  EXPECT_EQ(r.files[1].status, FileStatus::TooLarge);
  EXPECT_EQ(r.files[2].status, FileStatus::Ok);
  EXPECT_EQ(exit_code(r, c), 0);
  c.command = RunConfig::Command::Check;
  c.specs_dir = testing::source_dir() / "corpus/specs";
  r = run(c);
  EXPECT_EQ(exit_code(r, c), 0);
  c.fail_on = FailOn::ErrorsOnly;
  EXPECT_EQ(exit_code(r, c), 1);
}

}  // namespace
}  // namespace webreq

// SPDX-License-Identifier: Apache-2.0
// Acceptance suite: prints one [PASS]/[FAIL] line per criterion and exits
// non-zero when any criterion fails. Run from the source directory.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "properties.hpp"
#include "testing.hpp"
#include "webreq/driver.hpp"

namespace {

using namespace webreq;
using webreq::testing::PropertyResult;
using Clock = std::chrono::steady_clock;
namespace fs = std::filesystem;

// Pinned limits.
constexpr double kCorpusSeconds = 10.0;
constexpr double kOracleSeconds = 60.0;
constexpr int kOraclePrograms = 200;  // per mode
constexpr int kPropertyCases = 100;

struct Criterion {
  std::vector<std::string> problems;
  std::vector<std::string> info;

  void require(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

RunConfig check_config(std::vector<fs::path> inputs) {
  RunConfig c;
  c.command = RunConfig::Command::Check;
  c.inputs = std::move(inputs);
  c.specs_dir = "corpus/specs";
  return c;
}

const RequestDescriptor* single_request(Criterion& c, const FileExtraction& r, const std::string& name) {
  c.require(r.descriptors.size() == 1, name + ": expected exactly one request, got " + std::to_string(r.descriptors.size()));
  return r.descriptors.empty() ? nullptr : &r.descriptors[0];
}

FileExtraction extract_fixture(const std::string& name) {
  return extract(SourceFile::load(fs::path("corpus/js") / name));
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const std::string& s : v) out += (out.empty() ? "" : ", ") + s;
  return out;
}

// AC1: golden corpus agrees with hand labels and the frozen report.
void corpus_agreement(Criterion& c) {
  const auto start = Clock::now();
  RunConfig config = check_config({"corpus/js"});
  const Report report = run(config);
  const double elapsed = seconds_since(start);

  const auto labels = nlohmann::json::parse(webreq::testing::read_file("corpus/labels.json"));
  std::map<std::string, int> categories;
  c.require(report.files.size() == labels.size(), "file count differs from labels");
  c.require(report.files.size() >= 25, "fewer than 25 fixtures");
  std::size_t agreed = 0;
  for (const FileRecord& f : report.files) {
    const std::string name = fs::path(f.path).filename().string();
    if (!labels.contains(name)) {
      c.require(false, name + ": no label");
      continue;
    }
    const auto& label = labels[name];
    std::vector<std::string> outcomes;
    for (const RequestRecord& r : f.requests) {
      if (r.finding) outcomes.emplace_back(outcome_name(r.finding->outcome));
    }
    const bool ok = label["status"].get<std::string>() == file_status_name(f.status) &&
                    label["outcomes"].get<std::vector<std::string>>() == outcomes;
    c.require(ok, name + ": got " + std::string(file_status_name(f.status)) + " [" + join(outcomes) + "]");
    agreed += ok ? 1 : 0;
    for (const std::string& o : outcomes) ++categories[o];
  }
  for (Outcome o : kAllOutcomes) {
    c.require(categories[std::string(outcome_name(o))] > 0, "no fixture labelled " + std::string(outcome_name(o)));
  }
  c.require(render_json(report) == webreq::testing::read_file("corpus/expected/check.json"),
            "JSON report differs from corpus/expected/check.json");
  c.require(elapsed < kCorpusSeconds, "corpus run took " + std::to_string(elapsed) + " s");
  std::ostringstream info;
  info << agreed << "/" << report.files.size() << " fixtures agree, " << elapsed << " s";
  c.info.push_back(info.str());
}

// AC2: exact extraction results for the worked examples.
void exact_extraction(Criterion& c) {
  const FileExtraction r_fig1 = extract_fixture("fig1_mapsengine.js");
  if (auto d = single_request(c, r_fig1, "fig1")) {
    const auto urls = webreq::testing::rendered(d->urls);
    c.require(urls == std::vector<std::string>{"https://www.googleapis.com/mapsengine/v1beta2/tables/{aid}/features/batchInsert"},
              "fig1 url: " + join(urls));
    c.require(d->methods == std::vector<std::string>{"POST"}, "fig1 method: " + join(d->methods));
  }
  const FileExtraction r_fig3 = extract_fixture("fig3_instagram.js");
  if (auto d = single_request(c, r_fig3, "fig3")) {
    const auto urls = webreq::testing::rendered(d->urls);
    c.require(urls == std::vector<std::string>{
                          "https://api.instagram.com/v1/tags/{searchHashtag}/media/recent?client_id=1e3a4f7c9d2b48e6"},
              "fig3 url: " + join(urls));
  }
  const FileExtraction r_fig6a = extract_fixture("fig6a_multiple_paths.js");
  if (auto d = single_request(c, r_fig6a, "fig6a")) {
    const auto urls = webreq::testing::rendered(d->urls);
    c.require(urls == std::vector<std::string>{"https://api.spotify.com/v1/search?q={term}&type=album",
                                               "https://api.spotify.com/v1/search?q={term}&type=artist"},
              "fig6a urls: " + join(urls));
  }
  const FileExtraction r_fig6b = extract_fixture("fig6b_multiple_callers.js");
  if (auto d = single_request(c, r_fig6b, "fig6b")) {
    const auto urls = webreq::testing::rendered(d->urls);
    c.require(urls == std::vector<std::string>{"https://api.instagram.com/v1/users/{userId}/",
                                               "https://api.instagram.com/v1/users/{userId}/media/recent"},
              "fig6b urls: " + join(urls));
  }
}

void report_property(Criterion& c, const std::string& name, const PropertyResult& r, int min_cases) {
  c.require(r.cases >= min_cases, name + ": only " + std::to_string(r.cases) + " cases");
  c.require(r.ok(), name + ": " + std::to_string(r.violations) + " violations");
  for (const std::string& f : r.failures) c.problems.push_back("  " + f);
  c.info.push_back(name + " " + std::to_string(r.cases) + " cases, " + std::to_string(r.violations) + " violations");
}

// AC3: extraction vs the branch-enumeration interpreter.
void oracle(Criterion& c) {
  const auto start = Clock::now();
  report_property(c, "independent", webreq::testing::oracle_equivalence(kOraclePrograms, false, 0x5eed0000), kOraclePrograms);
  report_property(c, "correlated", webreq::testing::oracle_equivalence(kOraclePrograms, true, 0x5eed8000), kOraclePrograms);
  const double elapsed = seconds_since(start);
  c.require(elapsed < kOracleSeconds, "oracle run took " + std::to_string(elapsed) + " s");
  c.info.push_back(std::to_string(elapsed) + " s");
}

// AC4: checker semantics properties.
void checker_properties(Criterion& c) {
  report_property(c, "monotonicity", webreq::testing::any_combination_monotonicity(kPropertyCases, 101), kPropertyCases);
  report_property(c, "wildcard-symmetry", webreq::testing::wildcard_symmetry(kPropertyCases, 102), kPropertyCases);
  report_property(c, "segment-count", webreq::testing::segment_count_necessity(kPropertyCases, 103), kPropertyCases);
  report_property(c, "default-method", webreq::testing::default_method_equivalence(kPropertyCases, 104), kPropertyCases);
}

Finding only_finding(Criterion& c, const std::string& fixture, bool jquery_flag = false) {
  RunConfig config = check_config({fs::path("corpus/js") / fixture});
  config.jquery_get_data_as_query = jquery_flag;
  const Report r = run(config);
  if (r.files.size() != 1 || r.files[0].requests.size() != 1 || !r.files[0].requests[0].finding) {
    c.require(false, fixture + ": expected one finding");
    return {};
  }
  return *r.files[0].requests[0].finding;
}

void expect_outcome(Criterion& c, const std::string& fixture, const Finding& f, Outcome want) {
  c.require(f.outcome == want,
            fixture + ": " + std::string(outcome_name(f.outcome)) + ", want " + std::string(outcome_name(want)));
}

// AC5: regression scenarios.
void scenarios(Criterion& c) {
  Finding typo = only_finding(c, "spotify_seach_typo.js");
  expect_outcome(c, "spotify_seach_typo.js", typo, Outcome::PathMismatch);
  c.require(typo.nearest == std::vector<std::string>{"/search"}, "typo hint: " + join(typo.nearest));

  expect_outcome(c, "tokeninfo_get.js", only_finding(c, "tokeninfo_get.js"), Outcome::MethodMismatch);
  expect_outcome(c, "spotify_country_in_data.js", only_finding(c, "spotify_country_in_data.js"), Outcome::QueryMismatch);
  expect_outcome(c, "spotify_country_in_data.js (flag)", only_finding(c, "spotify_country_in_data.js", true),
                 Outcome::Consistent);
  expect_outcome(c, "instagram_multi_segment.js", only_finding(c, "instagram_multi_segment.js"), Outcome::PathMismatch);
  expect_outcome(c, "bookshop_json_string_payload.js", only_finding(c, "bookshop_json_string_payload.js"),
                 Outcome::Consistent);
}

// AC6: invalid, empty and oversized inputs.
void robustness(Criterion& c) {
  webreq::testing::TempDir dir;
  webreq::testing::write_file(dir.path() / "invalid.js", "function (\n  $.get('x'\n");
  webreq::testing::write_file(dir.path() / "empty.js", "");
  std::string big = "// padding\n";
  while (big.size() <= kMaxFileBytes) big += "var pad = 'xxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxx';\n";
  webreq::testing::write_file(dir.path() / "huge.js", big);
  webreq::testing::write_file(dir.path() / "valid.js",
                              webreq::testing::read_file("corpus/js/fig3_instagram.js"));

  const std::map<std::string, std::string> want = {
      {"empty.js", "ok"}, {"huge.js", "too-large"}, {"invalid.js", "syntax-error"}, {"valid.js", "ok"}};
  auto verify = [&](const std::string& how, const std::string& json_text) {
    try {
      const auto j = nlohmann::json::parse(json_text);
      std::map<std::string, std::string> got;
      for (const auto& f : j["files"]) {
        got[fs::path(f["path"].get<std::string>()).filename().string()] = f["status"].get<std::string>();
        if (f["status"] != "ok") c.require(f.contains("diagnostic"), how + ": no diagnostic for " + f["path"].dump());
      }
      c.require(got == want, how + ": unexpected file statuses");
    } catch (const std::exception& e) {
      c.require(false, how + ": " + e.what());
    }
  };

  // In process.
  RunConfig extract_config;
  extract_config.inputs = {dir.path()};
  const Report extracted = run(extract_config);
  verify("extract", render_json(extracted));
  c.require(exit_code(extracted, extract_config) == 0, "extract exit code");
  RunConfig check = check_config({dir.path()});
  const Report checked = run(check);
  verify("check", render_json(checked));
  c.require(exit_code(checked, check) == 0, "check any-mismatch exit code");
  check.fail_on = FailOn::ErrorsOnly;
  c.require(exit_code(checked, check) == 1, "check errors-only exit code");

#ifdef WEBREQ_LINT
  // Through the binary.
  const std::string bin = std::string("'") + WEBREQ_LINT + "' ";
  const std::string d = "'" + dir.path().string() + "'";
  auto r = webreq::testing::run_command(bin + "extract " + d + " --format json 2>/dev/null");
  c.require(r.exit_code == 0, "cli extract exit " + std::to_string(r.exit_code));
  verify("cli extract", r.output);
  r = webreq::testing::run_command(bin + "check " + d + " --specs corpus/specs --format json 2>/dev/null");
  c.require(r.exit_code == 0, "cli check exit " + std::to_string(r.exit_code));
  verify("cli check", r.output);
  r = webreq::testing::run_command(bin + "check " + d + " --specs corpus/specs --fail-on errors-only 2>/dev/null");
  c.require(r.exit_code == 1, "cli check errors-only exit " + std::to_string(r.exit_code));
  r = webreq::testing::run_command(bin + "check " + d + " 2>/dev/null");
  c.require(r.exit_code == 2, "cli usage error exit " + std::to_string(r.exit_code));
  c.info.push_back("checked in process and through webreq-lint");
#else
  c.info.push_back("checked in process only");
#endif
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Criterion&)>>> criteria = {
      {"AC1 golden corpus agrees with labels and frozen report", corpus_agreement},
      {"AC2 exact extraction for worked examples", exact_extraction},
      {"AC3 oracle equivalence over generated programs", oracle},
      {"AC4 checker semantics properties", checker_properties},
      {"AC5 regression scenarios", scenarios},
      {"AC6 robustness on invalid, empty and oversized files", robustness},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Criterion c;
    try {
      fn(c);
    } catch (const std::exception& e) {
      c.problems.push_back(std::string("exception: ") + e.what());
    }
    const bool ok = c.problems.empty();
    failed += ok ? 0 : 1;
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name;
    if (!c.info.empty()) std::cout << " (" << join(c.info) << ")";
    std::cout << "\n";
    for (const std::string& p : c.problems) std::cout << "    " << p << "\n";
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
  return failed == 0 ? 0 : 1;
}

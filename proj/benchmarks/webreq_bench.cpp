// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <filesystem>
#include <string>

#include "webreq/driver.hpp"
#include "webreq/js/parser.hpp"

namespace {

using namespace webreq;
namespace fs = std::filesystem;

const fs::path kRoot = WEBREQ_SOURCE_DIR;

SourceFile fixture(const char* name) { return SourceFile::load(kRoot / "corpus/js" / name); }

// A script with `n` helpers each building a URL from the previous one.
std::string chain_script(int n) {
  std::string js = "var base = 'https://api.example.test/v1';\n";
  for (int i = 0; i < n; ++i) {
    const std::string prev = i == 0 ? "base" : "step" + std::to_string(i - 1) + "(id)";
    js += "function step" + std::to_string(i) + "(id) {\n  var u = " + prev + " + '/s" + std::to_string(i) +
          "';\n  if (id) { u += '/' + id; }\n  return u;\n}\n";
  }
  js += "$.get(step" + std::to_string(n - 1) + "(x));\n";
  return js;
}

void BM_Parse(benchmark::State& state) {
  const SourceFile f = fixture("fig1_mapsengine.js");
  for (auto _ : state) benchmark::DoNotOptimize(js::parse_source(f));
}
BENCHMARK(BM_Parse);

void BM_ExtractFixture(benchmark::State& state) {
  const SourceFile f = fixture("fig3_instagram.js");
  for (auto _ : state) benchmark::DoNotOptimize(extract(f));
}
BENCHMARK(BM_ExtractFixture);

void BM_ExtractChain(benchmark::State& state) {
  const SourceFile f("chain.js", chain_script(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(extract(f));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ExtractChain)->RangeMultiplier(4)->Range(4, 256)->Complexity();

void BM_CheckRequest(benchmark::State& state) {
  const SpecIndex index(load_spec_directory(kRoot / "corpus/specs").specs);
  const FileExtraction r = extract(fixture("fig6a_multiple_paths.js"));
  for (auto _ : state) benchmark::DoNotOptimize(check_request(r.descriptors.at(0), index));
}
BENCHMARK(BM_CheckRequest);

void BM_CorpusCheck(benchmark::State& state) {
  RunConfig config;
  config.command = RunConfig::Command::Check;
  config.inputs = {kRoot / "corpus/js"};
  config.specs_dir = kRoot / "corpus/specs";
  config.jobs = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run(config));
}
BENCHMARK(BM_CorpusCheck)->Arg(1)->Arg(4)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();

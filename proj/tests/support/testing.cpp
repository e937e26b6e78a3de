// SPDX-License-Identifier: Apache-2.0
#include "testing.hpp"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "webreq/js/parser.hpp"

namespace webreq::testing {

namespace fs = std::filesystem;

fs::path source_dir() { return fs::path(WEBREQ_SOURCE_DIR); }

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

ScriptIR lower_text(std::string_view js) {
  SourceFile file("test.js", std::string(js));
  return lower(js::parse_source(file), "test.js");
}

CallGraph graph_of(std::string_view js) { return CallGraph(lower_text(js)); }

FileExtraction extract_text(std::string_view js, ExtractOptions options) {
  return extract(SourceFile("test.js", std::string(js)), options);
}

std::vector<std::string> rendered(const std::vector<StringValue>& values) {
  std::vector<std::string> out;
  for (const StringValue& v : values) out.push_back(v.render());
  return out;
}

const SpecIndex& corpus_index() {
  static const SpecIndex index = [] {
    SpecLoadResult loaded = load_spec_directory(source_dir() / "corpus" / "specs");
    if (!loaded.errors.empty()) throw std::runtime_error("corpus spec failed to load: " + loaded.errors[0].second);
    return SpecIndex(std::move(loaded.specs));
  }();
  return index;
}

RequestDescriptor descriptor(const std::vector<std::string>& urls, std::vector<std::string> methods,
                             std::vector<DataValue> data) {
  RequestDescriptor d;
  d.site.file = "test.js";
  d.site.line = 1;
  d.site.column = 1;
  d.site.receiver = "$";
  for (const std::string& u : urls) d.urls.push_back(StringValue::parse(u));
  d.methods = std::move(methods);
  d.data = std::move(data);
  return d;
}

CommandResult run_command(const std::string& command) {
  CommandResult result;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) throw std::runtime_error("popen failed");
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) result.output.append(buf.data(), n);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

TempDir::TempDir() {
  std::random_device rd;
  for (int attempt = 0; attempt < 100; ++attempt) {
    fs::path candidate = fs::temp_directory_path() / ("webreq-test-" + std::to_string(rd()));
    if (fs::create_directory(candidate)) {
      path_ = std::move(candidate);
      return;
    }
  }
  throw std::runtime_error("cannot create temporary directory");
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

}  // namespace webreq::testing

// SPDX-License-Identifier: Apache-2.0
#include "webreq/driver.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>

#include "webreq/js/parse_error.hpp"
#include "webreq/version.hpp"

namespace webreq {

namespace fs = std::filesystem;

std::vector<fs::path> collect_inputs(const std::vector<fs::path>& inputs) {
  std::set<fs::path> files;
  for (const fs::path& input : inputs) {
    std::error_code ec;
    const auto status = fs::status(input, ec);
    if (ec || !fs::exists(status)) throw UsageError("no such file or directory: " + input.generic_string());
    if (fs::is_directory(status)) {
      for (auto it = fs::recursive_directory_iterator(input, fs::directory_options::skip_permission_denied, ec);
           it != fs::recursive_directory_iterator(); it.increment(ec)) {
        if (ec) break;
        if (it->is_regular_file() && it->path().extension() == ".js") files.insert(it->path().lexically_normal());
      }
    } else {
      files.insert(input.lexically_normal());
    }
  }
  return {files.begin(), files.end()};
}

FileRecord analyze_file(const fs::path& path, const ExtractOptions& extract_options, const SpecIndex* index,
                        const CheckOptions& check_options) {
  FileRecord record;
  record.path = path.generic_string();
  std::error_code ec;
  const auto size = fs::file_size(path, ec);
  if (ec) {
    record.status = FileStatus::IoError;
    record.diagnostic = ec.message();
    return record;
  }
  if (size > kMaxFileBytes) {
    record.status = FileStatus::TooLarge;
    record.diagnostic = std::to_string(size) + " bytes exceeds the " + std::to_string(kMaxFileBytes) + " byte limit";
    return record;
  }
  try {
    const SourceFile source = SourceFile::load(path);
    const FileExtraction result = extract(source, extract_options);
    for (const RequestDescriptor& d : result.descriptors) {
      RequestRecord r = make_record(d);
      if (index != nullptr) r.finding = check_request(d, *index, check_options);
      record.requests.push_back(std::move(r));
    }
  } catch (const js::ParseError& e) {
    record.status = FileStatus::SyntaxError;
    record.diagnostic = e.what();
    record.requests.clear();
  } catch (const std::bad_alloc&) {
    throw;
  } catch (const std::exception& e) {
    record.status = fs::exists(path) ? FileStatus::InternalError : FileStatus::IoError;
    record.diagnostic = e.what();
    record.requests.clear();
  }
  return record;
}

Report run(const RunConfig& config) {
  if (config.inputs.empty()) throw UsageError("no input paths given");
  if (config.max_value_set == 0) throw UsageError("--max-value-set must be positive");
  const bool check = config.command == RunConfig::Command::Check;
  if (check && config.specs_dir.empty()) throw UsageError("check requires --specs");
  if (!check && !config.specs_dir.empty()) throw UsageError("extract does not take --specs");

  Report report;
  report.command = check ? "check" : "extract";
  report.version = std::string(kVersion);

  SpecIndex index;
  if (check) {
    if (!fs::is_directory(config.specs_dir)) {
      throw UsageError("specs directory not found: " + config.specs_dir.generic_string());
    }
    SpecLoadResult loaded = load_spec_directory(config.specs_dir);
    report.spec_errors = std::move(loaded.errors);
    if (loaded.specs.empty()) throw UsageError("no loadable specs in " + config.specs_dir.generic_string());
    index = SpecIndex(std::move(loaded.specs));
  }

  const std::vector<fs::path> files = collect_inputs(config.inputs);
  report.files.resize(files.size());
  ExtractOptions extract_options;
  extract_options.max_values = config.max_value_set;
  CheckOptions check_options;
  check_options.jquery_get_data_as_query = config.jquery_get_data_as_query;

  unsigned jobs = config.jobs != 0 ? config.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(files.size(), 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      report.files[i] = analyze_file(files[i], extract_options, check ? &index : nullptr, check_options);
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  return report;
}

int exit_code(const Report& report, const RunConfig& config) {
  if (config.command == RunConfig::Command::Extract) return 0;
  for (const FileRecord& f : report.files) {
    if (config.fail_on == FailOn::ErrorsOnly) {
      if (f.status != FileStatus::Ok) return 1;
      continue;
    }
    for (const RequestRecord& r : f.requests) {
      if (r.finding && is_mismatch(r.finding->outcome)) return 1;
    }
  }
  return 0;
}

}  // namespace webreq

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "webreq/report.hpp"

namespace webreq {

/// Invalid command-line input. Maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FailOn : std::uint8_t {
  AnyMismatch,  // exit 1 when any request has a mismatch outcome
  ErrorsOnly,   // exit 1 only when some input file could not be analyzed
};

struct RunConfig {
  enum class Command : std::uint8_t { Extract, Check };
  Command command = Command::Extract;
  std::vector<std::filesystem::path> inputs;
  std::filesystem::path specs_dir;  // required for check, forbidden for extract
  bool jquery_get_data_as_query = false;
  std::size_t max_value_set = 64;
  FailOn fail_on = FailOn::AnyMismatch;
  unsigned jobs = 0;  // 0 = hardware concurrency
};

/// Files larger than this are skipped with a diagnostic.
inline constexpr std::uintmax_t kMaxFileBytes = 1024 * 1024;

/// Every `*.js` file under the inputs, sorted and de-duplicated. Throws
/// UsageError for a path that does not exist.
std::vector<std::filesystem::path> collect_inputs(const std::vector<std::filesystem::path>& inputs);

/// Extracts (and, when `index` is given, checks) one file.
FileRecord analyze_file(const std::filesystem::path& path, const ExtractOptions& extract_options,
                        const SpecIndex* index, const CheckOptions& check_options);

/// Runs a whole command. Throws UsageError for invalid configurations,
/// including a `check` without any loadable spec.
Report run(const RunConfig& config);

/// 0 clean, 1 failing findings (subject to fail_on).
int exit_code(const Report& report, const RunConfig& config);

}  // namespace webreq

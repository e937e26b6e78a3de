// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "webreq/checker.hpp"
#include "webreq/extract.hpp"

namespace webreq {

enum class FileStatus : std::uint8_t { Ok, SyntaxError, TooLarge, IoError, InternalError };

std::string_view file_status_name(FileStatus s) noexcept;
std::optional<FileStatus> parse_file_status(std::string_view name) noexcept;

struct RequestRecord {
  int line = 0;
  int column = 0;
  std::string callee;    // ajax, get, post
  std::string receiver;  // $ or jQuery
  std::vector<std::string> urls;  // rendered with {sym}
  std::vector<std::string> methods;
  std::vector<DataValue> data;
  bool unresolved = false;
  std::optional<Finding> finding;

  friend bool operator==(const RequestRecord&, const RequestRecord&);
};

RequestRecord make_record(const RequestDescriptor& d);

struct FileRecord {
  std::string path;
  FileStatus status = FileStatus::Ok;
  std::string diagnostic;
  std::vector<RequestRecord> requests;

  friend bool operator==(const FileRecord&, const FileRecord&) = default;
};

struct Report {
  std::string command;  // "extract" or "check"
  std::string version;
  std::vector<FileRecord> files;  // sorted by path
  std::vector<std::pair<std::string, std::string>> spec_errors;

  struct Summary {
    std::size_t files = 0;
    std::size_t skipped = 0;  // files with a status other than ok
    std::size_t requests = 0;
    std::map<Outcome, std::size_t> outcomes;  // check only; every outcome present

    friend bool operator==(const Summary&, const Summary&) = default;
  };
  Summary summary() const;

  friend bool operator==(const Report&, const Report&) = default;
};

bool operator==(const Finding& a, const Finding& b);

nlohmann::json to_json(const Finding& f);
Finding finding_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Report& report);
/// Inverse of to_json. Throws std::invalid_argument on malformed input.
Report report_from_json(const nlohmann::json& j);

/// Two-space indented JSON followed by a newline.
std::string render_json(const Report& report);
std::string render_text(const Report& report);

}  // namespace webreq

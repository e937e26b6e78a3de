// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace webreq {

/// A specification document that cannot be used. The spec is skipped.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SchemaDef;
using SchemaPtr = std::shared_ptr<const SchemaDef>;

/// JSON schema subset needed for payload checks. References are resolved at
/// load time; `ref` keeps the name of the definition a node came from.
struct SchemaDef {
  std::string type;  // empty when unspecified
  std::map<std::string, SchemaPtr> properties;
  std::vector<std::string> required;  // sorted, unique
  SchemaPtr items;
  std::string ref;

  friend bool operator==(const SchemaDef& a, const SchemaDef& b);
};

enum class ParamLocation : std::uint8_t { Path, Query, Body, FormData, Header };

std::string_view location_name(ParamLocation loc) noexcept;

struct ParamDef {
  std::string name;
  ParamLocation location = ParamLocation::Query;
  bool required = false;
  std::string type;
  SchemaPtr schema;  // body parameters only

  friend bool operator==(const ParamDef& a, const ParamDef& b);
};

struct OperationDef {
  std::string method;  // upper case
  std::string operation_id;
  std::vector<ParamDef> parameters;  // operation level only
  bool deprecated = false;

  friend bool operator==(const OperationDef&, const OperationDef&) = default;
};

/// One template segment: either literal text or a `{name}` variable.
struct TemplateSegment {
  bool variable = false;
  std::string text;  // literal text, or the variable name

  friend bool operator==(const TemplateSegment&, const TemplateSegment&) = default;
};

struct PathItem {
  std::string path;  // as written, e.g. "/tags/{tag-name}/media/recent"
  std::vector<TemplateSegment> segments;
  std::vector<ParamDef> parameters;  // path level
  std::map<std::string, OperationDef> operations;  // keyed by upper-case method

  friend bool operator==(const PathItem&, const PathItem&) = default;
};

struct ApiSpec {
  std::string origin;  // file name or caller-supplied label
  std::string title;
  std::string version;
  std::vector<std::string> schemes;  // lower case
  std::string host;                  // lower case
  std::string base_path;             // "" for the root, else "/x" without trailing slash
  std::vector<PathItem> paths;       // sorted by path
  std::map<std::string, SchemaPtr> definitions;
  std::vector<std::string> warnings;

  const PathItem* find_path(std::string_view path) const;
  friend bool operator==(const ApiSpec& a, const ApiSpec& b);
};

/// Parses and validates a Swagger 2.0 JSON document.
ApiSpec load_spec(std::string_view text, std::string origin = {});
ApiSpec load_spec(const nlohmann::json& doc, std::string origin = {});
ApiSpec load_spec_file(const std::filesystem::path& path);

/// Splits a path template into segments. Returns nullopt when a variable
/// does not occupy a whole segment, e.g. "/files/{id}.json".
std::optional<std::vector<TemplateSegment>> parse_path_template(std::string_view path);

/// scheme://host + basePath for every scheme of the spec.
std::vector<std::string> base_urls(const ApiSpec& spec);

/// Path-level and operation-level parameters; on a (name, location)
/// collision the operation-level definition wins.
std::vector<ParamDef> effective_params(const PathItem& item, const OperationDef& op);

/// Body schema of the effective body parameter, if any.
const ParamDef* effective_body(const PathItem& item, const OperationDef& op,
                               std::vector<ParamDef>& storage);

struct SpecLoadResult {
  std::vector<std::shared_ptr<const ApiSpec>> specs;
  std::vector<std::pair<std::string, std::string>> errors;  // (file, message)
};

/// Loads every `*.json` file in `dir` (not recursive), sorted by file name.
SpecLoadResult load_spec_directory(const std::filesystem::path& dir);

class SpecIndex {
 public:
  struct Entry {
    std::string base_url;
    std::shared_ptr<const ApiSpec> spec;
  };

  SpecIndex() = default;
  explicit SpecIndex(std::vector<std::shared_ptr<const ApiSpec>> specs);

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t spec_count() const noexcept { return specs_.size(); }

  /// Entries whose base URL is a prefix of `url` ending at a boundary
  /// (end, '/', '?' or '#'). Scheme and host compare case-insensitively.
  /// All matches are returned; no longest-prefix selection.
  std::vector<const Entry*> match(std::string_view url) const;

 private:
  std::vector<std::shared_ptr<const ApiSpec>> specs_;
  std::vector<Entry> entries_;
};

/// Lower-cases the scheme and authority of an absolute URL.
std::string normalize_url_origin(std::string_view url);

}  // namespace webreq

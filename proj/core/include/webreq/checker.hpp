// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "webreq/extract.hpp"
#include "webreq/openapi.hpp"
#include "webreq/values.hpp"

namespace webreq {

enum class Outcome : std::uint8_t {
  Consistent,
  Unresolved,
  NoSpecMatched,
  PathMismatch,
  MethodMismatch,
  PayloadMismatch,
  QueryMismatch,
};

inline constexpr Outcome kAllOutcomes[] = {Outcome::Consistent,     Outcome::Unresolved,     Outcome::NoSpecMatched,
                                           Outcome::PathMismatch,   Outcome::MethodMismatch, Outcome::PayloadMismatch,
                                           Outcome::QueryMismatch};

std::string_view outcome_name(Outcome o) noexcept;
std::optional<Outcome> parse_outcome(std::string_view name) noexcept;
bool is_mismatch(Outcome o) noexcept;

struct QueryPair {
  std::string key;  // percent-decoded
  StringValue value;
};

/// A candidate URL split after its base URL.
struct UrlParts {
  StringValue full;
  std::string base;                   // matched base URL, normalized
  std::vector<StringValue> segments;  // path segments, no '/'
  std::vector<QueryPair> query;
  bool query_unresolved = false;
};

/// Splits `rest` (the URL text after the base) into path and query.
UrlParts split_url(const StringValue& rest);

/// One path segment from a URL against one template segment.
bool segment_matches(const StringValue& url_segment, const TemplateSegment& tmpl);

/// Template matches the URL segments position by position. A Sym matches
/// exactly one template segment; `{var}` matches any one URL segment.
bool path_matches(const std::vector<StringValue>& url_segments, const std::vector<TemplateSegment>& tmpl);

struct CheckOptions {
  /// Count GET `data` as query parameters, as jQuery does at runtime.
  bool jquery_get_data_as_query = false;
};

struct Finding {
  Outcome outcome = Outcome::Consistent;
  std::vector<std::string> tried;        // rendered candidate URLs
  std::vector<std::string> specs;        // titles of specs whose base matched
  std::vector<std::string> endpoints;    // "METHOD /template" reached by the deepest combination
  std::vector<std::string> nearest;      // templates within edit distance 2 ("possible typo")
  std::vector<std::string> missing;      // required body properties or query parameters absent
  std::vector<std::string> extra_query;  // query keys the endpoint does not declare (informational)
  std::vector<std::string> notes;
};

/// Finds the first failing stage (base, path, method, payload/query) for the
/// best combination of candidate URL, method and data. Consistent when any
/// combination passes every applicable stage.
Finding check_request(const RequestDescriptor& request, const SpecIndex& index, const CheckOptions& options = {});

/// Levenshtein distance, bytewise.
std::size_t edit_distance(std::string_view a, std::string_view b);

/// Missing required properties of `data` under `schema`, as dotted paths.
/// Sym values and partially symbolic strings satisfy any schema; a fully
/// literal string is parsed as JSON first.
std::vector<std::string> missing_properties(const DataValue& data, const SchemaDef& schema);

}  // namespace webreq

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "webreq/callgraph.hpp"
#include "webreq/source.hpp"
#include "webreq/values.hpp"

namespace webreq {

enum class CalleeKind : std::uint8_t { Ajax, Get, Post };

std::string_view callee_kind_name(CalleeKind kind) noexcept;

struct RequestSite {
  std::string file;
  int line = 0;
  int column = 0;
  CalleeKind kind = CalleeKind::Ajax;
  std::string receiver;  // "$" or "jQuery"
  InstrId call = 0;
};

struct RequestDescriptor {
  RequestSite site;
  std::vector<StringValue> urls;     // sorted, unique, never empty
  std::vector<std::string> methods;  // upper-case tokens or "{name}" markers; sorted
  std::vector<DataValue> data;       // sorted, unique
  bool unresolved = false;
};

struct ExtractOptions {
  std::size_t max_values = 64;
};

/// Every `$.ajax`, `$.get`, `$.post` call (also spelled `jQuery`), in source order.
std::vector<RequestSite> locate_request_sites(const CallGraph& graph);

/// Instructions that may affect the arguments of the site's call, sorted.
std::vector<InstrId> backward_slice(const RequestSite& site, const CallGraph& graph);

/// Evaluates IR values into sets of string and data values. Results are
/// memoized, so one evaluator should be reused for all sites of a file.
class Evaluator {
 public:
  explicit Evaluator(const CallGraph& graph, ExtractOptions options = {});
  ~Evaluator();
  Evaluator(const Evaluator&) = delete;
  Evaluator& operator=(const Evaluator&) = delete;

  /// String values `var` may hold just before instruction `at`.
  std::vector<StringValue> eval_string(VarId var, InstrId at);
  /// Payload values `var` may hold just before instruction `at`.
  std::vector<DataValue> eval_data(VarId var, InstrId at);

  RequestDescriptor describe(const RequestSite& site);

  /// True if any evaluation since the last reset hit the value-set cap.
  bool overflowed() const noexcept;
  void reset_overflow() noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct FileExtraction {
  std::vector<RequestDescriptor> descriptors;
};

/// Full pipeline for one file: parse, lower, build the call graph, locate
/// sites and evaluate them. Throws js::ParseError for malformed input.
FileExtraction extract(const SourceFile& file, const ExtractOptions& options = {});

}  // namespace webreq

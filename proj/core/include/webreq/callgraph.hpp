// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "webreq/ir.hpp"

namespace webreq {

/// Def-use and call-graph facts for one script.
///
/// Local variables get flow-sensitive reaching definitions within their
/// owning function. Reads of a variable from a nested function see every
/// definition of it anywhere in the script. Callees are resolved field-based:
/// a property read `o.f` may yield any function stored under the name `f` on
/// any object.
class CallGraph {
 public:
  explicit CallGraph(ScriptIR ir);

  const ScriptIR& ir() const noexcept { return ir_; }

  /// Definitions of `var` that may reach the point just before `at`. An
  /// instruction with `writes_all` counts as a definition of every variable.
  std::vector<InstrId> reaching_defs(InstrId at, VarId var) const;

  /// Every instruction that may define `var`, anywhere in the script.
  const std::vector<InstrId>& all_defs(VarId var) const;

  /// Functions a call instruction may invoke. Empty means unknown, which
  /// includes library and browser functions.
  const std::vector<FuncId>& callees(InstrId call) const;

  /// Call instructions that may invoke `fn`, sorted.
  const std::vector<InstrId>& callers(FuncId fn) const;

  /// Return instructions of `fn`.
  const std::vector<InstrId>& returns(FuncId fn) const;

  /// PropWrite and ObjectLit instructions that store a property `name`.
  const std::vector<InstrId>& property_stores(const std::string& name) const;

  /// True for `f.call(...)` and `f.apply(...)` calls resolved through `f`.
  bool invokes_receiver(InstrId call) const;

  /// Index into the call's argument list that feeds parameter 0 of a callee,
  /// or nullopt when arguments are passed as an array (`apply`).
  std::optional<std::size_t> first_argument(InstrId call) const;

  std::size_t edge_count() const noexcept;

 private:
  using DefState = std::map<VarId, std::vector<InstrId>>;

  void index_definitions();
  void compute_reaching(FuncId fn);
  void resolve_calls();
  void transfer(const Instr& in, DefState& state) const;
  bool tracked(VarId v) const;

  ScriptIR ir_;
  std::vector<std::vector<InstrId>> defs_by_var_;
  std::vector<InstrId> writes_all_;
  std::vector<std::vector<DefState>> block_in_;  // [function][block]
  std::vector<std::vector<FuncId>> callees_;     // by instruction
  std::vector<bool> invokes_receiver_;           // by instruction
  std::vector<std::vector<InstrId>> callers_;    // by function
  std::vector<std::vector<InstrId>> returns_;    // by function
  std::unordered_map<std::string, std::vector<InstrId>> stores_;
};

}  // namespace webreq

// SPDX-License-Identifier: Apache-2.0
#include "webreq/callgraph.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace webreq {

namespace {

// Pseudo-variable under which `writes_all` definitions flow.
constexpr VarId kAnyVar = kNoVar - 1;

const std::vector<InstrId> kNoInstrs;
const std::vector<FuncId> kNoFuncs;

bool merge_into(std::vector<InstrId>& dst, const std::vector<InstrId>& src) {
  if (src.empty()) return false;
  std::vector<InstrId> merged;
  merged.reserve(dst.size() + src.size());
  std::set_union(dst.begin(), dst.end(), src.begin(), src.end(), std::back_inserter(merged));
  if (merged.size() == dst.size()) return false;
  dst = std::move(merged);
  return true;
}

template <typename State>
bool merge_state(State& dst, const State& src) {
  bool changed = false;
  for (const auto& [v, defs] : src) changed |= merge_into(dst[v], defs);
  return changed;
}

}  // namespace

CallGraph::CallGraph(ScriptIR ir) : ir_(std::move(ir)) {
  index_definitions();
  block_in_.resize(ir_.functions.size());
  for (const auto& f : ir_.functions) compute_reaching(f.id);
  resolve_calls();
}

void CallGraph::index_definitions() {
  defs_by_var_.assign(ir_.vars.size(), {});
  returns_.assign(ir_.functions.size(), {});
  for (const Instr& in : ir_.instrs) {
    for (VarId v : defined_vars(in)) defs_by_var_[v].push_back(in.id);
    if (const auto* o = in.as<op::Opaque>(); o && o->writes_all) writes_all_.push_back(in.id);
    if (in.as<op::Return>()) returns_[in.fn].push_back(in.id);
    if (const auto* w = in.as<op::PropWrite>()) stores_[w->name].push_back(in.id);
    if (const auto* o = in.as<op::ObjectLit>()) {
      for (const auto& [key, value] : o->props) {
        auto& list = stores_[key];
        if (list.empty() || list.back() != in.id) list.push_back(in.id);
      }
    }
  }
  for (auto& defs : defs_by_var_) defs.erase(std::unique(defs.begin(), defs.end()), defs.end());
}

bool CallGraph::tracked(VarId v) const {
  // Single-assignment temporaries always see their one definition.
  const VarInfo& info = ir_.vars[v];
  return info.kind != VarKind::Temp || defs_by_var_[v].size() > 1;
}

void CallGraph::transfer(const Instr& in, DefState& state) const {
  for (VarId v : defined_vars(in)) {
    if (tracked(v)) state[v] = {in.id};
  }
  if (const auto* o = in.as<op::Opaque>(); o && o->writes_all) {
    merge_into(state[kAnyVar], {in.id});
  }
}

void CallGraph::compute_reaching(FuncId fn) {
  const IrFunction& f = ir_.functions[fn];
  auto& in_states = block_in_[fn];
  in_states.assign(f.blocks.size(), {});

  // Everything a block may define, for the exceptional edge to its handler.
  std::vector<DefState> gen_all(f.blocks.size());
  for (std::size_t b = 0; b < f.blocks.size(); ++b) {
    if (!f.blocks[b].handler) continue;
    for (InstrId id : f.blocks[b].instrs) {
      DefState single;
      transfer(ir_.instrs[id], single);
      merge_state(gen_all[b], single);
    }
  }

  std::deque<BlockId> work;
  std::vector<bool> queued(f.blocks.size(), true);
  for (std::size_t b = 0; b < f.blocks.size(); ++b) work.push_back(static_cast<BlockId>(b));
  while (!work.empty()) {
    const BlockId b = work.front();
    work.pop_front();
    queued[b] = false;
    const BasicBlock& bb = f.blocks[b];
    DefState state = in_states[b];
    for (InstrId id : bb.instrs) transfer(ir_.instrs[id], state);
    auto push = [&](BlockId s) {
      if (!queued[s]) {
        queued[s] = true;
        work.push_back(s);
      }
    };
    for (BlockId s : bb.succs) {
      if (merge_state(in_states[s], state)) push(s);
    }
    if (bb.handler) {
      const BlockId h = *bb.handler;
      bool changed = merge_state(in_states[h], in_states[b]);
      changed |= merge_state(in_states[h], gen_all[b]);
      if (changed) push(h);
    }
  }
}

std::vector<InstrId> CallGraph::reaching_defs(InstrId at, VarId var) const {
  const Instr& use = ir_.instrs.at(at);
  const VarInfo& info = ir_.vars.at(var);
  if (!tracked(var)) return defs_by_var_[var];

  std::vector<InstrId> result;
  const bool local = info.owner == use.fn;
  if (local) {
    const IrFunction& f = ir_.functions[use.fn];
    DefState state;
    const DefState& in = block_in_[use.fn][use.block];
    if (auto it = in.find(var); it != in.end()) state[var] = it->second;
    if (auto it = in.find(kAnyVar); it != in.end()) state[kAnyVar] = it->second;
    for (InstrId id : f.blocks[use.block].instrs) {
      if (id == at) break;
      const Instr& in_instr = ir_.instrs[id];
      for (VarId v : defined_vars(in_instr)) {
        if (v == var) state[var] = {id};
      }
      if (const auto* o = in_instr.as<op::Opaque>(); o && o->writes_all) {
        merge_into(state[kAnyVar], {id});
      }
    }
    result = state[var];
    merge_into(result, state[kAnyVar]);
    // Nested functions may assign the variable at any time.
    std::vector<InstrId> foreign;
    for (InstrId d : defs_by_var_[var]) {
      if (ir_.instrs[d].fn != use.fn) foreign.push_back(d);
    }
    for (InstrId d : writes_all_) {
      if (ir_.instrs[d].fn != use.fn) foreign.push_back(d);
    }
    std::sort(foreign.begin(), foreign.end());
    merge_into(result, foreign);
  } else {
    result = defs_by_var_[var];
    merge_into(result, writes_all_);
  }
  return result;
}

const std::vector<InstrId>& CallGraph::all_defs(VarId var) const { return defs_by_var_.at(var); }

bool CallGraph::invokes_receiver(InstrId call) const {
  return call < invokes_receiver_.size() && invokes_receiver_[call];
}

std::optional<std::size_t> CallGraph::first_argument(InstrId call) const {
  if (!invokes_receiver(call)) return 0;
  const auto* c = ir_.instrs.at(call).as<op::Call>();
  if (c->method == "apply") return std::nullopt;
  return 1;
}

void CallGraph::resolve_calls() {
  // Flow-insensitive propagation of function values to a fixpoint.
  std::vector<std::set<FuncId>> var_fns(ir_.vars.size());
  std::vector<std::set<FuncId>> ret_fns(ir_.functions.size());
  std::unordered_map<std::string, std::set<FuncId>> prop_fns;

  auto add_all = [](std::set<FuncId>& dst, const std::set<FuncId>& src) {
    const std::size_t before = dst.size();
    dst.insert(src.begin(), src.end());
    return dst.size() != before;
  };

  auto targets_of = [&](const op::Call& c) -> const std::set<FuncId>& {
    if ((c.method == "call" || c.method == "apply") && c.receiver != kNoVar &&
        var_fns[c.callee].empty()) {
      return var_fns[c.receiver];
    }
    return var_fns[c.callee];
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (const Instr& in : ir_.instrs) {
      std::visit(
          [&](const auto& o) {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, op::Closure>) {
              changed |= var_fns[in.target].insert(o.fn).second;
            } else if constexpr (std::is_same_v<T, op::Copy>) {
              changed |= add_all(var_fns[in.target], var_fns[o.src]);
            } else if constexpr (std::is_same_v<T, op::PropWrite>) {
              if (!var_fns[o.value].empty()) changed |= add_all(prop_fns[o.name], var_fns[o.value]);
            } else if constexpr (std::is_same_v<T, op::ObjectLit>) {
              for (const auto& [key, value] : o.props) {
                if (!var_fns[value].empty()) changed |= add_all(prop_fns[key], var_fns[value]);
              }
            } else if constexpr (std::is_same_v<T, op::PropRead>) {
              if (auto it = prop_fns.find(o.name); it != prop_fns.end()) {
                changed |= add_all(var_fns[in.target], it->second);
              }
            } else if constexpr (std::is_same_v<T, op::Return>) {
              if (o.value != kNoVar) changed |= add_all(ret_fns[in.fn], var_fns[o.value]);
            } else if constexpr (std::is_same_v<T, op::Call>) {
              const auto& targets = targets_of(o);
              const bool shifted = &targets != &var_fns[o.callee];
              const std::size_t offset = shifted ? 1 : 0;
              const bool positional = !(shifted && o.method == "apply");
              for (FuncId f : std::vector<FuncId>(targets.begin(), targets.end())) {
                const IrFunction& callee = ir_.functions[f];
                if (positional) {
                  for (std::size_t i = 0; i < callee.params.size(); ++i) {
                    if (i + offset < o.args.size()) {
                      changed |= add_all(var_fns[callee.params[i]], var_fns[o.args[i + offset]]);
                    }
                  }
                }
                if (in.target != kNoVar) changed |= add_all(var_fns[in.target], ret_fns[f]);
              }
            }
          },
          in.op);
    }
  }

  callees_.assign(ir_.instrs.size(), {});
  invokes_receiver_.assign(ir_.instrs.size(), false);
  callers_.assign(ir_.functions.size(), {});
  for (const Instr& in : ir_.instrs) {
    const auto* c = in.as<op::Call>();
    if (c == nullptr) continue;
    const auto& targets = targets_of(*c);
    invokes_receiver_[in.id] = &targets != &var_fns[c->callee];
    callees_[in.id].assign(targets.begin(), targets.end());
    for (FuncId f : targets) callers_[f].push_back(in.id);
  }
}

const std::vector<FuncId>& CallGraph::callees(InstrId call) const {
  return call < callees_.size() ? callees_[call] : kNoFuncs;
}

const std::vector<InstrId>& CallGraph::callers(FuncId fn) const {
  return fn < callers_.size() ? callers_[fn] : kNoInstrs;
}

const std::vector<InstrId>& CallGraph::returns(FuncId fn) const {
  return fn < returns_.size() ? returns_[fn] : kNoInstrs;
}

const std::vector<InstrId>& CallGraph::property_stores(const std::string& name) const {
  auto it = stores_.find(name);
  return it == stores_.end() ? kNoInstrs : it->second;
}

std::size_t CallGraph::edge_count() const noexcept {
  std::size_t n = 0;
  for (const auto& c : callees_) n += c.size();
  return n;
}

}  // namespace webreq

// SPDX-License-Identifier: Apache-2.0
#include "webreq/extract.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <map>
#include <regex>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "webreq/js/parser.hpp"

namespace webreq {

std::string_view callee_kind_name(CalleeKind kind) noexcept {
  switch (kind) {
    case CalleeKind::Ajax: return "ajax";
    case CalleeKind::Get: return "get";
    case CalleeKind::Post: return "post";
  }
  return "?";
}

namespace {

const std::set<std::string> kStandardMethods = {"GET",  "POST", "PUT",    "DELETE",
                                                "PATCH", "HEAD", "OPTIONS"};

bool is_jquery_name(const std::string& name) { return name == "$" || name == "jQuery"; }

// Abstract value of an IR variable.
struct Abs {
  enum class K : std::uint8_t { Str, Num, Bool, Null, Undef, Object, Array, Function, Unknown };
  K k = K::Undef;
  StringValue s;
  double n = 0.0;
  bool b = false;
  InstrId site = 0;
  FuncId fn = 0;
  std::string name;
  // Unknown values named after the construct that produced them take the
  // name of the variable they are first stored in.
  bool provisional = false;
  bool regex = false;  // Str holding a regular expression literal

  static Abs str(StringValue v) {
    Abs a;
    a.k = K::Str;
    a.s = std::move(v);
    return a;
  }
  static Abs num(double v) {
    Abs a;
    a.k = K::Num;
    a.n = v;
    return a;
  }
  static Abs unknown(std::string name, bool provisional) {
    Abs a;
    a.k = K::Unknown;
    a.name = std::move(name);
    a.provisional = provisional;
    return a;
  }

  auto key() const {
    return std::tie(k, s, b, site, fn, name, provisional, regex);
  }
  std::string num_key() const { return k == K::Num ? js::number_to_string(n) : std::string{}; }
  friend bool operator<(const Abs& x, const Abs& y) {
    if (x.key() != y.key()) return x.key() < y.key();
    return x.num_key() < y.num_key();
  }
  friend bool operator==(const Abs& x, const Abs& y) {
    return x.key() == y.key() && x.num_key() == y.num_key();
  }
};

struct Result {
  std::vector<Abs> values;
  bool overflow = false;
  // Lowest evaluation-stack depth this result depends on; INT_MAX if closed.
  int low = INT_MAX;
};

void normalize(std::vector<Abs>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::string js_substring(const std::string& s, double a, double b) {
  auto clamp = [&](double x) {
    if (std::isnan(x)) return 0.0;
    return std::min(std::max(std::trunc(x), 0.0), static_cast<double>(s.size()));
  };
  double start = clamp(a);
  double end = clamp(b);
  if (start > end) std::swap(start, end);
  return s.substr(static_cast<std::size_t>(start), static_cast<std::size_t>(end - start));
}

std::string expand_replacement(const std::string& repl, const std::string& matched) {
  std::string out;
  for (std::size_t i = 0; i < repl.size(); ++i) {
    if (repl[i] == '$' && i + 1 < repl.size()) {
      if (repl[i + 1] == '$') {
        out += '$';
        ++i;
        continue;
      }
      if (repl[i + 1] == '&') {
        out += matched;
        ++i;
        continue;
      }
    }
    out += repl[i];
  }
  return out;
}

std::string encode_uri_component(std::string_view text) {
  static constexpr std::string_view unreserved = "-_.!~*'()";
  static constexpr char hex[] = "0123456789ABCDEF";
  std::string out;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if ((std::isalnum(c) != 0 && c < 0x80) || unreserved.find(ch) != std::string_view::npos) {
      out += ch;
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 0xF];
    }
  }
  return out;
}

// JSON text for a payload; Sym parts stay symbolic.
void json_text(const DataValue& v, StringValue& out) {
  switch (v.kind()) {
    case DataValue::Kind::Obj: {
      out.append_lit("{");
      bool first = true;
      for (const auto& [k, f] : v.fields()) {
        if (!first) out.append_lit(",");
        first = false;
        out.append_lit(nlohmann::json(k).dump());
        out.append_lit(":");
        json_text(f, out);
      }
      out.append_lit("}");
      break;
    }
    case DataValue::Kind::Arr: {
      out.append_lit("[");
      for (std::size_t i = 0; i < v.items().size(); ++i) {
        if (i) out.append_lit(",");
        json_text(v.items()[i], out);
      }
      out.append_lit("]");
      break;
    }
    case DataValue::Kind::Str: {
      out.append_lit("\"");
      for (const Segment& s : v.str().segments()) {
        if (s.kind == Segment::Kind::Sym) {
          out.append_sym(s.text);
        } else {
          const std::string quoted = nlohmann::json(s.text).dump();
          out.append_lit(quoted.substr(1, quoted.size() - 2));
        }
      }
      out.append_lit("\"");
      break;
    }
    case DataValue::Kind::Sym:
      out.append_sym(v.sym_name());
      break;
    default:
      out.append_lit(v.to_json().dump());
      break;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Site location and slicing

std::vector<RequestSite> locate_request_sites(const CallGraph& graph) {
  const ScriptIR& ir = graph.ir();
  std::vector<RequestSite> sites;
  for (const Instr& in : ir.instrs) {
    const auto* call = in.as<op::Call>();
    if (call == nullptr || call->is_new || call->receiver == kNoVar) continue;
    const VarInfo& recv = ir.var(call->receiver);
    if (recv.kind == VarKind::Temp || !is_jquery_name(recv.name)) continue;
    RequestSite site;
    if (call->method == "ajax") {
      site.kind = CalleeKind::Ajax;
    } else if (call->method == "get") {
      site.kind = CalleeKind::Get;
    } else if (call->method == "post") {
      site.kind = CalleeKind::Post;
    } else {
      continue;
    }
    site.file = ir.path;
    site.line = in.pos.line;
    site.column = in.pos.column;
    site.receiver = recv.name;
    site.call = in.id;
    sites.push_back(std::move(site));
  }
  std::sort(sites.begin(), sites.end(), [](const RequestSite& a, const RequestSite& b) {
    return std::tie(a.line, a.column, a.call) < std::tie(b.line, b.column, b.call);
  });
  return sites;
}

std::vector<InstrId> backward_slice(const RequestSite& site, const CallGraph& graph) {
  const ScriptIR& ir = graph.ir();
  std::set<InstrId> slice;
  std::vector<InstrId> work;
  auto add_defs = [&](VarId v, InstrId at) {
    if (v == kNoVar) return;
    for (InstrId d : graph.reaching_defs(at, v)) {
      if (slice.insert(d).second) work.push_back(d);
    }
  };
  auto add = [&](InstrId d) {
    if (slice.insert(d).second) work.push_back(d);
  };

  const auto& call = std::get<op::Call>(ir.instr(site.call).op);
  for (VarId a : call.args) add_defs(a, site.call);

  while (!work.empty()) {
    const InstrId id = work.back();
    work.pop_back();
    const Instr& in = ir.instr(id);
    if (const auto* c = in.as<op::Call>()) {
      if (c->receiver != kNoVar) add_defs(c->receiver, id);
      for (VarId a : c->args) add_defs(a, id);
      for (FuncId f : graph.callees(id)) {
        for (InstrId r : graph.returns(f)) add(r);
      }
    } else if (const auto* p = in.as<op::Param>()) {
      for (InstrId caller : graph.callers(in.fn)) {
        const auto& cc = std::get<op::Call>(ir.instr(caller).op);
        const auto first = graph.first_argument(caller);
        if (!first) {
          for (VarId a : cc.args) add_defs(a, caller);
          continue;
        }
        const std::size_t idx = *first + p->index;
        if (idx < cc.args.size()) add_defs(cc.args[idx], caller);
      }
    } else if (const auto* r = in.as<op::PropRead>()) {
      add_defs(r->object, id);
      for (InstrId s : graph.property_stores(r->name)) add(s);
    } else {
      for (VarId v : operands(in)) add_defs(v, id);
    }
  }
  return {slice.begin(), slice.end()};
}

// ---------------------------------------------------------------------------
// Evaluation

struct Evaluator::Impl {
  const CallGraph& graph;
  const ScriptIR& ir;
  ExtractOptions opts;
  bool overflowed = false;

  std::unordered_map<InstrId, Result> memo;
  std::unordered_map<InstrId, int> on_stack;  // instruction -> depth
  std::unordered_set<InstrId> cycle_heads;
  int depth = 0;
  std::size_t steps = 0;
  static constexpr std::size_t kStepBudget = 2'000'000;

  std::unordered_map<std::string, int> name_counts;
  std::unordered_map<std::string, std::set<int>> hint_lines;
  std::unordered_set<InstrId> mutated_objects;

  Impl(const CallGraph& g, ExtractOptions o) : graph(g), ir(g.ir()), opts(o) {
    // Only variables that can end up named in a Sym compete for a name.
    for (VarId v = 0; v < ir.vars.size(); ++v) {
      if (ir.vars[v].kind != VarKind::Temp && may_be_symbolic(v, 0)) ++name_counts[ir.vars[v].name];
    }
    for (const Instr& in : ir.instrs) {
      if (const auto* op = in.as<op::Opaque>()) hint_lines[op->hint].insert(in.pos.line);
      if (const auto* c = in.as<op::Call>()) hint_lines[call_hint(*c)].insert(in.pos.line);
      if (const auto* r = in.as<op::PropRead>()) hint_lines[r->name].insert(in.pos.line);
    }
    find_mutated_objects();
  }

  // -- naming ---------------------------------------------------------------

  bool may_be_symbolic(VarId v, int depth) const {
    const VarInfo& info = ir.var(v);
    const auto& defs = graph.all_defs(v);
    if (defs.empty()) return info.kind == VarKind::Global;
    if (depth > 16) return true;
    for (InstrId d : defs) {
      const Instr& def = ir.instr(d);
      if (def.target != v) return true;
      if (def.as<op::Const>() || def.as<op::Closure>() || def.as<op::ObjectLit>() || def.as<op::ArrayLit>()) {
        continue;
      }
      if (const auto* c = def.as<op::Copy>()) {
        // Values read from a named variable already carry that name.
        if (ir.var(c->src).kind == VarKind::Temp && may_be_symbolic(c->src, depth + 1)) return true;
        continue;
      }
      if (def.as<op::Param>()) {
        const auto& callers = graph.callers(def.fn);
        if (callers.empty()) return true;
        for (InstrId call : callers) {
          if (!graph.first_argument(call) || std::get<op::Call>(ir.instr(call).op).has_spread) return true;
        }
        continue;
      }
      return true;
    }
    return false;
  }

  std::string var_sym(VarId v) const {
    const VarInfo& info = ir.var(v);
    if (info.kind == VarKind::Temp) return hint_sym("value", info.decl_line);
    auto it = name_counts.find(info.name);
    if (it != name_counts.end() && it->second > 1) {
      return info.name + "#" + std::to_string(info.decl_line);
    }
    return info.name;
  }

  std::string hint_sym(const std::string& hint, int line) const {
    auto it = hint_lines.find(hint);
    if (it == hint_lines.end() || it->second.size() <= 1) return hint;
    return hint + "#" + std::to_string(line);
  }

  std::string call_hint(const op::Call& c) const {
    if (!c.method.empty()) return c.method;
    const VarInfo& callee = ir.var(c.callee);
    if (callee.kind != VarKind::Temp) return callee.name;
    return "call";
  }

  // -- aliasing of object literals --------------------------------------------

  void find_mutated_objects() {
    // Flow-insensitive: which object literals may a variable hold?
    std::vector<std::set<InstrId>> holds(ir.vars.size());
    std::vector<std::set<InstrId>> returned(ir.functions.size());
    auto add_all = [](std::set<InstrId>& dst, const std::set<InstrId>& src) {
      const std::size_t before = dst.size();
      dst.insert(src.begin(), src.end());
      return dst.size() != before;
    };
    bool changed = true;
    while (changed) {
      changed = false;
      for (const Instr& in : ir.instrs) {
        if (in.as<op::ObjectLit>() || in.as<op::ArrayLit>()) {
          changed |= holds[in.target].insert(in.id).second;
        } else if (const auto* c = in.as<op::Copy>()) {
          changed |= add_all(holds[in.target], holds[c->src]);
        } else if (const auto* r = in.as<op::Return>(); r && r->value != kNoVar) {
          changed |= add_all(returned[in.fn], holds[r->value]);
        } else if (const auto* call = in.as<op::Call>()) {
          const auto first = graph.first_argument(in.id);
          for (FuncId f : graph.callees(in.id)) {
            const IrFunction& fn = ir.function(f);
            if (first) {
              for (std::size_t i = 0; i < fn.params.size() && *first + i < call->args.size(); ++i) {
                changed |= add_all(holds[fn.params[i]], holds[call->args[*first + i]]);
              }
            }
            if (in.target != kNoVar) changed |= add_all(holds[in.target], returned[f]);
          }
        }
      }
    }
    for (const Instr& in : ir.instrs) {
      if (const auto* w = in.as<op::PropWrite>()) {
        mutated_objects.insert(holds[w->object].begin(), holds[w->object].end());
      } else if (const auto* o = in.as<op::Opaque>()) {
        if ((o->hint == "index-write" || o->hint == "delete") && !o->reads.empty()) {
          mutated_objects.insert(holds[o->reads[0]].begin(), holds[o->reads[0]].end());
        }
      } else if (const auto* c = in.as<op::Call>()) {
        static const std::set<std::string> kMutators = {
            "push", "pop", "shift", "unshift", "splice", "sort", "reverse", "fill", "copyWithin"};
        if (c->receiver != kNoVar && kMutators.count(c->method) != 0) {
          mutated_objects.insert(holds[c->receiver].begin(), holds[c->receiver].end());
        }
        // $.extend(target, ...) and Object.assign(target, ...)
        if (c->receiver == kNoVar || c->args.empty()) continue;
        const VarInfo& recv = ir.var(c->receiver);
        const bool extend = c->method == "extend" && is_jquery_name(recv.name);
        const bool assign = c->method == "assign" && recv.name == "Object";
        if (extend || assign) {
          mutated_objects.insert(holds[c->args[0]].begin(), holds[c->args[0]].end());
        }
      }
    }
  }

  // -- core evaluation ------------------------------------------------------

  void cap(Result& r, const std::string& name) {
    normalize(r.values);
    if (r.values.size() > opts.max_values) {
      r.values = {Abs::unknown(name, false)};
      r.overflow = true;
    }
  }

  void merge(Result& into, const Result& from) {
    into.values.insert(into.values.end(), from.values.begin(), from.values.end());
    into.overflow |= from.overflow;
    into.low = std::min(into.low, from.low);
  }

  Result values_of(VarId var, InstrId at) {
    Result out;
    const VarInfo& info = ir.var(var);
    const auto defs = graph.reaching_defs(at, var);
    if (defs.empty()) {
      if (info.kind == VarKind::Global) {
        out.values.push_back(Abs::unknown(var_sym(var), false));
      } else {
        out.values.push_back(Abs{});  // declared but never assigned: undefined
      }
      return out;
    }
    for (InstrId d : defs) {
      const Instr& def = ir.instr(d);
      if (def.target != var) {
        // Opaque side effect: the variable's new content is unknown.
        out.values.push_back(Abs::unknown(var_sym(var), false));
        continue;
      }
      merge(out, eval_def(d));
    }
    if (info.kind != VarKind::Temp) {
      for (Abs& a : out.values) {
        if (a.k == Abs::K::Unknown && a.provisional) {
          a.name = var_sym(var);
          a.provisional = false;
        }
      }
    }
    cap(out, info.kind == VarKind::Temp ? hint_sym("value", info.decl_line) : var_sym(var));
    return out;
  }

  std::string cycle_name(const Instr& in) const {
    if (in.target != kNoVar && ir.var(in.target).kind != VarKind::Temp) return var_sym(in.target);
    return hint_sym("loop", in.pos.line);
  }

  Result eval_def(InstrId d) {
    if (auto it = memo.find(d); it != memo.end()) return it->second;
    const Instr& in = ir.instr(d);
    if (auto it = on_stack.find(d); it != on_stack.end()) {
      cycle_heads.insert(d);
      Result r;
      r.values.push_back(Abs::unknown(cycle_name(in), false));
      r.low = it->second;
      return r;
    }
    if (++steps > kStepBudget) {
      Result r;
      r.values.push_back(Abs::unknown(cycle_name(in), false));
      r.overflow = true;
      return r;
    }
    const int my_depth = depth++;
    on_stack.emplace(d, my_depth);
    Result r = eval_instr(in);
    on_stack.erase(d);
    --depth;
    if (cycle_heads.erase(d) != 0) {
      // Loop-carried value: collapse to a single symbol.
      r.values = {Abs::unknown(cycle_name(in), false)};
    }
    if (r.low >= my_depth) {
      r.low = INT_MAX;
      memo.emplace(d, r);
    }
    return r;
  }

  Result eval_instr(const Instr& in) {
    Result r;
    std::visit(
        [&](const auto& o) {
          using T = std::decay_t<decltype(o)>;
          if constexpr (std::is_same_v<T, op::Copy>) {
            r = values_of(o.src, in.id);
          } else if constexpr (std::is_same_v<T, op::Const>) {
            r.values.push_back(from_const(o.value));
          } else if constexpr (std::is_same_v<T, op::Template>) {
            r = eval_template(in, o);
          } else if constexpr (std::is_same_v<T, op::Concat>) {
            r = eval_concat(in, o);
          } else if constexpr (std::is_same_v<T, op::Call>) {
            r = eval_call(in, o);
          } else if constexpr (std::is_same_v<T, op::PropRead>) {
            r = eval_prop_read(in, o);
          } else if constexpr (std::is_same_v<T, op::ObjectLit>) {
            Abs a;
            a.k = Abs::K::Object;
            a.site = in.id;
            r.values.push_back(a);
          } else if constexpr (std::is_same_v<T, op::ArrayLit>) {
            Abs a;
            a.k = Abs::K::Array;
            a.site = in.id;
            r.values.push_back(a);
          } else if constexpr (std::is_same_v<T, op::Closure>) {
            Abs a;
            a.k = Abs::K::Function;
            a.fn = o.fn;
            r.values.push_back(a);
          } else if constexpr (std::is_same_v<T, op::Param>) {
            r = eval_param(in, o);
          } else if constexpr (std::is_same_v<T, op::Opaque>) {
            if (o.hint == "index" && o.reads.size() == 2) {
              r = eval_index(in, o);
              return;
            }
            r.values.push_back(Abs::unknown(hint_sym(o.hint, in.pos.line), true));
          } else {
            r.values.push_back(Abs{});
          }
        },
        in.op);
    return r;
  }

  static Abs from_const(const ConstValue& c) {
    Abs a;
    switch (c.kind) {
      case ConstValue::Kind::String:
        return Abs::str(StringValue::lit(c.text));
      case ConstValue::Kind::Regex:
        a = Abs::str(StringValue::lit(c.text));
        a.regex = true;
        return a;
      case ConstValue::Kind::Number:
        return Abs::num(c.number);
      case ConstValue::Kind::Bool:
        a.k = Abs::K::Bool;
        a.b = c.boolean;
        return a;
      case ConstValue::Kind::Null:
        a.k = Abs::K::Null;
        return a;
      case ConstValue::Kind::Undefined:
        return a;
    }
    return a;
  }

  static StringValue to_string(const Abs& a) {
    switch (a.k) {
      case Abs::K::Str: return a.s;
      case Abs::K::Num: return StringValue::lit(js::number_to_string(a.n));
      case Abs::K::Bool: return StringValue::lit(a.b ? "true" : "false");
      case Abs::K::Null: return StringValue::lit("null");
      case Abs::K::Undef: return StringValue::lit("undefined");
      case Abs::K::Object: return StringValue::lit("[object Object]");
      case Abs::K::Array: return StringValue::sym("array");
      case Abs::K::Function: return StringValue::sym("function");
      case Abs::K::Unknown: return StringValue::sym(a.name);
    }
    return {};
  }

  static bool string_like(const Abs& a) {
    return a.k == Abs::K::Str || a.k == Abs::K::Object || a.k == Abs::K::Array ||
           a.k == Abs::K::Function || a.k == Abs::K::Unknown;
  }

  static double to_number(const Abs& a) {
    switch (a.k) {
      case Abs::K::Num: return a.n;
      case Abs::K::Bool: return a.b ? 1.0 : 0.0;
      case Abs::K::Null: return 0.0;
      default: return std::numeric_limits<double>::quiet_NaN();
    }
  }

  static Abs js_plus(const Abs& x, const Abs& y) {
    if (!string_like(x) && !string_like(y)) return Abs::num(to_number(x) + to_number(y));
    return Abs::str(concat(to_string(x), to_string(y)));
  }

  // Cartesian product over operand value sets, bounded by the cap.
  template <typename F>
  Result product(const std::vector<Result>& inputs, const std::string& overflow_name, F&& combine) {
    Result r;
    std::size_t total = 1;
    for (const Result& in : inputs) {
      r.overflow |= in.overflow;
      r.low = std::min(r.low, in.low);
      total *= std::max<std::size_t>(in.values.size(), 1);
      if (total > opts.max_values) {
        r.values = {Abs::unknown(overflow_name, false)};
        r.overflow = true;
        return r;
      }
    }
    std::vector<std::size_t> idx(inputs.size(), 0);
    std::vector<const Abs*> pick(inputs.size());
    for (const Result& in : inputs) {
      if (in.values.empty()) return r;
    }
    while (true) {
      for (std::size_t i = 0; i < inputs.size(); ++i) pick[i] = &inputs[i].values[idx[i]];
      r.values.push_back(combine(pick));
      std::size_t i = 0;
      while (i < inputs.size() && ++idx[i] == inputs[i].values.size()) idx[i++] = 0;
      if (i == inputs.size()) break;
    }
    cap(r, overflow_name);
    return r;
  }

  Result eval_template(const Instr& in, const op::Template& t) {
    std::vector<Result> inputs;
    std::vector<int> slot(t.parts.size(), -1);
    for (std::size_t i = 0; i < t.parts.size(); ++i) {
      if (const auto* v = std::get_if<VarId>(&t.parts[i])) {
        slot[i] = static_cast<int>(inputs.size());
        inputs.push_back(values_of(*v, in.id));
      }
    }
    return product(inputs, hint_sym("value", in.pos.line), [&](const std::vector<const Abs*>& pick) {
      StringValue s;
      for (std::size_t i = 0; i < t.parts.size(); ++i) {
        if (slot[i] < 0) {
          s.append_lit(std::get<std::string>(t.parts[i]));
        } else {
          s.append(to_string(*pick[slot[i]]));
        }
      }
      return Abs::str(std::move(s));
    });
  }

  Result eval_concat(const Instr& in, const op::Concat& c) {
    std::vector<Result> inputs{values_of(c.lhs, in.id), values_of(c.rhs, in.id)};
    return product(inputs, overflow_name(in), [](const std::vector<const Abs*>& pick) {
      return js_plus(*pick[0], *pick[1]);
    });
  }

  std::string overflow_name(const Instr& in) const {
    if (in.target != kNoVar && ir.var(in.target).kind != VarKind::Temp) return var_sym(in.target);
    return hint_sym("value", in.pos.line);
  }

  Result eval_param(const Instr& in, const op::Param& p) {
    Result r;
    const auto& callers = graph.callers(in.fn);
    if (callers.empty()) {
      // Entry point: the argument comes from outside the analyzed code.
      r.values.push_back(Abs::unknown(var_sym(in.target), false));
      return r;
    }
    for (InstrId c : callers) {
      const auto& call = std::get<op::Call>(ir.instr(c).op);
      const auto first = graph.first_argument(c);
      if (!first || call.has_spread) {
        r.values.push_back(Abs::unknown(var_sym(in.target), false));
        continue;
      }
      const std::size_t idx = *first + p.index;
      if (idx < call.args.size()) {
        merge(r, values_of(call.args[idx], c));
      } else {
        r.values.push_back(Abs{});
      }
    }
    return r;
  }

  static bool literal_str(const Abs& a) { return a.k == Abs::K::Str && a.s.is_literal(); }

  Result eval_call(const Instr& in, const op::Call& c) {
    const auto& callees = graph.callees(in.id);
    if (!callees.empty()) {
      Result r;
      for (FuncId f : callees) {
        const auto& rets = graph.returns(f);
        if (rets.empty()) r.values.push_back(Abs{});
        for (InstrId ret : rets) {
          const auto& rop = std::get<op::Return>(ir.instr(ret).op);
          if (rop.value == kNoVar) {
            r.values.push_back(Abs{});
          } else {
            merge(r, values_of(rop.value, ret));
          }
        }
      }
      cap(r, overflow_name(in));
      return r;
    }

    const std::string fresh = hint_sym(call_hint(c), in.pos.line);
    auto unknown_result = [&]() {
      Result r;
      r.values.push_back(Abs::unknown(fresh, true));
      return r;
    };

    if (c.receiver == kNoVar && !c.is_new) {
      const VarInfo& callee = ir.var(c.callee);
      const bool builtin = callee.kind == VarKind::Global && graph.all_defs(c.callee).empty();
      if (builtin && !c.args.empty() &&
          (callee.name == "encodeURI" || callee.name == "encodeURIComponent" ||
           callee.name == "String")) {
        Result arg = values_of(c.args[0], in.id);
        Result r;
        r.overflow = arg.overflow;
        r.low = arg.low;
        for (const Abs& a : arg.values) {
          StringValue s = to_string(a);
          if (callee.name == "encodeURI") {
            s = encode_uri(s);
          } else if (callee.name == "encodeURIComponent") {
            StringValue enc;
            for (const Segment& seg : s.segments()) {
              if (seg.kind == Segment::Kind::Lit) {
                enc.append_lit(encode_uri_component(seg.text));
              } else {
                enc.append_sym(seg.text);
              }
            }
            s = std::move(enc);
          }
          r.values.push_back(Abs::str(std::move(s)));
        }
        cap(r, fresh);
        return r;
      }
      return unknown_result();
    }

    if (c.receiver != kNoVar && c.method == "stringify" && !c.args.empty()) {
      const VarInfo& recv = ir.var(c.receiver);
      if (recv.kind == VarKind::Global && recv.name == "JSON" && graph.all_defs(c.receiver).empty()) {
        Result arg = values_of(c.args[0], in.id);
        Result r;
        r.overflow = arg.overflow;
        r.low = arg.low;
        for (const Abs& a : arg.values) {
          for (const DataValue& d : to_data(a, in.id, r)) {
            StringValue s;
            json_text(d, s);
            r.values.push_back(Abs::str(std::move(s)));
          }
        }
        cap(r, fresh);
        return r;
      }
    }

    if (c.receiver != kNoVar &&
        (c.method == "substring" || c.method == "replace" || c.method == "indexOf")) {
      std::vector<Result> inputs{values_of(c.receiver, in.id)};
      for (VarId a : c.args) inputs.push_back(values_of(a, in.id));
      return product(inputs, fresh, [&](const std::vector<const Abs*>& pick) {
        return string_op(c.method, pick, fresh);
      });
    }
    return unknown_result();
  }

  // Exact evaluation of substring/replace/indexOf on fully literal operands.
  static Abs string_op(const std::string& method, const std::vector<const Abs*>& pick,
                       const std::string& fresh) {
    const Abs& recv = *pick[0];
    if (!literal_str(recv)) return Abs::unknown(fresh, true);
    for (std::size_t i = 1; i < pick.size(); ++i) {
      const Abs& a = *pick[i];
      if (!(literal_str(a) || a.k == Abs::K::Num || a.k == Abs::K::Undef)) {
        return Abs::unknown(fresh, true);
      }
    }
    const std::string s = recv.s.literal_text();
    auto num_arg = [&](std::size_t i, double dflt) {
      if (i >= pick.size() || pick[i]->k == Abs::K::Undef) return dflt;
      return pick[i]->k == Abs::K::Num ? pick[i]->n : to_number_str(pick[i]->s.literal_text());
    };
    if (method == "substring") {
      return Abs::str(StringValue::lit(js_substring(s, num_arg(1, 0), num_arg(2, static_cast<double>(s.size())))));
    }
    if (method == "indexOf") {
      if (pick.size() < 2) return Abs::num(-1);
      const std::string needle = to_string(*pick[1]).literal_text();
      double from = num_arg(2, 0);
      from = std::isnan(from) ? 0 : std::min(std::max(std::trunc(from), 0.0), static_cast<double>(s.size()));
      const auto pos = s.find(needle, static_cast<std::size_t>(from));
      return Abs::num(pos == std::string::npos ? -1.0 : static_cast<double>(pos));
    }
    // replace
    if (pick.size() < 3) return Abs::unknown(fresh, true);
    const std::string pattern = to_string(*pick[1]).literal_text();
    const std::string repl = to_string(*pick[2]).literal_text();
    if (pick[1]->regex && pattern.size() >= 2 && pattern.rfind('/') > 0) {
      // Regex literal operand.
      const auto close = pattern.rfind('/');
      const std::string body = pattern.substr(1, close - 1);
      const std::string flags = pattern.substr(close + 1);
      try {
        auto syntax = std::regex::ECMAScript;
        if (flags.find('i') != std::string::npos) syntax |= std::regex::icase;
        const std::regex re(body, syntax);
        const auto mode = flags.find('g') != std::string::npos
                              ? std::regex_constants::format_default
                              : std::regex_constants::format_first_only;
        return Abs::str(StringValue::lit(std::regex_replace(s, re, repl, mode)));
      } catch (const std::regex_error&) {
        return Abs::unknown(fresh, true);
      }
    }
    const auto pos = s.find(pattern);
    if (pos == std::string::npos) return Abs::str(StringValue::lit(s));
    std::string out = s.substr(0, pos) + expand_replacement(repl, pattern) + s.substr(pos + pattern.size());
    return Abs::str(StringValue::lit(out));
  }

  static double to_number_str(const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      return used == s.size() ? v : std::numeric_limits<double>::quiet_NaN();
    } catch (...) {
      return s.empty() ? 0.0 : std::numeric_limits<double>::quiet_NaN();
    }
  }

  // Values stored under `name` by any PropWrite (field-based).
  void field_writes(const std::string& name, Result& r, bool include_literals) {
    for (InstrId s : graph.property_stores(name)) {
      const Instr& store = ir.instr(s);
      if (const auto* w = store.as<op::PropWrite>()) {
        merge(r, values_of(w->value, s));
      } else if (include_literals) {
        const auto& lit = std::get<op::ObjectLit>(store.op);
        for (const auto& [k, v] : lit.props) {
          if (k == name) merge(r, values_of(v, s));
        }
      }
    }
  }

  // Values of property `name` on object value `obj`. Returns false when the
  // object is not a literal we can read structurally.
  bool literal_property(const Abs& obj, const std::string& name, Result& r, bool& found) {
    found = false;
    if (obj.k == Abs::K::Object) {
      const Instr& site = ir.instr(obj.site);
      const auto& lit = std::get<op::ObjectLit>(site.op);
      for (const auto& [k, v] : lit.props) {
        if (k == name) {
          // Later duplicates win, so reset on each match.
          Result one = values_of(v, site.id);
          r.values.clear();
          merge(r, one);
          found = true;
        }
      }
      return true;
    }
    if (obj.k == Abs::K::Array) {
      const Instr& site = ir.instr(obj.site);
      const auto& arr = std::get<op::ArrayLit>(site.op);
      if (name == "length" && !arr.dynamic) {
        r.values.push_back(Abs::num(static_cast<double>(arr.elems.size())));
        found = true;
        return true;
      }
      if (!arr.dynamic && !name.empty() && std::all_of(name.begin(), name.end(), ::isdigit)) {
        const std::size_t i = std::stoul(name);
        if (i < arr.elems.size()) {
          merge(r, values_of(arr.elems[i], site.id));
          found = true;
        }
        return true;
      }
    }
    if (literal_str(obj) && name == "length") {
      r.values.push_back(Abs::num(static_cast<double>(obj.s.literal_text().size())));
      found = true;
      return true;
    }
    return false;
  }

  Result eval_prop_read(const Instr& in, const op::PropRead& p) {
    Result r = read_property(values_of(p.object, in.id), p.name, in);
    cap(r, overflow_name(in));
    return r;
  }

  // `o[k]`: exact when the key is known, otherwise the union of all elements
  // of an unmodified array literal.
  Result eval_index(const Instr& in, const op::Opaque& o) {
    const Result objects = values_of(o.reads[0], in.id);
    const Result keys = values_of(o.reads[1], in.id);
    Result r;
    r.overflow = keys.overflow;
    r.low = keys.low;
    const std::string fresh = hint_sym(o.hint, in.pos.line);
    for (const Abs& key : keys.values) {
      if (key.k == Abs::K::Num || literal_str(key)) {
        const std::string name = key.k == Abs::K::Num ? js::number_to_string(key.n) : key.s.literal_text();
        merge(r, read_property(objects, name, in));
        continue;
      }
      r.overflow |= objects.overflow;
      r.low = std::min(r.low, objects.low);
      for (const Abs& obj : objects.values) {
        const bool plain_array = obj.k == Abs::K::Array && mutated_objects.count(obj.site) == 0 &&
                                 !std::get<op::ArrayLit>(ir.instr(obj.site).op).dynamic;
        if (!plain_array) {
          r.values.push_back(Abs::unknown(fresh, true));
          continue;
        }
        const Instr& site = ir.instr(obj.site);
        for (VarId e : std::get<op::ArrayLit>(site.op).elems) merge(r, values_of(e, site.id));
      }
    }
    cap(r, overflow_name(in));
    return r;
  }

  Result read_property(const Result& objects, const std::string& name, const Instr& in) {
    Result r;
    r.overflow = objects.overflow;
    r.low = objects.low;
    bool need_field_based = false;
    bool any_written = false;
    for (const Abs& obj : objects.values) {
      Result part;
      bool found = false;
      if (literal_property(obj, name, part, found)) {
        merge(r, part);
        const bool mutated = (obj.k == Abs::K::Object || obj.k == Abs::K::Array) &&
                             mutated_objects.count(obj.site) != 0;
        if (!found) {
          const bool dynamic = obj.k == Abs::K::Object &&
                               std::get<op::ObjectLit>(ir.instr(obj.site).op).dynamic;
          if (dynamic || (mutated && obj.k == Abs::K::Array)) {
            r.values.push_back(Abs::unknown(hint_sym(name, in.pos.line), true));
          } else if (!mutated) {
            r.values.push_back(Abs{});
          }
        }
        if (mutated) any_written = true;
      } else {
        need_field_based = true;
      }
    }
    if (any_written) field_writes(name, r, false);
    if (need_field_based) {
      Result stored;
      field_writes(name, stored, true);
      if (stored.values.empty()) {
        r.values.push_back(Abs::unknown(hint_sym(name, in.pos.line), true));
      } else {
        merge(r, stored);
      }
    }
    return r;
  }

  // -- payload conversion ---------------------------------------------------

  std::vector<DataValue> to_data(const Abs& a, InstrId at, Result& acc, int depth_left = 8) {
    (void)at;
    switch (a.k) {
      case Abs::K::Str: return {DataValue::string(a.s)};
      case Abs::K::Num: return {DataValue::number(a.n)};
      case Abs::K::Bool: return {DataValue::boolean(a.b)};
      case Abs::K::Null:
      case Abs::K::Undef: return {DataValue::null()};
      case Abs::K::Unknown: return {DataValue::symbol(a.name)};
      case Abs::K::Function: return {DataValue::symbol("function")};
      case Abs::K::Object:
      case Abs::K::Array:
        break;
    }
    const Instr& site = ir.instr(a.site);
    const std::string sym_name = site_sym(site);
    if (depth_left == 0 || mutated_objects.count(a.site) != 0) return {DataValue::symbol(sym_name)};

    std::vector<std::vector<DataValue>> options;
    std::vector<std::string> keys;
    if (a.k == Abs::K::Object) {
      const auto& lit = std::get<op::ObjectLit>(site.op);
      if (lit.dynamic) return {DataValue::symbol(sym_name)};
      for (const auto& [k, v] : lit.props) {
        Result vals = values_of(v, site.id);
        merge_flags(acc, vals);
        std::vector<DataValue> alts;
        for (const Abs& x : vals.values) {
          auto sub = to_data(x, site.id, acc, depth_left - 1);
          alts.insert(alts.end(), sub.begin(), sub.end());
        }
        dedup(alts);
        keys.push_back(k);
        options.push_back(std::move(alts));
      }
    } else {
      const auto& arr = std::get<op::ArrayLit>(site.op);
      if (arr.dynamic) return {DataValue::symbol(sym_name)};
      for (VarId v : arr.elems) {
        Result vals = values_of(v, site.id);
        merge_flags(acc, vals);
        std::vector<DataValue> alts;
        for (const Abs& x : vals.values) {
          auto sub = to_data(x, site.id, acc, depth_left - 1);
          alts.insert(alts.end(), sub.begin(), sub.end());
        }
        dedup(alts);
        options.push_back(std::move(alts));
      }
    }
    std::size_t total = 1;
    for (const auto& o : options) {
      total *= std::max<std::size_t>(o.size(), 1);
      if (total > opts.max_values) {
        acc.overflow = true;
        return {DataValue::symbol(sym_name)};
      }
    }
    std::vector<DataValue> out;
    std::vector<std::size_t> idx(options.size(), 0);
    while (true) {
      if (a.k == Abs::K::Object) {
        std::vector<std::pair<std::string, DataValue>> fields;
        for (std::size_t i = 0; i < options.size(); ++i) {
          fields.emplace_back(keys[i], options[i].empty() ? DataValue::null() : options[i][idx[i]]);
        }
        out.push_back(DataValue::object(std::move(fields)));
      } else {
        std::vector<DataValue> items;
        for (std::size_t i = 0; i < options.size(); ++i) {
          items.push_back(options[i].empty() ? DataValue::null() : options[i][idx[i]]);
        }
        out.push_back(DataValue::array(std::move(items)));
      }
      std::size_t i = 0;
      while (i < options.size() && ++idx[i] >= std::max<std::size_t>(options[i].size(), 1)) idx[i++] = 0;
      if (i == options.size()) break;
    }
    return out;
  }

  static void merge_flags(Result& acc, const Result& r) { acc.overflow |= r.overflow; }

  static void dedup(std::vector<DataValue>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  std::string site_sym(const Instr& site) const {
    return hint_sym(site.as<op::ObjectLit>() ? "object" : "array", site.pos.line);
  }

  // -- descriptors ----------------------------------------------------------

  struct Settings {
    bool url_from_args = false;
  };

  // Reads one settings key from every candidate settings value.
  Result settings_key(const Abs& settings, const std::string& key, bool& present, bool& unknown) {
    Result r;
    present = false;
    unknown = false;
    if (settings.k == Abs::K::Object) {
      bool found = false;
      literal_property(settings, key, r, found);
      const auto& lit = std::get<op::ObjectLit>(ir.instr(settings.site).op);
      if (mutated_objects.count(settings.site) != 0) {
        Result written;
        field_writes(key, written, false);
        if (!written.values.empty()) found = true;
        merge(r, written);
      }
      present = found;
      unknown = !found && lit.dynamic;
      return r;
    }
    unknown = true;
    return r;
  }

  std::string settings_sym(const Abs& settings, const std::string& fallback) const {
    if (settings.k == Abs::K::Unknown) return settings.name;
    return fallback;
  }

  RequestDescriptor describe(const RequestSite& site) {
    RequestDescriptor d;
    d.site = site;
    const Instr& call_instr = ir.instr(site.call);
    const auto& call = std::get<op::Call>(call_instr.op);
    bool overflow = false;

    std::vector<StringValue> urls;
    std::set<std::string> methods;
    std::vector<DataValue> data;

    auto add_urls = [&](const Result& r) {
      overflow |= r.overflow;
      for (const Abs& a : r.values) urls.push_back(to_string(a));
    };
    auto add_methods = [&](const Result& r, const std::string& sym) {
      overflow |= r.overflow;
      for (const Abs& a : r.values) {
        const StringValue s = to_string(a);
        if (s.is_literal() && a.k == Abs::K::Str) {
          std::string m = s.literal_text();
          std::transform(m.begin(), m.end(), m.begin(), [](unsigned char ch) { return std::toupper(ch); });
          if (kStandardMethods.count(m) != 0) {
            methods.insert(m);
            continue;
          }
        }
        if (a.k == Abs::K::Unknown) {
          methods.insert("{" + a.name + "}");
        } else if (a.k != Abs::K::Undef && a.k != Abs::K::Null) {
          // Not a recognizable method token: keep it as an opaque marker.
          methods.insert("{" + sym + "}");
        }
      }
    };
    auto add_data = [&](const Result& r, InstrId at) {
      Result acc;
      acc.overflow = r.overflow;
      for (const Abs& a : r.values) {
        if (a.k == Abs::K::Function) continue;
        auto vals = to_data(a, at, acc);
        data.insert(data.end(), vals.begin(), vals.end());
      }
      overflow |= acc.overflow;
    };

    auto apply_settings = [&](const Abs& s, bool url_given) {
      bool present = false;
      bool unknown = false;
      const std::string sym = settings_sym(s, "settings");
      if (!url_given) {
        Result u = settings_key(s, "url", present, unknown);
        if (present) {
          add_urls(u);
        } else {
          urls.push_back(StringValue::sym(unknown ? sym : "url"));
        }
      }
      for (const char* key : {"type", "method"}) {
        Result m = settings_key(s, key, present, unknown);
        if (present) add_methods(m, key);
        if (unknown && std::string(key) == "type") methods.insert("{" + sym + "}");
      }
      Result dv = settings_key(s, "data", present, unknown);
      if (present) {
        add_data(dv, site.call);
      } else if (unknown) {
        data.push_back(DataValue::symbol(sym));
      }
    };

    const std::size_t argc = call.args.size();
    if (site.kind == CalleeKind::Ajax) {
      if (argc >= 2) {
        add_urls(values_of(call.args[0], site.call));
        Result settings = values_of(call.args[1], site.call);
        overflow |= settings.overflow;
        for (const Abs& s : settings.values) apply_settings(s, true);
      } else if (argc == 1) {
        Result first = values_of(call.args[0], site.call);
        overflow |= first.overflow;
        for (const Abs& v : first.values) {
          if (v.k == Abs::K::Object || (v.k == Abs::K::Unknown && !v.provisional && false)) {
            apply_settings(v, false);
          } else if (v.k == Abs::K::Unknown) {
            // Could be a URL string or a settings object.
            urls.push_back(StringValue::sym(v.name));
            methods.insert("{" + v.name + "}");
            data.push_back(DataValue::symbol(v.name));
          } else {
            urls.push_back(to_string(v));
          }
        }
      } else {
        urls.push_back(StringValue::sym("url"));
      }
    } else {
      const std::string implied = site.kind == CalleeKind::Get ? "GET" : "POST";
      if (argc == 0) urls.push_back(StringValue::sym("url"));
      if (argc >= 1) {
        Result first = values_of(call.args[0], site.call);
        overflow |= first.overflow;
        for (const Abs& v : first.values) {
          if (v.k == Abs::K::Object) {
            const std::size_t before = methods.size();
            apply_settings(v, false);
            if (methods.size() == before) methods.insert(implied);
          } else {
            urls.push_back(to_string(v));
            methods.insert(implied);
          }
        }
      }
      if (argc >= 2) add_data(values_of(call.args[1], site.call), site.call);
    }

    std::sort(urls.begin(), urls.end());
    urls.erase(std::unique(urls.begin(), urls.end()), urls.end());
    if (urls.size() > opts.max_values) {
      urls = {StringValue::sym("url")};
      overflow = true;
    }
    dedup(data);
    if (data.size() > opts.max_values) {
      data = {DataValue::symbol("data")};
      overflow = true;
    }
    d.urls = std::move(urls);
    d.methods.assign(methods.begin(), methods.end());
    d.data = std::move(data);
    d.unresolved = overflow;
    for (const StringValue& u : d.urls) d.unresolved |= u.is_fully_symbolic();
    if (overflow) overflowed = true;
    return d;
  }
};

Evaluator::Evaluator(const CallGraph& graph, ExtractOptions options)
    : impl_(std::make_unique<Impl>(graph, options)) {}

Evaluator::~Evaluator() = default;

std::vector<StringValue> Evaluator::eval_string(VarId var, InstrId at) {
  const Result r = impl_->values_of(var, at);
  if (r.overflow) impl_->overflowed = true;
  std::vector<StringValue> out;
  for (const Abs& a : r.values) out.push_back(Impl::to_string(a));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<DataValue> Evaluator::eval_data(VarId var, InstrId at) {
  Result r = impl_->values_of(var, at);
  Result acc;
  std::vector<DataValue> out;
  for (const Abs& a : r.values) {
    auto vals = impl_->to_data(a, at, acc);
    out.insert(out.end(), vals.begin(), vals.end());
  }
  if (r.overflow || acc.overflow) impl_->overflowed = true;
  Impl::dedup(out);
  return out;
}

RequestDescriptor Evaluator::describe(const RequestSite& site) { return impl_->describe(site); }

bool Evaluator::overflowed() const noexcept { return impl_->overflowed; }

void Evaluator::reset_overflow() noexcept { impl_->overflowed = false; }

FileExtraction extract(const SourceFile& file, const ExtractOptions& options) {
  const js::Ast ast = js::parse_source(file);
  CallGraph graph(lower(ast, file.path().generic_string()));
  FileExtraction out;
  const auto sites = locate_request_sites(graph);
  if (sites.empty()) return out;
  Evaluator eval(graph, options);
  for (const RequestSite& site : sites) out.descriptors.push_back(eval.describe(site));
  return out;
}

}  // namespace webreq

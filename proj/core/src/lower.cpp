// SPDX-License-Identifier: Apache-2.0
#include <memory>
#include <sstream>
#include <unordered_map>

#include "webreq/ir.hpp"

namespace webreq {

using js::Node;
using js::NodeKind;

namespace {

struct Scope {
  Scope* parent = nullptr;
  bool function_scope = false;
  std::unordered_map<std::string, VarId> names;
};

struct JumpTarget {
  std::vector<std::string> labels;
  BlockId break_to = 0;
  std::optional<BlockId> continue_to;  // loops only
  bool accepts_unlabeled = false;      // loops and switch
};

// Per-function lowering state, saved and restored around nested functions.
struct FnState {
  FuncId fn = 0;
  BlockId block = 0;
  std::optional<BlockId> handler;
  Scope* scope = nullptr;
  std::vector<JumpTarget> targets;
  std::vector<std::string> pending_labels;
};

void collect_binding_names(const Node& pattern, std::vector<const Node*>& out) {
  switch (pattern.kind) {
    case NodeKind::Identifier:
      out.push_back(&pattern);
      break;
    case NodeKind::Assign:
    case NodeKind::Spread:
      collect_binding_names(pattern.kid(0), out);
      break;
    case NodeKind::ArrayLit:
      for (const auto& k : pattern.kids) {
        if (!k->empty()) collect_binding_names(*k, out);
      }
      break;
    case NodeKind::ObjectLit:
      for (const auto& p : pattern.kids) collect_binding_names(p->kid(1), out);
      break;
    default:
      break;
  }
}

// Collects `var` bindings and function declarations hoisted to the enclosing
// function scope. Does not descend into nested functions.
void collect_hoisted(const Node& stmt, std::vector<const Node*>& out, bool nested) {
  switch (stmt.kind) {
    case NodeKind::VarDecl:
      if (stmt.text == "var") {
        for (const auto& d : stmt.kids) collect_binding_names(d->kid(0), out);
      }
      break;
    case NodeKind::FunctionDecl:
      // Top-level declarations are handled by the statement-list prologue.
      if (nested && !stmt.text.empty()) out.push_back(&stmt);
      break;
    case NodeKind::Block:
      for (const auto& k : stmt.kids) collect_hoisted(*k, out, true);
      break;
    case NodeKind::If:
      collect_hoisted(stmt.kid(1), out, true);
      collect_hoisted(stmt.kid(2), out, true);
      break;
    case NodeKind::For:
      collect_hoisted(stmt.kid(0), out, true);
      collect_hoisted(stmt.kid(3), out, true);
      break;
    case NodeKind::ForIn:
      collect_hoisted(stmt.kid(0), out, true);
      collect_hoisted(stmt.kid(2), out, true);
      break;
    case NodeKind::While:
    case NodeKind::With:
      collect_hoisted(stmt.kid(1), out, true);
      break;
    case NodeKind::DoWhile:
    case NodeKind::Labeled:
      collect_hoisted(stmt.kid(0), out, true);
      break;
    case NodeKind::Try:
      collect_hoisted(stmt.kid(0), out, true);
      if (!stmt.kid(1).empty()) collect_hoisted(stmt.kid(1).kid(1), out, true);
      collect_hoisted(stmt.kid(2), out, true);
      break;
    case NodeKind::Switch:
      for (std::size_t i = 1; i < stmt.kids.size(); ++i) {
        const Node& c = stmt.kid(i);
        for (std::size_t j = 1; j < c.kids.size(); ++j) collect_hoisted(c.kid(j), out, true);
      }
      break;
    default:
      break;
  }
}

std::optional<std::string> static_key(const Node& key) {
  if (key.is(NodeKind::StringLit)) return key.text;
  if (key.is(NodeKind::NumberLit)) return js::number_to_string(key.number);
  return std::nullopt;
}

class Lowerer {
 public:
  explicit Lowerer(std::string path) { ir_.path = std::move(path); }

  ScriptIR run(const Node& program) {
    const FuncId top = new_function("<top>", program.pos);
    st_.fn = top;
    st_.block = new_block();
    st_.scope = push_scope(true);
    hoist(program.kids);
    lower_statements(program.kids);
    return std::move(ir_);
  }

 private:
  // -- construction helpers -------------------------------------------------

  FuncId new_function(std::string name, SourcePos pos) {
    IrFunction f;
    f.id = static_cast<FuncId>(ir_.functions.size());
    f.name = std::move(name);
    f.pos = pos;
    if (!ir_.functions.empty()) f.parent = st_.fn;
    ir_.functions.push_back(std::move(f));
    return ir_.functions.back().id;
  }

  IrFunction& fn() { return ir_.functions[st_.fn]; }

  BlockId new_block() {
    BasicBlock b;
    b.handler = st_.handler;
    fn().blocks.push_back(std::move(b));
    return static_cast<BlockId>(fn().blocks.size() - 1);
  }

  void edge(BlockId from, BlockId to) { fn().blocks[from].succs.push_back(to); }

  // Ends the current block with a jump and continues in `to`.
  void jump_to(BlockId to) {
    edge(st_.block, to);
    st_.block = to;
  }

  // Continues in a fresh block with no predecessors (after return/break/throw).
  void start_unreachable() { st_.block = new_block(); }

  VarId new_var(std::string name, VarKind kind, int line) {
    VarInfo v;
    v.name = std::move(name);
    v.owner = st_.fn;
    v.kind = kind;
    v.decl_line = line;
    ir_.vars.push_back(std::move(v));
    return static_cast<VarId>(ir_.vars.size() - 1);
  }

  VarId new_temp(SourcePos pos) {
    return new_var("%" + std::to_string(ir_.vars.size()), VarKind::Temp, pos.line);
  }

  InstrId emit(Op op, VarId target, SourcePos pos) {
    Instr in;
    in.id = static_cast<InstrId>(ir_.instrs.size());
    in.op = std::move(op);
    in.target = target;
    in.pos = pos;
    in.fn = st_.fn;
    in.block = st_.block;
    ir_.instrs.push_back(std::move(in));
    fn().blocks[st_.block].instrs.push_back(ir_.instrs.back().id);
    return ir_.instrs.back().id;
  }

  VarId emit_value(Op op, SourcePos pos) {
    const VarId t = new_temp(pos);
    emit(std::move(op), t, pos);
    return t;
  }

  VarId opaque(std::vector<VarId> reads, std::string hint, SourcePos pos) {
    op::Opaque o;
    o.reads = std::move(reads);
    o.hint = std::move(hint);
    return emit_value(std::move(o), pos);
  }

  VarId constant(ConstValue v, SourcePos pos) { return emit_value(op::Const{std::move(v)}, pos); }

  VarId undefined_value(SourcePos pos) { return constant(ConstValue{}, pos); }

  // -- scopes ---------------------------------------------------------------

  Scope* push_scope(bool function_scope) {
    scopes_.push_back(std::make_unique<Scope>());
    Scope* s = scopes_.back().get();
    s->parent = st_.scope;
    s->function_scope = function_scope;
    st_.scope = s;
    return s;
  }

  void pop_scope() { st_.scope = st_.scope->parent; }

  Scope* function_scope() {
    Scope* s = st_.scope;
    while (!s->function_scope) s = s->parent;
    return s;
  }

  VarId declare(Scope* scope, const std::string& name, VarKind kind, int line) {
    auto it = scope->names.find(name);
    if (it != scope->names.end()) return it->second;
    const VarId v = new_var(name, kind, line);
    scope->names.emplace(name, v);
    return v;
  }

  std::optional<VarId> lookup(const std::string& name) const {
    for (const Scope* s = st_.scope; s != nullptr; s = s->parent) {
      auto it = s->names.find(name);
      if (it != s->names.end()) return it->second;
    }
    return std::nullopt;
  }

  VarId global(const std::string& name, int line) {
    auto it = globals_.find(name);
    if (it != globals_.end()) return it->second;
    VarInfo v;
    v.name = name;
    v.owner = 0;
    v.kind = VarKind::Global;
    v.decl_line = line;
    ir_.vars.push_back(std::move(v));
    const auto id = static_cast<VarId>(ir_.vars.size() - 1);
    globals_.emplace(name, id);
    return id;
  }

  VarId resolve(const std::string& name, SourcePos pos) {
    if (auto v = lookup(name)) return *v;
    return global(name, pos.line);
  }

  void hoist(const std::vector<js::NodePtr>& body) {
    std::vector<const Node*> names;
    for (const auto& s : body) collect_hoisted(*s, names, false);
    Scope* fs = function_scope();
    for (const Node* n : names) declare(fs, n->text, VarKind::Local, n->pos.line);
  }

  // Declares block-scoped bindings of a statement list and instantiates its
  // function declarations.
  void prologue(const std::vector<js::NodePtr>& body) {
    for (const auto& s : body) {
      if (s->is(NodeKind::VarDecl) && s->text != "var") {
        std::vector<const Node*> names;
        for (const auto& d : s->kids) collect_binding_names(d->kid(0), names);
        for (const Node* n : names) declare(st_.scope, n->text, VarKind::Local, n->pos.line);
      } else if (s->is(NodeKind::ClassDecl) && !s->text.empty()) {
        declare(st_.scope, s->text, VarKind::Local, s->pos.line);
      } else if (s->is(NodeKind::FunctionDecl) && !s->text.empty()) {
        Scope* target = st_.scope->function_scope ? st_.scope : function_scope();
        declare(target, s->text, VarKind::Local, s->pos.line);
      }
    }
    for (const auto& s : body) {
      if (s->is(NodeKind::FunctionDecl)) {
        const FuncId f = lower_function(*s, s->text);
        if (!s->text.empty()) emit(op::Closure{f}, resolve(s->text, s->pos), s->pos);
      }
    }
  }

  // -- functions ------------------------------------------------------------

  FuncId lower_function(const Node& node, const std::string& name) {
    FnState saved = std::move(st_);
    st_ = FnState{};
    st_.scope = saved.scope;
    const FuncId id = new_function(name, node.pos);
    ir_.functions[id].parent = saved.fn;
    st_.fn = id;
    st_.block = new_block();

    if (node.is(NodeKind::FunctionExpr) && !node.text.empty()) {
      // A named function expression can refer to itself by name.
      push_scope(false);
      const VarId self = declare(st_.scope, node.text, VarKind::Local, node.pos.line);
      emit(op::Closure{id}, self, node.pos);
    }
    push_scope(true);

    const Node& params = node.kid(0);
    for (std::size_t i = 0; i < params.kids.size(); ++i) {
      const Node& p = params.kid(i);
      const auto index = static_cast<std::uint32_t>(i);
      if (p.is(NodeKind::Identifier)) {
        const VarId v = declare(st_.scope, p.text, VarKind::Param, p.pos.line);
        fn().params.push_back(v);
        emit(op::Param{index}, v, p.pos);
        continue;
      }
      std::vector<const Node*> names;
      collect_binding_names(p, names);
      for (const Node* n : names) declare(st_.scope, n->text, VarKind::Param, n->pos.line);
      const VarId tmp = new_temp(p.pos);
      fn().params.push_back(tmp);
      emit(op::Param{index}, tmp, p.pos);
      if (p.is(NodeKind::Spread)) {
        assign_to(p.kid(0), opaque({tmp}, "rest", p.pos));
      } else {
        assign_to(p, tmp);
      }
    }

    const Node& body = node.kid(1);
    if (node.is(NodeKind::Arrow) && node.has(js::flags::ExpressionBody)) {
      const VarId v = lower_expr(body);
      emit(op::Return{v}, kNoVar, body.pos);
    } else {
      hoist(body.kids);
      lower_statements(body.kids);
    }

    st_ = std::move(saved);
    return id;
  }

  VarId closure(const Node& node, const std::string& name) {
    const FuncId f = lower_function(node, name);
    return emit_value(op::Closure{f}, node.pos);
  }

  VarId lower_class(const Node& cls, const std::string& name) {
    if (!cls.kid(0).empty()) lower_expr(cls.kid(0));
    const Node* ctor = nullptr;
    for (std::size_t i = 1; i < cls.kids.size(); ++i) {
      const Node& m = cls.kid(i);
      if (m.has(js::flags::Method) && !m.has(js::flags::Static) && m.text == "constructor" &&
          !m.has(js::flags::Computed)) {
        ctor = &m.kid(1);
      }
    }
    VarId ctor_var;
    if (ctor != nullptr) {
      ctor_var = closure(*ctor, name);
    } else {
      FnState saved = std::move(st_);
      st_ = FnState{};
      st_.scope = saved.scope;
      const FuncId f = new_function(name, cls.pos);
      ir_.functions[f].parent = saved.fn;
      st_.fn = f;
      st_.block = new_block();
      st_ = std::move(saved);
      ctor_var = emit_value(op::Closure{f}, cls.pos);
    }
    const VarId proto = opaque({ctor_var}, "prototype", cls.pos);
    for (std::size_t i = 1; i < cls.kids.size(); ++i) {
      const Node& m = cls.kid(i);
      if (&m.kid(1) == ctor) continue;
      const VarId object = m.has(js::flags::Static) ? ctor_var : proto;
      VarId value;
      if (m.has(js::flags::Method)) {
        value = closure(m.kid(1), m.text);
      } else if (!m.kid(1).empty()) {
        value = lower_expr(m.kid(1), m.text);
      } else {
        value = undefined_value(m.pos);
      }
      if (m.has(js::flags::Computed)) {
        const VarId key = lower_expr(m.kid(0));
        opaque({object, key, value}, "computed-member", m.pos);
      } else if (m.has(js::flags::Getter) || m.has(js::flags::Setter)) {
        opaque({object, value}, "accessor", m.pos);
      } else if (!(m.has(js::flags::Method) && m.text.empty())) {
        emit(op::PropWrite{object, m.text, value}, kNoVar, m.pos);
      }
    }
    return ctor_var;
  }

  // -- statements -----------------------------------------------------------

  void lower_statements(const std::vector<js::NodePtr>& body) {
    prologue(body);
    for (const auto& s : body) lower_stmt(*s);
  }

  void lower_block_scoped(const std::vector<js::NodePtr>& body) {
    push_scope(false);
    lower_statements(body);
    pop_scope();
  }

  void lower_substatement(const Node& stmt) {
    if (stmt.is(NodeKind::Block)) {
      lower_block_scoped(stmt.kids);
      return;
    }
    // A lone declaration in statement position still gets a scope of its own.
    push_scope(false);
    if (stmt.is(NodeKind::FunctionDecl) && !stmt.text.empty()) {
      const FuncId f = lower_function(stmt, stmt.text);
      emit(op::Closure{f}, resolve(stmt.text, stmt.pos), stmt.pos);
    } else {
      lower_stmt(stmt);
    }
    pop_scope();
  }

  std::vector<std::string> take_labels() {
    std::vector<std::string> labels = std::move(st_.pending_labels);
    st_.pending_labels.clear();
    return labels;
  }

  void lower_stmt(const Node& s) {
    const SourcePos pos = s.pos;
    switch (s.kind) {
      case NodeKind::Empty:
      case NodeKind::Debugger:
      case NodeKind::FunctionDecl:
        break;
      case NodeKind::VarDecl:
        lower_var_decl(s);
        break;
      case NodeKind::ClassDecl: {
        const VarId c = lower_class(s, s.text);
        if (!s.text.empty()) emit(op::Copy{c}, resolve(s.text, pos), pos);
        break;
      }
      case NodeKind::ExprStmt:
        lower_expr(s.kid(0));
        break;
      case NodeKind::Block:
        lower_block_scoped(s.kids);
        break;
      case NodeKind::If: {
        lower_expr(s.kid(0));
        const BlockId cond = st_.block;
        const BlockId then_b = new_block();
        const BlockId after = new_block();
        edge(cond, then_b);
        st_.block = then_b;
        lower_substatement(s.kid(1));
        edge(st_.block, after);
        if (!s.kid(2).empty()) {
          const BlockId else_b = new_block();
          edge(cond, else_b);
          st_.block = else_b;
          lower_substatement(s.kid(2));
          edge(st_.block, after);
        } else {
          edge(cond, after);
        }
        st_.block = after;
        break;
      }
      case NodeKind::For:
        lower_for(s);
        break;
      case NodeKind::ForIn:
        lower_for_in(s);
        break;
      case NodeKind::While: {
        auto labels = take_labels();
        const BlockId head = new_block();
        jump_to(head);
        lower_expr(s.kid(0));
        const BlockId cond_end = st_.block;
        const BlockId body = new_block();
        const BlockId after = new_block();
        edge(cond_end, body);
        edge(cond_end, after);
        st_.block = body;
        st_.targets.push_back({std::move(labels), after, head, true});
        lower_substatement(s.kid(1));
        st_.targets.pop_back();
        edge(st_.block, head);
        st_.block = after;
        break;
      }
      case NodeKind::DoWhile: {
        auto labels = take_labels();
        const BlockId body = new_block();
        const BlockId cond = new_block();
        const BlockId after = new_block();
        jump_to(body);
        st_.targets.push_back({std::move(labels), after, cond, true});
        lower_substatement(s.kid(0));
        st_.targets.pop_back();
        jump_to(cond);
        lower_expr(s.kid(1));
        edge(st_.block, body);
        edge(st_.block, after);
        st_.block = after;
        break;
      }
      case NodeKind::Return: {
        const VarId v = s.kid(0).empty() ? kNoVar : lower_expr(s.kid(0));
        emit(op::Return{v}, kNoVar, pos);
        start_unreachable();
        break;
      }
      case NodeKind::Break:
      case NodeKind::Continue:
        lower_jump(s);
        break;
      case NodeKind::Throw: {
        const VarId v = lower_expr(s.kid(0));
        opaque({v}, "throw", pos);
        if (st_.handler) edge(st_.block, *st_.handler);
        start_unreachable();
        break;
      }
      case NodeKind::Try:
        lower_try(s);
        break;
      case NodeKind::Switch:
        lower_switch(s);
        break;
      case NodeKind::Labeled: {
        const Node& body = s.kid(0);
        st_.pending_labels.push_back(s.text);
        if (body.is(NodeKind::For) || body.is(NodeKind::ForIn) || body.is(NodeKind::While) ||
            body.is(NodeKind::DoWhile) || body.is(NodeKind::Labeled)) {
          lower_stmt(body);
          break;
        }
        auto labels = take_labels();
        const BlockId after = new_block();
        st_.targets.push_back({std::move(labels), after, std::nullopt, false});
        lower_substatement(body);
        st_.targets.pop_back();
        jump_to(after);
        break;
      }
      case NodeKind::With: {
        const VarId obj = lower_expr(s.kid(0));
        op::Opaque enter;
        enter.reads = {obj};
        enter.writes_all = true;
        enter.hint = "with";
        emit(std::move(enter), kNoVar, pos);
        lower_substatement(s.kid(1));
        op::Opaque leave;
        leave.writes_all = true;
        leave.hint = "with";
        emit(std::move(leave), kNoVar, pos);
        break;
      }
      default:
        lower_expr(s);
        break;
    }
  }

  void lower_var_decl(const Node& decl) {
    for (const auto& d : decl.kids) {
      const Node& target = d->kid(0);
      const Node& init = d->kid(1);
      if (!init.empty()) {
        const std::string hint = target.is(NodeKind::Identifier) ? target.text : std::string{};
        assign_to(target, lower_expr(init, hint));
      } else if (decl.text != "var" && target.is(NodeKind::Identifier)) {
        emit(op::Const{ConstValue{}}, resolve(target.text, target.pos), target.pos);
      }
    }
  }

  void lower_jump(const Node& s) {
    const bool is_break = s.is(NodeKind::Break);
    for (auto it = st_.targets.rbegin(); it != st_.targets.rend(); ++it) {
      bool match = false;
      if (s.text.empty()) {
        match = is_break ? it->accepts_unlabeled : it->continue_to.has_value();
      } else {
        for (const auto& l : it->labels) match = match || l == s.text;
        if (match && !is_break && !it->continue_to) match = false;
      }
      if (match) {
        edge(st_.block, is_break ? it->break_to : *it->continue_to);
        break;
      }
    }
    start_unreachable();
  }

  void lower_for(const Node& s) {
    auto labels = take_labels();
    push_scope(false);
    const Node& init = s.kid(0);
    if (init.is(NodeKind::VarDecl)) {
      if (init.text != "var") {
        std::vector<const Node*> names;
        for (const auto& d : init.kids) collect_binding_names(d->kid(0), names);
        for (const Node* n : names) declare(st_.scope, n->text, VarKind::Local, n->pos.line);
      }
      lower_var_decl(init);
    } else if (!init.empty()) {
      lower_expr(init);
    }
    const BlockId head = new_block();
    jump_to(head);
    if (!s.kid(1).empty()) lower_expr(s.kid(1));
    const BlockId cond_end = st_.block;
    const BlockId body = new_block();
    const BlockId update = new_block();
    const BlockId after = new_block();
    edge(cond_end, body);
    edge(cond_end, after);
    st_.block = body;
    st_.targets.push_back({std::move(labels), after, update, true});
    lower_substatement(s.kid(3));
    st_.targets.pop_back();
    jump_to(update);
    if (!s.kid(2).empty()) lower_expr(s.kid(2));
    edge(st_.block, head);
    st_.block = after;
    pop_scope();
  }

  void lower_for_in(const Node& s) {
    auto labels = take_labels();
    push_scope(false);
    const Node& left = s.kid(0);
    if (left.is(NodeKind::VarDecl) && left.text != "var") {
      std::vector<const Node*> names;
      collect_binding_names(left.kid(0).kid(0), names);
      for (const Node* n : names) declare(st_.scope, n->text, VarKind::Local, n->pos.line);
    }
    const VarId collection = lower_expr(s.kid(1));
    const BlockId head = new_block();
    const BlockId body = new_block();
    const BlockId after = new_block();
    jump_to(head);
    edge(head, after);
    jump_to(body);
    const VarId element = opaque({collection}, s.text == "of" ? "for-of" : "for-in", s.pos);
    const Node& target = left.is(NodeKind::VarDecl) ? left.kid(0).kid(0) : left;
    assign_to(target, element);
    st_.targets.push_back({std::move(labels), after, head, true});
    lower_substatement(s.kid(2));
    st_.targets.pop_back();
    edge(st_.block, head);
    st_.block = after;
    pop_scope();
  }

  void lower_try(const Node& s) {
    const Node& handler = s.kid(1);
    const Node& finalizer = s.kid(2);
    const std::optional<BlockId> outer = st_.handler;
    const BlockId after = new_block();
    const BlockId finally_b = finalizer.empty() ? after : new_block();
    const BlockId catch_b = handler.empty() ? finally_b : new_block();

    st_.handler = catch_b;
    const BlockId body = new_block();
    jump_to(body);
    lower_block_scoped(s.kid(0).kids);
    st_.handler = outer;
    edge(st_.block, finally_b);

    if (!handler.empty()) {
      st_.block = catch_b;
      if (!finalizer.empty()) fn().blocks[catch_b].handler = finally_b;
      const std::optional<BlockId> saved = st_.handler;
      if (!finalizer.empty()) st_.handler = finally_b;
      push_scope(false);
      if (!handler.kid(0).empty()) {
        std::vector<const Node*> names;
        collect_binding_names(handler.kid(0), names);
        for (const Node* n : names) declare(st_.scope, n->text, VarKind::Local, n->pos.line);
        assign_to(handler.kid(0), opaque({}, "exception", handler.pos));
      }
      lower_statements(handler.kid(1).kids);
      pop_scope();
      st_.handler = saved;
      edge(st_.block, finally_b);
    }
    if (!finalizer.empty()) {
      st_.block = finally_b;
      lower_block_scoped(finalizer.kids);
      edge(st_.block, after);
    }
    st_.block = after;
  }

  void lower_switch(const Node& s) {
    auto labels = take_labels();
    lower_expr(s.kid(0));
    const BlockId after = new_block();
    const std::size_t n = s.kids.size() - 1;
    std::vector<BlockId> bodies;
    for (std::size_t i = 0; i < n; ++i) bodies.push_back(new_block());

    push_scope(false);
    for (std::size_t i = 0; i < n; ++i) {
      const Node& c = s.kid(i + 1);
      for (std::size_t j = 1; j < c.kids.size(); ++j) {
        const Node& st = c.kid(j);
        if (st.is(NodeKind::VarDecl) && st.text != "var") {
          std::vector<const Node*> names;
          for (const auto& d : st.kids) collect_binding_names(d->kid(0), names);
          for (const Node* nm : names) declare(st_.scope, nm->text, VarKind::Local, nm->pos.line);
        } else if (st.is(NodeKind::ClassDecl) && !st.text.empty()) {
          declare(st_.scope, st.text, VarKind::Local, st.pos.line);
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      const Node& c = s.kid(i + 1);
      for (std::size_t j = 1; j < c.kids.size(); ++j) {
        const Node& st = c.kid(j);
        if (st.is(NodeKind::FunctionDecl) && !st.text.empty()) {
          const FuncId f = lower_function(st, st.text);
          emit(op::Closure{f}, resolve(st.text, st.pos), st.pos);
        }
      }
    }

    std::optional<BlockId> default_body;
    for (std::size_t i = 0; i < n; ++i) {
      const Node& c = s.kid(i + 1);
      if (c.kid(0).empty()) {
        default_body = bodies[i];
        continue;
      }
      const BlockId test = new_block();
      jump_to(test);
      lower_expr(c.kid(0));
      edge(st_.block, bodies[i]);
    }
    edge(st_.block, default_body.value_or(after));

    st_.targets.push_back({std::move(labels), after, std::nullopt, true});
    for (std::size_t i = 0; i < n; ++i) {
      const Node& c = s.kid(i + 1);
      st_.block = bodies[i];
      for (std::size_t j = 1; j < c.kids.size(); ++j) lower_stmt(c.kid(j));
      edge(st_.block, i + 1 < n ? bodies[i + 1] : after);
    }
    st_.targets.pop_back();
    pop_scope();
    st_.block = after;
  }

  // -- assignment targets ---------------------------------------------------

  void assign_to(const Node& target, VarId value) {
    const SourcePos pos = target.pos;
    switch (target.kind) {
      case NodeKind::Identifier:
        emit(op::Copy{value}, resolve(target.text, pos), pos);
        break;
      case NodeKind::Member: {
        const VarId obj = lower_expr(target.kid(0));
        emit(op::PropWrite{obj, target.text, value}, kNoVar, pos);
        break;
      }
      case NodeKind::Index: {
        const VarId obj = lower_expr(target.kid(0));
        if (auto key = static_key(target.kid(1))) {
          emit(op::PropWrite{obj, *key, value}, kNoVar, pos);
        } else {
          const VarId k = lower_expr(target.kid(1));
          opaque({obj, k, value}, "index-write", pos);
        }
        break;
      }
      case NodeKind::Assign: {
        // Pattern element with a default value.
        const VarId merged = new_temp(pos);
        emit(op::Copy{value}, merged, pos);
        const BlockId here = st_.block;
        const BlockId dflt = new_block();
        const BlockId join = new_block();
        edge(here, dflt);
        edge(here, join);
        st_.block = dflt;
        const std::string hint =
            target.kid(0).is(NodeKind::Identifier) ? target.kid(0).text : std::string{};
        emit(op::Copy{lower_expr(target.kid(1), hint)}, merged, pos);
        jump_to(join);
        assign_to(target.kid(0), merged);
        break;
      }
      case NodeKind::ObjectLit:
        for (const auto& p : target.kids) {
          if (p->has(js::flags::SpreadProperty)) {
            assign_to(p->kid(1), opaque({value}, "rest", p->pos));
          } else if (p->has(js::flags::Computed)) {
            const VarId k = lower_expr(p->kid(0));
            assign_to(p->kid(1), opaque({value, k}, "index", p->pos));
          } else {
            assign_to(p->kid(1), emit_value(op::PropRead{value, p->text}, p->pos));
          }
        }
        break;
      case NodeKind::ArrayLit:
        for (std::size_t i = 0; i < target.kids.size(); ++i) {
          const Node& e = target.kid(i);
          if (e.empty()) continue;
          if (e.is(NodeKind::Spread)) {
            assign_to(e.kid(0), opaque({value}, "rest", e.pos));
          } else {
            assign_to(e, emit_value(op::PropRead{value, std::to_string(i)}, e.pos));
          }
        }
        break;
      default:
        lower_expr(target);
        break;
    }
  }

  // -- expressions ----------------------------------------------------------

  VarId lower_expr(const Node& e, const std::string& name_hint = {}) {
    const SourcePos pos = e.pos;
    switch (e.kind) {
      case NodeKind::Identifier:
        return lower_identifier(e);
      case NodeKind::StringLit: {
        ConstValue v;
        v.kind = ConstValue::Kind::String;
        v.text = e.text;
        return constant(std::move(v), pos);
      }
      case NodeKind::NumberLit: {
        ConstValue v;
        v.kind = ConstValue::Kind::Number;
        v.number = e.number;
        return constant(std::move(v), pos);
      }
      case NodeKind::BoolLit: {
        ConstValue v;
        v.kind = ConstValue::Kind::Bool;
        v.boolean = e.text == "true";
        return constant(std::move(v), pos);
      }
      case NodeKind::NullLit: {
        ConstValue v;
        v.kind = ConstValue::Kind::Null;
        return constant(std::move(v), pos);
      }
      case NodeKind::RegexLit: {
        ConstValue v;
        v.kind = ConstValue::Kind::Regex;
        v.text = e.text;
        return constant(std::move(v), pos);
      }
      case NodeKind::BigIntLit:
        return opaque({}, "bigint", pos);
      case NodeKind::Template: {
        op::Template t;
        for (std::size_t i = 0; i < e.kids.size(); ++i) {
          if (i % 2 == 0) {
            t.parts.emplace_back(e.kid(i).text);
          } else {
            t.parts.emplace_back(lower_expr(e.kid(i)));
          }
        }
        return emit_value(std::move(t), pos);
      }
      case NodeKind::TaggedTemplate: {
        op::Call c;
        c.callee = lower_expr(e.kid(0));
        c.args.push_back(opaque({}, "template-strings", pos));
        const Node& tpl = e.kid(1);
        for (std::size_t i = 1; i < tpl.kids.size(); i += 2) c.args.push_back(lower_expr(tpl.kid(i)));
        return emit_value(std::move(c), pos);
      }
      case NodeKind::ArrayLit: {
        op::ArrayLit a;
        for (const auto& k : e.kids) {
          if (k->empty()) {
            a.dynamic = true;
            a.elems.push_back(undefined_value(k->pos));
          } else if (k->is(NodeKind::Spread)) {
            a.dynamic = true;
            a.elems.push_back(lower_expr(k->kid(0)));
          } else {
            a.elems.push_back(lower_expr(*k));
          }
        }
        return emit_value(std::move(a), pos);
      }
      case NodeKind::ObjectLit:
        return lower_object(e);
      case NodeKind::FunctionExpr:
        return closure(e, e.text.empty() ? name_hint : e.text);
      case NodeKind::Arrow:
        return closure(e, name_hint);
      case NodeKind::ClassExpr:
        return lower_class(e, e.text.empty() ? name_hint : e.text);
      case NodeKind::Unary: {
        const Node& arg = e.kid(0);
        if (e.text == "-" && arg.is(NodeKind::NumberLit)) {
          ConstValue v;
          v.kind = ConstValue::Kind::Number;
          v.number = -arg.number;
          return constant(std::move(v), pos);
        }
        if (e.text == "delete" && (arg.is(NodeKind::Member) || arg.is(NodeKind::Index))) {
          std::vector<VarId> reads{lower_expr(arg.kid(0))};
          if (arg.is(NodeKind::Index)) reads.push_back(lower_expr(arg.kid(1)));
          return opaque(std::move(reads), "delete", pos);
        }
        const VarId v = lower_expr(arg);
        if (e.text == "void") return undefined_value(pos);
        return opaque({v}, e.text, pos);
      }
      case NodeKind::Update:
        return lower_update(e);
      case NodeKind::Binary: {
        const VarId l = lower_expr(e.kid(0));
        const VarId r = lower_expr(e.kid(1));
        if (e.text == "+") return emit_value(op::Concat{l, r}, pos);
        return opaque({l, r}, e.text, pos);
      }
      case NodeKind::Logical: {
        const VarId result = new_temp(pos);
        emit(op::Copy{lower_expr(e.kid(0))}, result, pos);
        const BlockId here = st_.block;
        const BlockId rhs = new_block();
        const BlockId join = new_block();
        edge(here, rhs);
        edge(here, join);
        st_.block = rhs;
        emit(op::Copy{lower_expr(e.kid(1), name_hint)}, result, e.kid(1).pos);
        jump_to(join);
        return result;
      }
      case NodeKind::Conditional: {
        lower_expr(e.kid(0));
        const VarId result = new_temp(pos);
        const BlockId here = st_.block;
        const BlockId then_b = new_block();
        const BlockId else_b = new_block();
        const BlockId join = new_block();
        edge(here, then_b);
        edge(here, else_b);
        st_.block = then_b;
        emit(op::Copy{lower_expr(e.kid(1), name_hint)}, result, e.kid(1).pos);
        edge(st_.block, join);
        st_.block = else_b;
        emit(op::Copy{lower_expr(e.kid(2), name_hint)}, result, e.kid(2).pos);
        edge(st_.block, join);
        st_.block = join;
        return result;
      }
      case NodeKind::Assign:
        return lower_assign(e);
      case NodeKind::Call:
        return lower_call(e);
      case NodeKind::New: {
        op::Call c;
        c.is_new = true;
        c.callee = lower_expr(e.kid(0));
        lower_args(e, c);
        return emit_value(std::move(c), pos);
      }
      case NodeKind::Member: {
        const VarId obj = lower_expr(e.kid(0));
        return emit_value(op::PropRead{obj, e.text}, pos);
      }
      case NodeKind::Index: {
        const VarId obj = lower_expr(e.kid(0));
        if (auto key = static_key(e.kid(1))) return emit_value(op::PropRead{obj, *key}, pos);
        const VarId k = lower_expr(e.kid(1));
        return opaque({obj, k}, "index", pos);
      }
      case NodeKind::Sequence: {
        VarId last = kNoVar;
        for (const auto& k : e.kids) last = lower_expr(*k, name_hint);
        return last;
      }
      case NodeKind::Spread:
        return lower_expr(e.kid(0));
      case NodeKind::Yield: {
        std::vector<VarId> reads;
        if (!e.kid(0).empty()) reads.push_back(lower_expr(e.kid(0)));
        return opaque(std::move(reads), "yield", pos);
      }
      case NodeKind::Await:
        return opaque({lower_expr(e.kid(0))}, "await", pos);
      case NodeKind::This:
        return opaque({}, "this", pos);
      case NodeKind::Super:
        return opaque({}, "super", pos);
      case NodeKind::MetaProperty:
        return opaque({}, e.text, pos);
      case NodeKind::PrivateName:
        return opaque({}, "#" + e.text, pos);
      default:
        return opaque({}, std::string(js::kind_name(e.kind)), pos);
    }
  }

  VarId lower_identifier(const Node& e) {
    if (auto v = lookup(e.text)) return *v;
    if (e.text == "undefined") return undefined_value(e.pos);
    if (e.text == "NaN" || e.text == "Infinity") {
      ConstValue v;
      v.kind = ConstValue::Kind::Number;
      v.number = e.text == "NaN" ? std::numeric_limits<double>::quiet_NaN()
                                 : std::numeric_limits<double>::infinity();
      return constant(std::move(v), e.pos);
    }
    if (e.text == "arguments" && st_.fn != 0) return opaque({}, "arguments", e.pos);
    return global(e.text, e.pos.line);
  }

  VarId lower_object(const Node& e) {
    op::ObjectLit o;
    for (const auto& p : e.kids) {
      if (p->has(js::flags::SpreadProperty)) {
        o.dynamic = true;
        opaque({lower_expr(p->kid(1))}, "spread", p->pos);
        continue;
      }
      std::optional<std::string> key;
      VarId computed = kNoVar;
      if (p->has(js::flags::Computed)) {
        key = static_key(p->kid(0));
        if (!key) computed = lower_expr(p->kid(0));
      } else {
        key = p->text;
      }
      VarId value;
      if (p->has(js::flags::Method)) {
        value = closure(p->kid(1), key.value_or(std::string{}));
      } else {
        value = lower_expr(p->kid(1), key.value_or(std::string{}));
      }
      if (p->has(js::flags::Getter) || p->has(js::flags::Setter)) {
        // The property's value is whatever the accessor computes.
        value = opaque({value}, "accessor", p->pos);
      }
      if (!key) {
        o.dynamic = true;
        opaque({computed, value}, "computed-property", p->pos);
        continue;
      }
      o.props.emplace_back(*key, value);
    }
    return emit_value(std::move(o), e.pos);
  }

  VarId lower_update(const Node& e) {
    const Node& arg = e.kid(0);
    if (arg.is(NodeKind::Identifier)) {
      const VarId v = lower_identifier(arg);
      op::Opaque o;
      o.reads = {v};
      if (ir_.vars[v].kind != VarKind::Temp) o.writes = {v};
      o.hint = e.text;
      return emit_value(std::move(o), e.pos);
    }
    std::vector<VarId> reads{lower_expr(arg)};
    return opaque(std::move(reads), e.text, e.pos);
  }

  VarId lower_assign(const Node& e) {
    const Node& target = e.kid(0);
    const SourcePos pos = e.pos;
    const std::string hint = target.is(NodeKind::Identifier) ? target.text
                             : target.is(NodeKind::Member)   ? target.text
                                                             : std::string{};
    if (e.text == "=") {
      const VarId v = lower_expr(e.kid(1), hint);
      assign_to(target, v);
      return v;
    }
    // Compound assignment: read, combine, write back.
    VarId current;
    VarId obj = kNoVar;
    std::optional<std::string> key;
    if (target.is(NodeKind::Member)) {
      obj = lower_expr(target.kid(0));
      key = target.text;
      current = emit_value(op::PropRead{obj, *key}, pos);
    } else if (target.is(NodeKind::Index) && static_key(target.kid(1))) {
      obj = lower_expr(target.kid(0));
      key = static_key(target.kid(1));
      current = emit_value(op::PropRead{obj, *key}, pos);
    } else {
      current = lower_expr(target);
    }
    const bool logical = e.text == "&&=" || e.text == "||=" || e.text == "?\?=";
    const VarId rhs = lower_expr(e.kid(1), hint);
    VarId result;
    if (e.text == "+=") {
      result = emit_value(op::Concat{current, rhs}, pos);
    } else if (logical) {
      result = new_temp(pos);
      emit(op::Copy{current}, result, pos);
      const BlockId here = st_.block;
      const BlockId assign = new_block();
      const BlockId join = new_block();
      edge(here, assign);
      edge(here, join);
      st_.block = assign;
      emit(op::Copy{rhs}, result, pos);
      jump_to(join);
    } else {
      result = opaque({current, rhs}, e.text, pos);
    }
    if (obj != kNoVar) {
      emit(op::PropWrite{obj, *key, result}, kNoVar, pos);
    } else if (target.is(NodeKind::Identifier)) {
      emit(op::Copy{result}, resolve(target.text, target.pos), pos);
    } else if (target.is(NodeKind::Index)) {
      opaque({current, result}, "index-write", pos);
    }
    return result;
  }

  void lower_args(const Node& call, op::Call& c) {
    for (std::size_t i = 1; i < call.kids.size(); ++i) {
      const Node& a = call.kid(i);
      if (a.is(NodeKind::Spread)) {
        c.has_spread = true;
        c.args.push_back(lower_expr(a.kid(0)));
      } else {
        c.args.push_back(lower_expr(a));
      }
    }
  }

  VarId lower_call(const Node& e) {
    const Node& callee = e.kid(0);
    const SourcePos pos = e.pos;
    op::Call c;
    if (callee.is(NodeKind::Member) ||
        (callee.is(NodeKind::Index) && static_key(callee.kid(1)).has_value())) {
      c.receiver = lower_expr(callee.kid(0));
      c.method = callee.is(NodeKind::Member) ? callee.text : *static_key(callee.kid(1));
      c.callee = emit_value(op::PropRead{c.receiver, c.method}, callee.pos);
    } else if (callee.is(NodeKind::Identifier) && callee.text == "eval" && !lookup("eval")) {
      op::Opaque o;
      for (std::size_t i = 1; i < e.kids.size(); ++i) o.reads.push_back(lower_expr(e.kid(i)));
      o.writes_all = true;
      o.hint = "eval";
      return emit_value(std::move(o), pos);
    } else {
      c.callee = lower_expr(callee);
    }
    lower_args(e, c);
    return emit_value(std::move(c), pos);
  }

  ScriptIR ir_;
  FnState st_;
  std::vector<std::unique_ptr<Scope>> scopes_;
  std::unordered_map<std::string, VarId> globals_;
};

}  // namespace

ScriptIR lower(const js::Ast& ast, std::string path) {
  Lowerer l(std::move(path));
  return l.run(*ast.root);
}

std::vector<VarId> operands(const Instr& instr) {
  std::vector<VarId> out;
  auto add = [&](VarId v) {
    if (v != kNoVar) out.push_back(v);
  };
  std::visit(
      [&](const auto& o) {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, op::Copy>) {
          add(o.src);
        } else if constexpr (std::is_same_v<T, op::Template>) {
          for (const auto& p : o.parts) {
            if (const auto* v = std::get_if<VarId>(&p)) add(*v);
          }
        } else if constexpr (std::is_same_v<T, op::Concat>) {
          add(o.lhs);
          add(o.rhs);
        } else if constexpr (std::is_same_v<T, op::Call>) {
          add(o.callee);
          add(o.receiver);
          for (VarId a : o.args) add(a);
        } else if constexpr (std::is_same_v<T, op::PropRead>) {
          add(o.object);
        } else if constexpr (std::is_same_v<T, op::PropWrite>) {
          add(o.object);
          add(o.value);
        } else if constexpr (std::is_same_v<T, op::ObjectLit>) {
          for (const auto& [k, v] : o.props) add(v);
        } else if constexpr (std::is_same_v<T, op::ArrayLit>) {
          for (VarId v : o.elems) add(v);
        } else if constexpr (std::is_same_v<T, op::Return>) {
          add(o.value);
        } else if constexpr (std::is_same_v<T, op::Opaque>) {
          for (VarId v : o.reads) add(v);
        }
      },
      instr.op);
  return out;
}

std::vector<VarId> defined_vars(const Instr& instr) {
  std::vector<VarId> out;
  if (instr.target != kNoVar) out.push_back(instr.target);
  if (const auto* o = instr.as<op::Opaque>()) {
    for (VarId w : o->writes) out.push_back(w);
  }
  return out;
}

namespace {

std::string var_label(const ScriptIR& ir, VarId v) {
  if (v == kNoVar) return "_";
  const VarInfo& info = ir.var(v);
  if (info.kind == VarKind::Temp) return info.name;
  return info.name + "." + std::to_string(v);
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string dump(const ScriptIR& ir) {
  std::ostringstream out;
  for (const auto& f : ir.functions) {
    out << "function " << f.id << " " << (f.name.empty() ? "<anonymous>" : f.name) << "(";
    for (std::size_t i = 0; i < f.params.size(); ++i) {
      out << (i ? ", " : "") << var_label(ir, f.params[i]);
    }
    out << ")";
    if (f.parent) out << " in " << *f.parent;
    out << "\n";
    for (std::size_t b = 0; b < f.blocks.size(); ++b) {
      const BasicBlock& bb = f.blocks[b];
      out << "  b" << b << ":";
      if (!bb.succs.empty()) {
        out << " ->";
        for (BlockId s : bb.succs) out << " b" << s;
      }
      if (bb.handler) out << " catch b" << *bb.handler;
      out << "\n";
      for (InstrId id : bb.instrs) {
        const Instr& in = ir.instr(id);
        out << "    " << in.pos.line << ":" << in.pos.column << " ";
        if (in.target != kNoVar) out << var_label(ir, in.target) << " = ";
        std::visit(
            [&](const auto& o) {
              using T = std::decay_t<decltype(o)>;
              if constexpr (std::is_same_v<T, op::Copy>) {
                out << var_label(ir, o.src);
              } else if constexpr (std::is_same_v<T, op::Const>) {
                switch (o.value.kind) {
                  case ConstValue::Kind::String: out << quote(o.value.text); break;
                  case ConstValue::Kind::Number: out << js::number_to_string(o.value.number); break;
                  case ConstValue::Kind::Bool: out << (o.value.boolean ? "true" : "false"); break;
                  case ConstValue::Kind::Null: out << "null"; break;
                  case ConstValue::Kind::Undefined: out << "undefined"; break;
                  case ConstValue::Kind::Regex: out << o.value.text; break;
                }
              } else if constexpr (std::is_same_v<T, op::Template>) {
                out << "template(";
                for (const auto& p : o.parts) {
                  if (const auto* s = std::get_if<std::string>(&p)) {
                    out << quote(*s);
                  } else {
                    out << " " << var_label(ir, std::get<VarId>(p)) << " ";
                  }
                }
                out << ")";
              } else if constexpr (std::is_same_v<T, op::Concat>) {
                out << var_label(ir, o.lhs) << " + " << var_label(ir, o.rhs);
              } else if constexpr (std::is_same_v<T, op::Call>) {
                out << (o.is_new ? "new " : "call ") << var_label(ir, o.callee);
                if (o.receiver != kNoVar) out << " on " << var_label(ir, o.receiver) << "." << o.method;
                out << "(";
                for (std::size_t i = 0; i < o.args.size(); ++i) {
                  out << (i ? ", " : "") << var_label(ir, o.args[i]);
                }
                out << ")";
              } else if constexpr (std::is_same_v<T, op::PropRead>) {
                out << var_label(ir, o.object) << "." << o.name;
              } else if constexpr (std::is_same_v<T, op::PropWrite>) {
                out << var_label(ir, o.object) << "." << o.name << " := " << var_label(ir, o.value);
              } else if constexpr (std::is_same_v<T, op::ObjectLit>) {
                out << "{";
                for (std::size_t i = 0; i < o.props.size(); ++i) {
                  out << (i ? ", " : "") << o.props[i].first << ": " << var_label(ir, o.props[i].second);
                }
                out << (o.dynamic ? ", ...}" : "}");
              } else if constexpr (std::is_same_v<T, op::ArrayLit>) {
                out << "[";
                for (std::size_t i = 0; i < o.elems.size(); ++i) {
                  out << (i ? ", " : "") << var_label(ir, o.elems[i]);
                }
                out << "]";
              } else if constexpr (std::is_same_v<T, op::Closure>) {
                out << "closure " << o.fn;
              } else if constexpr (std::is_same_v<T, op::Return>) {
                out << "return " << var_label(ir, o.value);
              } else if constexpr (std::is_same_v<T, op::Param>) {
                out << "param " << o.index;
              } else if constexpr (std::is_same_v<T, op::Opaque>) {
                out << "opaque " << o.hint << "(";
                for (std::size_t i = 0; i < o.reads.size(); ++i) {
                  out << (i ? ", " : "") << var_label(ir, o.reads[i]);
                }
                out << ")";
                if (!o.writes.empty()) {
                  out << " writes";
                  for (VarId w : o.writes) out << " " << var_label(ir, w);
                }
                if (o.writes_all) out << " writes *";
              }
            },
            in.op);
        out << "\n";
      }
    }
  }
  return out.str();
}

}  // namespace webreq

// SPDX-License-Identifier: Apache-2.0
#include "webreq/js/ast.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace webreq::js {

NodePtr make_node(NodeKind kind, SourcePos pos, std::string text) {
  auto n = std::make_unique<Node>();
  n->kind = kind;
  n->pos = pos;
  n->text = std::move(text);
  return n;
}

std::string number_to_string(double value) {
  if (std::isnan(value)) return "NaN";
  if (std::isinf(value)) return value > 0 ? "Infinity" : "-Infinity";
  if (value == 0) return "0";
  if (std::trunc(value) == value && std::fabs(value) < 1e21) {
    std::array<char, 32> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed, 0);
    return std::string(buf.data(), res.ptr);
  }
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

std::string_view kind_name(NodeKind kind) noexcept {
  switch (kind) {
    case NodeKind::Program: return "Program";
    case NodeKind::Empty: return "Empty";
    case NodeKind::VarDecl: return "VarDecl";
    case NodeKind::Declarator: return "Declarator";
    case NodeKind::FunctionDecl: return "FunctionDecl";
    case NodeKind::ClassDecl: return "ClassDecl";
    case NodeKind::ExprStmt: return "ExprStmt";
    case NodeKind::Block: return "Block";
    case NodeKind::If: return "If";
    case NodeKind::For: return "For";
    case NodeKind::ForIn: return "ForIn";
    case NodeKind::While: return "While";
    case NodeKind::DoWhile: return "DoWhile";
    case NodeKind::Return: return "Return";
    case NodeKind::Break: return "Break";
    case NodeKind::Continue: return "Continue";
    case NodeKind::Throw: return "Throw";
    case NodeKind::Try: return "Try";
    case NodeKind::Catch: return "Catch";
    case NodeKind::Switch: return "Switch";
    case NodeKind::SwitchCase: return "SwitchCase";
    case NodeKind::Labeled: return "Labeled";
    case NodeKind::With: return "With";
    case NodeKind::Debugger: return "Debugger";
    case NodeKind::Identifier: return "Identifier";
    case NodeKind::PrivateName: return "PrivateName";
    case NodeKind::This: return "This";
    case NodeKind::Super: return "Super";
    case NodeKind::StringLit: return "StringLit";
    case NodeKind::NumberLit: return "NumberLit";
    case NodeKind::BigIntLit: return "BigIntLit";
    case NodeKind::BoolLit: return "BoolLit";
    case NodeKind::NullLit: return "NullLit";
    case NodeKind::RegexLit: return "RegexLit";
    case NodeKind::Template: return "Template";
    case NodeKind::TemplateElement: return "TemplateElement";
    case NodeKind::TaggedTemplate: return "TaggedTemplate";
    case NodeKind::ArrayLit: return "ArrayLit";
    case NodeKind::ObjectLit: return "ObjectLit";
    case NodeKind::Property: return "Property";
    case NodeKind::FunctionExpr: return "FunctionExpr";
    case NodeKind::Arrow: return "Arrow";
    case NodeKind::ClassExpr: return "ClassExpr";
    case NodeKind::ClassMember: return "ClassMember";
    case NodeKind::Params: return "Params";
    case NodeKind::Unary: return "Unary";
    case NodeKind::Update: return "Update";
    case NodeKind::Binary: return "Binary";
    case NodeKind::Logical: return "Logical";
    case NodeKind::Assign: return "Assign";
    case NodeKind::Conditional: return "Conditional";
    case NodeKind::Call: return "Call";
    case NodeKind::New: return "New";
    case NodeKind::Member: return "Member";
    case NodeKind::Index: return "Index";
    case NodeKind::Sequence: return "Sequence";
    case NodeKind::Spread: return "Spread";
    case NodeKind::Yield: return "Yield";
    case NodeKind::Await: return "Await";
    case NodeKind::MetaProperty: return "MetaProperty";
  }
  return "?";
}

namespace {

void write_sexpr(const Node& n, std::string& out) {
  out += '(';
  out += kind_name(n.kind);
  if (!n.text.empty()) {
    out += " \"";
    for (char c : n.text) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    out += '"';
  }
  for (const auto& k : n.kids) {
    out += ' ';
    write_sexpr(*k, out);
  }
  out += ')';
}

}  // namespace

std::string to_sexpr(const Node& node) {
  std::string out;
  write_sexpr(node, out);
  return out;
}

}  // namespace webreq::js

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "webreq/source.hpp"

namespace webreq::js {

// Child layout per kind is listed next to each enumerator. "?" marks a slot
// that holds an Empty node when the construct is absent.
enum class NodeKind : std::uint8_t {
  Program,         // statements...
  Empty,           // placeholder for absent optional children and `;`

  // Statements
  VarDecl,         // text = var|let|const; Declarator...
  Declarator,      // target, init?
  FunctionDecl,    // text = name; Params, body
  ClassDecl,       // text = name; heritage?, ClassMember...
  ExprStmt,        // expression
  Block,           // statements...
  If,              // test, consequent, alternate?
  For,             // init?, test?, update?, body
  ForIn,           // text = in|of; left, right, body
  While,           // test, body
  DoWhile,         // body, test
  Return,          // argument?
  Break,           // text = label
  Continue,        // text = label
  Throw,           // argument
  Try,             // block, Catch?, finalizer?
  Catch,           // param?, body
  Switch,          // discriminant, SwitchCase...
  SwitchCase,      // test?, statements...
  Labeled,         // text = label; body
  With,            // object, body
  Debugger,

  // Expressions
  Identifier,      // text = name
  PrivateName,     // text = name without '#'
  This,
  Super,
  StringLit,       // text = cooked value
  NumberLit,       // number = value, text = raw
  BigIntLit,       // text = raw
  BoolLit,         // text = true|false
  NullLit,
  RegexLit,        // text = raw
  Template,        // TemplateElement, expr, TemplateElement, ... (odd count)
  TemplateElement, // text = cooked value
  TaggedTemplate,  // tag, Template
  ArrayLit,        // elements (Empty for holes, Spread)...
  ObjectLit,       // Property...
  Property,        // text = static key; key?, value (see PropertyFlags)
  FunctionExpr,    // text = name; Params, body
  Arrow,           // Params, body (Block or expression)
  ClassExpr,       // text = name; heritage?, ClassMember...
  ClassMember,     // text = static key; key?, value (see PropertyFlags)
  Params,          // patterns...
  Unary,           // text = operator; argument
  Update,          // text = ++|--; argument (flag Prefix)
  Binary,          // text = operator; left, right
  Logical,         // text = &&|'||'|??; left, right
  Assign,          // text = operator; target, value
  Conditional,     // test, consequent, alternate
  Call,            // callee, arguments... (flag Optional)
  New,             // callee, arguments...
  Member,          // text = property; object (flag Optional)
  Index,           // object, property expression (flag Optional)
  Sequence,        // expressions...
  Spread,          // argument
  Yield,           // argument?
  Await,           // argument
  MetaProperty,    // text = new.target | import.meta
};

namespace flags {
inline constexpr std::uint32_t Prefix = 1u << 0;
inline constexpr std::uint32_t Optional = 1u << 1;
inline constexpr std::uint32_t Computed = 1u << 2;
inline constexpr std::uint32_t Shorthand = 1u << 3;
inline constexpr std::uint32_t Method = 1u << 4;
inline constexpr std::uint32_t Getter = 1u << 5;
inline constexpr std::uint32_t Setter = 1u << 6;
inline constexpr std::uint32_t Static = 1u << 7;
inline constexpr std::uint32_t Async = 1u << 8;
inline constexpr std::uint32_t Generator = 1u << 9;
inline constexpr std::uint32_t Parenthesized = 1u << 10;
inline constexpr std::uint32_t ExpressionBody = 1u << 11;
inline constexpr std::uint32_t SpreadProperty = 1u << 12;
inline constexpr std::uint32_t Delegate = 1u << 13;
}  // namespace flags

struct Node;
using NodePtr = std::unique_ptr<Node>;

struct Node {
  NodeKind kind = NodeKind::Empty;
  std::string text;
  double number = 0.0;
  std::uint32_t flags = 0;
  SourcePos pos;
  std::vector<NodePtr> kids;

  bool has(std::uint32_t f) const noexcept { return (flags & f) != 0; }
  bool is(NodeKind k) const noexcept { return kind == k; }
  bool empty() const noexcept { return kind == NodeKind::Empty; }
  const Node& kid(std::size_t i) const { return *kids.at(i); }
};

NodePtr make_node(NodeKind kind, SourcePos pos, std::string text = {});

std::string_view kind_name(NodeKind kind) noexcept;

/// Number-to-string conversion following JavaScript's ToString for common values.
std::string number_to_string(double value);

/// Compact one-line rendering, e.g. `(Call (Identifier "f") (NumberLit "1"))`.
std::string to_sexpr(const Node& node);

/// Abstract syntax tree for one file. Owns the root Program node.
struct Ast {
  NodePtr root;
};

}  // namespace webreq::js

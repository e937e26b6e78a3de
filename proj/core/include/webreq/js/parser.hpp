// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "webreq/js/ast.hpp"
#include "webreq/js/lexer.hpp"
#include "webreq/js/parse_error.hpp"
#include "webreq/source.hpp"

namespace webreq::js {

/// Parses one script. Throws ParseError for malformed input.
Ast parse_source(const SourceFile& file);

class Parser {
 public:
  explicit Parser(const SourceFile& file);

  Ast parse_program();

 private:
  // Token handling.
  void advance();
  Token peek_token();
  bool at(std::string_view punct) const { return tok_.is(punct); }
  bool at_word(std::string_view word) const { return tok_.is_word(word); }
  bool eat(std::string_view punct);
  void expect(std::string_view punct);
  void expect_word(std::string_view word);
  void consume_semicolon();
  [[noreturn]] void unexpected() const;
  SourcePos pos_of(const Token& t) const { return file_.position(t.start); }
  SourcePos here() const { return pos_of(tok_); }
  bool at_identifier_name() const;
  bool at_binding_identifier() const;
  std::string take_identifier();
  std::string take_property_name();

  // Statements.
  NodePtr parse_statement();
  NodePtr parse_block();
  NodePtr parse_var_decl(bool no_in, bool need_semicolon);
  NodePtr parse_function(bool is_expression, bool is_async, SourcePos start);
  NodePtr parse_function_rest(NodePtr fn);
  NodePtr parse_params();
  NodePtr parse_class(bool is_expression);
  NodePtr parse_if();
  NodePtr parse_for();
  NodePtr parse_while();
  NodePtr parse_do_while();
  NodePtr parse_return();
  NodePtr parse_jump(NodeKind kind);
  NodePtr parse_throw();
  NodePtr parse_try();
  NodePtr parse_switch();
  NodePtr parse_with();
  NodePtr parse_expression_statement();
  bool at_let_declaration();

  // Expressions.
  NodePtr parse_expression(bool no_in = false);
  NodePtr parse_assignment(bool no_in = false);
  NodePtr parse_arrow_from(NodePtr params_expr, SourcePos start, bool is_async);
  NodePtr parse_arrow_body(NodePtr arrow);
  NodePtr parse_conditional(bool no_in);
  NodePtr parse_binary(int min_prec, bool no_in);
  NodePtr parse_unary();
  NodePtr parse_postfix();
  NodePtr parse_lhs(bool allow_call);
  NodePtr parse_call_tail(NodePtr expr, bool allow_call);
  NodePtr parse_arguments(NodePtr call);
  NodePtr parse_primary();
  NodePtr parse_paren();
  NodePtr parse_array();
  NodePtr parse_object();
  NodePtr parse_template(NodePtr tag);
  NodePtr parse_binding_target();
  NodePtr parse_binding_element();
  NodePtr parse_property_key(Node& member);
  NodePtr parse_module_item();
  NodePtr parse_method_value(SourcePos start, std::uint32_t method_flags);

  const SourceFile& file_;
  Lexer lexer_;
  Token tok_;
  Token prev_;
  bool in_generator_ = false;
  bool in_async_ = false;
  bool default_export_ = false;  // `export default function () {}` may omit the name
};

}  // namespace webreq::js

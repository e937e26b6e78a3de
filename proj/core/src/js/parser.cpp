// SPDX-License-Identifier: Apache-2.0
#include "webreq/js/parser.hpp"

#include <unordered_map>
#include <unordered_set>

namespace webreq::js {

namespace {

const std::unordered_set<std::string_view>& reserved_words() {
  static const std::unordered_set<std::string_view> words = {
      "break",  "case",   "catch",   "class",    "const",    "continue", "debugger",
      "default", "delete", "do",     "else",     "export",   "extends",  "finally",
      "for",    "function", "if",    "import",   "in",       "instanceof", "new",
      "return", "super",  "switch",  "this",     "throw",    "try",      "typeof",
      "var",    "void",   "while",   "with",     "null",     "true",     "false",
      "enum"};
  return words;
}

bool is_reserved(const Token& t) {
  return t.kind == TokenKind::Identifier && !t.escaped && reserved_words().count(t.text) != 0;
}

int binary_precedence(const Token& t, bool no_in) {
  static const std::unordered_map<std::string_view, int> table = {
      {"??", 1},  {"||", 1},  {"&&", 2},  {"|", 3},   {"^", 4},   {"&", 5},  {"==", 6},
      {"!=", 6},  {"===", 6}, {"!==", 6}, {"<", 7},   {">", 7},   {"<=", 7}, {">=", 7},
      {"<<", 8},  {">>", 8},  {">>>", 8}, {"+", 9},   {"-", 9},   {"*", 10}, {"/", 10},
      {"%", 10},  {"**", 11}};
  if (t.kind == TokenKind::Punctuator) {
    auto it = table.find(t.text);
    return it == table.end() ? -1 : it->second;
  }
  if (t.kind == TokenKind::Identifier && !t.escaped) {
    if (t.text == "instanceof") return 7;
    if (t.text == "in" && !no_in) return 7;
  }
  return -1;
}

bool is_assign_operator(const Token& t) {
  static const std::unordered_set<std::string_view> ops = {
      "=", "+=", "-=", "*=", "/=", "%=", "**=", "<<=", ">>=", ">>>=", "&=", "|=", "^=",
      "&&=", "||=", "?\?="};
  return t.kind == TokenKind::Punctuator && ops.count(t.text) != 0;
}

bool valid_simple_target(const Node& n) {
  return n.is(NodeKind::Identifier) || n.is(NodeKind::Member) || n.is(NodeKind::Index) ||
         n.is(NodeKind::Call);
}

bool valid_pattern(const Node& n) {
  switch (n.kind) {
    case NodeKind::Identifier:
    case NodeKind::Member:
    case NodeKind::Index:
      return true;
    case NodeKind::Assign:
      return n.text == "=" && valid_pattern(n.kid(0));
    case NodeKind::Spread:
      return valid_pattern(n.kid(0));
    case NodeKind::ArrayLit:
      for (const auto& k : n.kids) {
        if (!k->empty() && !valid_pattern(*k)) return false;
      }
      return true;
    case NodeKind::ObjectLit:
      for (const auto& p : n.kids) {
        if (p->has(flags::Method) || p->has(flags::Getter) || p->has(flags::Setter)) return false;
        if (!valid_pattern(p->kid(1))) return false;
      }
      return true;
    default:
      return false;
  }
}

}  // namespace

Ast parse_source(const SourceFile& file) {
  Parser parser(file);
  return parser.parse_program();
}

Parser::Parser(const SourceFile& file) : file_(file), lexer_(file) { tok_ = lexer_.next(); }

// ---------------------------------------------------------------------------
// Token helpers

void Parser::advance() {
  prev_ = std::move(tok_);
  tok_ = lexer_.next();
}

Token Parser::peek_token() {
  const auto state = lexer_.save();
  Token t;
  try {
    t = lexer_.next();
  } catch (const ParseError&) {
    t = Token{};
  }
  lexer_.restore(state);
  return t;
}

bool Parser::eat(std::string_view punct) {
  if (!at(punct)) return false;
  advance();
  return true;
}

void Parser::expect(std::string_view punct) {
  if (!at(punct)) {
    throw ParseError(here(), "expected '" + std::string(punct) + "'" +
                                 (tok_.kind == TokenKind::End ? " before end of input" : ""));
  }
  advance();
}

void Parser::expect_word(std::string_view word) {
  if (!at_word(word)) throw ParseError(here(), "expected '" + std::string(word) + "'");
  advance();
}

void Parser::consume_semicolon() {
  if (eat(";")) return;
  if (at("}") || tok_.kind == TokenKind::End || tok_.newline_before) return;
  unexpected();
}

void Parser::unexpected() const {
  if (tok_.kind == TokenKind::End) throw ParseError(here(), "unexpected end of input");
  std::string shown = tok_.kind == TokenKind::String ? "string literal" : tok_.text;
  throw ParseError(here(), "unexpected token '" + shown + "'");
}

bool Parser::at_identifier_name() const { return tok_.kind == TokenKind::Identifier; }

bool Parser::at_binding_identifier() const {
  return tok_.kind == TokenKind::Identifier && !is_reserved(tok_);
}

std::string Parser::take_identifier() {
  if (!at_binding_identifier()) unexpected();
  std::string name = tok_.text;
  advance();
  return name;
}

std::string Parser::take_property_name() {
  if (tok_.kind == TokenKind::Identifier) {
    std::string name = tok_.text;
    advance();
    return name;
  }
  if (tok_.kind == TokenKind::PrivateName) {
    std::string name = "#" + tok_.text;
    advance();
    return name;
  }
  unexpected();
}

// ---------------------------------------------------------------------------
// Statements

Ast Parser::parse_program() {
  auto program = make_node(NodeKind::Program, here());
  while (tok_.kind != TokenKind::End) {
    if (at_word("import") && !peek_token().is("(") && !peek_token().is(".")) {
      program->kids.push_back(parse_module_item());
    } else if (at_word("export")) {
      program->kids.push_back(parse_module_item());
    } else {
      program->kids.push_back(parse_statement());
    }
  }
  return Ast{std::move(program)};
}

NodePtr Parser::parse_module_item() {
  const SourcePos start = here();
  if (at_word("import")) {
    // Imported bindings carry unknown values; model them as uninitialised lets.
    advance();
    auto decl = make_node(NodeKind::VarDecl, start, "let");
    auto bind = [&](std::string name, SourcePos p) {
      auto d = make_node(NodeKind::Declarator, p);
      d->kids.push_back(make_node(NodeKind::Identifier, p, std::move(name)));
      d->kids.push_back(make_node(NodeKind::Empty, p));
      decl->kids.push_back(std::move(d));
    };
    if (tok_.kind == TokenKind::String) {
      advance();
      consume_semicolon();
      return make_node(NodeKind::Empty, start);
    }
    if (at_binding_identifier()) {
      const SourcePos p = here();
      bind(take_identifier(), p);
      eat(",");
    }
    if (eat("*")) {
      expect_word("as");
      const SourcePos p = here();
      bind(take_identifier(), p);
    } else if (eat("{")) {
      while (!at("}")) {
        const SourcePos p = here();
        std::string name = tok_.kind == TokenKind::String ? tok_.text : take_property_name();
        if (tok_.kind == TokenKind::String) advance();
        if (at_word("as")) {
          advance();
          name = take_identifier();
        }
        bind(std::move(name), p);
        if (!eat(",")) break;
      }
      expect("}");
    }
    expect_word("from");
    if (tok_.kind != TokenKind::String) unexpected();
    advance();
    consume_semicolon();
    return decl;
  }

  expect_word("export");
  if (eat("*")) {
    if (at_word("as")) {
      advance();
      take_property_name();
    }
    expect_word("from");
    if (tok_.kind != TokenKind::String) unexpected();
    advance();
    consume_semicolon();
    return make_node(NodeKind::Empty, start);
  }
  if (eat("{")) {
    while (!at("}")) {
      if (tok_.kind == TokenKind::String) advance(); else take_property_name();
      if (at_word("as")) {
        advance();
        if (tok_.kind == TokenKind::String) advance(); else take_property_name();
      }
      if (!eat(",")) break;
    }
    expect("}");
    if (at_word("from")) {
      advance();
      if (tok_.kind != TokenKind::String) unexpected();
      advance();
    }
    consume_semicolon();
    return make_node(NodeKind::Empty, start);
  }
  if (at_word("default")) {
    advance();
    if (at_word("function") || at_word("class") ||
        (at_word("async") && peek_token().is_word("function"))) {
      default_export_ = true;
      auto decl = parse_statement();
      default_export_ = false;
      return decl;
    }
    auto stmt = make_node(NodeKind::ExprStmt, start);
    stmt->kids.push_back(parse_assignment());
    consume_semicolon();
    return stmt;
  }
  return parse_statement();
}

bool Parser::at_let_declaration() {
  if (!at_word("let")) return false;
  const Token next = peek_token();
  if (next.is("[") || next.is("{")) return true;
  return next.kind == TokenKind::Identifier && !next.is_word("in") && !next.is_word("instanceof") &&
         !next.is_word("of");
}

NodePtr Parser::parse_statement() {
  const SourcePos start = here();
  if (tok_.kind == TokenKind::Punctuator) {
    if (at("{")) return parse_block();
    if (at(";")) {
      advance();
      return make_node(NodeKind::Empty, start);
    }
    return parse_expression_statement();
  }
  if (tok_.kind != TokenKind::Identifier || tok_.escaped) return parse_expression_statement();

  const std::string& w = tok_.text;
  if (w == "var" || w == "const") return parse_var_decl(false, true);
  if (w == "let" && at_let_declaration()) return parse_var_decl(false, true);
  if (w == "function") return parse_function(false, false, start);
  if (w == "async") {
    const Token next = peek_token();
    if (next.is_word("function") && !next.newline_before) {
      advance();
      return parse_function(false, true, start);
    }
  }
  if (w == "class") return parse_class(false);
  if (w == "if") return parse_if();
  if (w == "for") return parse_for();
  if (w == "while") return parse_while();
  if (w == "do") return parse_do_while();
  if (w == "return") return parse_return();
  if (w == "break") return parse_jump(NodeKind::Break);
  if (w == "continue") return parse_jump(NodeKind::Continue);
  if (w == "throw") return parse_throw();
  if (w == "try") return parse_try();
  if (w == "switch") return parse_switch();
  if (w == "with") return parse_with();
  if (w == "debugger") {
    advance();
    consume_semicolon();
    return make_node(NodeKind::Debugger, start);
  }
  if (w == "import") {
    const Token next = peek_token();
    if (!next.is("(") && !next.is(".")) return parse_module_item();
  }
  if (!is_reserved(tok_) && peek_token().is(":")) {
    auto label = make_node(NodeKind::Labeled, start, tok_.text);
    advance();
    advance();
    label->kids.push_back(parse_statement());
    return label;
  }
  return parse_expression_statement();
}

NodePtr Parser::parse_block() {
  auto block = make_node(NodeKind::Block, here());
  expect("{");
  while (!at("}")) {
    if (tok_.kind == TokenKind::End) unexpected();
    block->kids.push_back(parse_statement());
  }
  advance();
  return block;
}

NodePtr Parser::parse_var_decl(bool no_in, bool need_semicolon) {
  auto decl = make_node(NodeKind::VarDecl, here(), tok_.text);
  advance();
  do {
    auto d = make_node(NodeKind::Declarator, here());
    d->kids.push_back(parse_binding_target());
    if (eat("=")) {
      d->kids.push_back(parse_assignment(no_in));
    } else {
      d->kids.push_back(make_node(NodeKind::Empty, here()));
    }
    decl->kids.push_back(std::move(d));
  } while (eat(","));
  if (need_semicolon) consume_semicolon();
  return decl;
}

NodePtr Parser::parse_binding_target() {
  if (at("[")) {
    auto n = parse_array();
    if (!valid_pattern(*n)) throw ParseError(n->pos, "invalid destructuring pattern");
    return n;
  }
  if (at("{")) {
    auto n = parse_object();
    if (!valid_pattern(*n)) throw ParseError(n->pos, "invalid destructuring pattern");
    return n;
  }
  const SourcePos p = here();
  return make_node(NodeKind::Identifier, p, take_identifier());
}

NodePtr Parser::parse_binding_element() {
  const SourcePos start = here();
  if (eat("...")) {
    auto spread = make_node(NodeKind::Spread, start);
    spread->kids.push_back(parse_binding_target());
    return spread;
  }
  auto target = parse_binding_target();
  if (eat("=")) {
    auto assign = make_node(NodeKind::Assign, start, "=");
    assign->kids.push_back(std::move(target));
    assign->kids.push_back(parse_assignment());
    return assign;
  }
  return target;
}

NodePtr Parser::parse_params() {
  auto params = make_node(NodeKind::Params, here());
  expect("(");
  while (!at(")")) {
    params->kids.push_back(parse_binding_element());
    if (!eat(",")) break;
  }
  expect(")");
  return params;
}

NodePtr Parser::parse_function(bool is_expression, bool is_async, SourcePos start) {
  expect_word("function");
  auto fn = make_node(is_expression ? NodeKind::FunctionExpr : NodeKind::FunctionDecl, start);
  if (is_async) fn->flags |= flags::Async;
  if (eat("*")) fn->flags |= flags::Generator;
  if (at_binding_identifier()) {
    fn->text = take_identifier();
  } else if (!is_expression && !default_export_) {
    unexpected();
  }
  default_export_ = false;
  return parse_function_rest(std::move(fn));
}

NodePtr Parser::parse_function_rest(NodePtr fn) {
  const bool saved_gen = in_generator_;
  const bool saved_async = in_async_;
  in_generator_ = fn->has(flags::Generator);
  in_async_ = fn->has(flags::Async);
  fn->kids.push_back(parse_params());
  fn->kids.push_back(parse_block());
  in_generator_ = saved_gen;
  in_async_ = saved_async;
  return fn;
}

NodePtr Parser::parse_method_value(SourcePos start, std::uint32_t method_flags) {
  auto fn = make_node(NodeKind::FunctionExpr, start);
  fn->flags |= method_flags & (flags::Async | flags::Generator);
  return parse_function_rest(std::move(fn));
}

NodePtr Parser::parse_property_key(Node& member) {
  const SourcePos p = here();
  switch (tok_.kind) {
    case TokenKind::Identifier:
      member.text = tok_.text;
      advance();
      return make_node(NodeKind::Empty, p);
    case TokenKind::PrivateName:
      member.text = "#" + tok_.text;
      advance();
      return make_node(NodeKind::Empty, p);
    case TokenKind::String:
      member.text = tok_.text;
      advance();
      return make_node(NodeKind::Empty, p);
    case TokenKind::Number:
      member.text = number_to_string(tok_.number);
      advance();
      return make_node(NodeKind::Empty, p);
    case TokenKind::BigInt:
      member.text = tok_.text.substr(0, tok_.text.size() - 1);
      advance();
      return make_node(NodeKind::Empty, p);
    case TokenKind::Punctuator:
      if (at("[")) {
        advance();
        auto key = parse_assignment();
        expect("]");
        member.flags |= flags::Computed;
        return key;
      }
      break;
    default:
      break;
  }
  unexpected();
}

NodePtr Parser::parse_class(bool is_expression) {
  auto cls = make_node(is_expression ? NodeKind::ClassExpr : NodeKind::ClassDecl, here());
  expect_word("class");
  if (at_binding_identifier() && !at_word("extends")) {
    cls->text = take_identifier();
  } else if (!is_expression && !default_export_) {
    unexpected();
  }
  default_export_ = false;
  if (at_word("extends")) {
    advance();
    cls->kids.push_back(parse_lhs(true));
  } else {
    cls->kids.push_back(make_node(NodeKind::Empty, here()));
  }
  expect("{");
  while (!eat("}")) {
    if (eat(";")) continue;
    if (tok_.kind == TokenKind::End) unexpected();
    const SourcePos start = here();
    auto member = make_node(NodeKind::ClassMember, start);
    auto modifier_applies = [&]() {
      const Token next = peek_token();
      return !next.is("(") && !next.is("=") && !next.is(";") && !next.is("}") &&
             !(next.newline_before && !next.is("*") && !next.is("["));
    };
    if (at_word("static") && modifier_applies()) {
      advance();
      member->flags |= flags::Static;
      if (at("{")) {
        // Static initialisation block: lowered as an immediately-run method.
        auto fn = make_node(NodeKind::FunctionExpr, here());
        fn->kids.push_back(make_node(NodeKind::Params, here()));
        fn->kids.push_back(parse_block());
        member->flags |= flags::Method;
        member->kids.push_back(make_node(NodeKind::Empty, start));
        member->kids.push_back(std::move(fn));
        cls->kids.push_back(std::move(member));
        continue;
      }
    }
    if (at_word("async") && modifier_applies() && !peek_token().newline_before) {
      advance();
      member->flags |= flags::Async;
    }
    if (eat("*")) member->flags |= flags::Generator;
    if ((at_word("get") || at_word("set")) && modifier_applies()) {
      member->flags |= at_word("get") ? flags::Getter : flags::Setter;
      advance();
    }
    member->kids.push_back(parse_property_key(*member));
    if (at("(")) {
      member->flags |= flags::Method;
      member->kids.push_back(parse_method_value(here(), member->flags));
    } else {
      if (eat("=")) {
        member->kids.push_back(parse_assignment());
      } else {
        member->kids.push_back(make_node(NodeKind::Empty, here()));
      }
      consume_semicolon();
    }
    cls->kids.push_back(std::move(member));
  }
  return cls;
}

NodePtr Parser::parse_if() {
  auto n = make_node(NodeKind::If, here());
  advance();
  expect("(");
  n->kids.push_back(parse_expression());
  expect(")");
  n->kids.push_back(parse_statement());
  if (at_word("else")) {
    advance();
    n->kids.push_back(parse_statement());
  } else {
    n->kids.push_back(make_node(NodeKind::Empty, here()));
  }
  return n;
}

NodePtr Parser::parse_for() {
  const SourcePos start = here();
  advance();
  if (at_word("await")) advance();
  expect("(");
  NodePtr init;
  if (at(";")) {
    init = make_node(NodeKind::Empty, here());
  } else if (at_word("var") || at_word("const") || at_let_declaration()) {
    init = parse_var_decl(true, false);
  } else {
    init = parse_expression(true);
  }
  if (at_word("of") || at_word("in")) {
    const bool is_of = at_word("of");
    auto n = make_node(NodeKind::ForIn, start, is_of ? "of" : "in");
    advance();
    n->kids.push_back(std::move(init));
    n->kids.push_back(is_of ? parse_assignment() : parse_expression());
    expect(")");
    n->kids.push_back(parse_statement());
    return n;
  }
  auto n = make_node(NodeKind::For, start);
  n->kids.push_back(std::move(init));
  expect(";");
  n->kids.push_back(at(";") ? make_node(NodeKind::Empty, here()) : parse_expression());
  expect(";");
  n->kids.push_back(at(")") ? make_node(NodeKind::Empty, here()) : parse_expression());
  expect(")");
  n->kids.push_back(parse_statement());
  return n;
}

NodePtr Parser::parse_while() {
  auto n = make_node(NodeKind::While, here());
  advance();
  expect("(");
  n->kids.push_back(parse_expression());
  expect(")");
  n->kids.push_back(parse_statement());
  return n;
}

NodePtr Parser::parse_do_while() {
  auto n = make_node(NodeKind::DoWhile, here());
  advance();
  n->kids.push_back(parse_statement());
  expect_word("while");
  expect("(");
  n->kids.push_back(parse_expression());
  expect(")");
  eat(";");
  return n;
}

NodePtr Parser::parse_return() {
  auto n = make_node(NodeKind::Return, here());
  advance();
  if (at(";") || at("}") || tok_.kind == TokenKind::End || tok_.newline_before) {
    n->kids.push_back(make_node(NodeKind::Empty, here()));
  } else {
    n->kids.push_back(parse_expression());
  }
  consume_semicolon();
  return n;
}

NodePtr Parser::parse_jump(NodeKind kind) {
  auto n = make_node(kind, here());
  advance();
  if (at_binding_identifier() && !tok_.newline_before) n->text = take_identifier();
  consume_semicolon();
  return n;
}

NodePtr Parser::parse_throw() {
  auto n = make_node(NodeKind::Throw, here());
  advance();
  if (tok_.newline_before) throw ParseError(here(), "illegal newline after throw");
  n->kids.push_back(parse_expression());
  consume_semicolon();
  return n;
}

NodePtr Parser::parse_try() {
  auto n = make_node(NodeKind::Try, here());
  advance();
  n->kids.push_back(parse_block());
  if (at_word("catch")) {
    auto c = make_node(NodeKind::Catch, here());
    advance();
    if (eat("(")) {
      c->kids.push_back(parse_binding_target());
      expect(")");
    } else {
      c->kids.push_back(make_node(NodeKind::Empty, here()));
    }
    c->kids.push_back(parse_block());
    n->kids.push_back(std::move(c));
  } else {
    n->kids.push_back(make_node(NodeKind::Empty, here()));
  }
  if (at_word("finally")) {
    advance();
    n->kids.push_back(parse_block());
  } else {
    if (n->kid(1).empty()) throw ParseError(here(), "missing catch or finally after try");
    n->kids.push_back(make_node(NodeKind::Empty, here()));
  }
  return n;
}

NodePtr Parser::parse_switch() {
  auto n = make_node(NodeKind::Switch, here());
  advance();
  expect("(");
  n->kids.push_back(parse_expression());
  expect(")");
  expect("{");
  while (!eat("}")) {
    auto c = make_node(NodeKind::SwitchCase, here());
    if (at_word("case")) {
      advance();
      c->kids.push_back(parse_expression());
    } else if (at_word("default")) {
      advance();
      c->kids.push_back(make_node(NodeKind::Empty, here()));
    } else {
      unexpected();
    }
    expect(":");
    while (!at("}") && !at_word("case") && !at_word("default")) {
      if (tok_.kind == TokenKind::End) unexpected();
      c->kids.push_back(parse_statement());
    }
    n->kids.push_back(std::move(c));
  }
  return n;
}

NodePtr Parser::parse_with() {
  auto n = make_node(NodeKind::With, here());
  advance();
  expect("(");
  n->kids.push_back(parse_expression());
  expect(")");
  n->kids.push_back(parse_statement());
  return n;
}

NodePtr Parser::parse_expression_statement() {
  auto n = make_node(NodeKind::ExprStmt, here());
  n->kids.push_back(parse_expression());
  consume_semicolon();
  return n;
}

// ---------------------------------------------------------------------------
// Expressions

NodePtr Parser::parse_expression(bool no_in) {
  const SourcePos start = here();
  auto first = parse_assignment(no_in);
  if (!at(",")) return first;
  auto seq = make_node(NodeKind::Sequence, start);
  seq->kids.push_back(std::move(first));
  while (eat(",")) seq->kids.push_back(parse_assignment(no_in));
  return seq;
}

NodePtr Parser::parse_assignment(bool no_in) {
  const SourcePos start = here();

  if (in_generator_ && at_word("yield")) {
    auto y = make_node(NodeKind::Yield, start);
    advance();
    if (eat("*")) y->flags |= flags::Delegate;
    if (tok_.newline_before || at(")") || at("]") || at("}") || at(",") || at(";") || at(":") ||
        tok_.kind == TokenKind::End) {
      y->kids.push_back(make_node(NodeKind::Empty, here()));
    } else {
      y->kids.push_back(parse_assignment(no_in));
    }
    return y;
  }

  if (at_binding_identifier()) {
    const Token next = peek_token();
    if (next.is("=>") && !next.newline_before) {
      auto params = make_node(NodeKind::Params, start);
      params->kids.push_back(make_node(NodeKind::Identifier, start, take_identifier()));
      return parse_arrow_from(std::move(params), start, false);
    }
    if (at_word("async") && next.kind == TokenKind::Identifier && !next.newline_before &&
        !is_reserved(next)) {
      // async x => ...
      const auto state = lexer_.save();
      const Token saved_tok = tok_;
      advance();
      const SourcePos pp = here();
      std::string name = tok_.text;
      advance();
      if (at("=>") && !tok_.newline_before) {
        auto params = make_node(NodeKind::Params, pp);
        params->kids.push_back(make_node(NodeKind::Identifier, pp, std::move(name)));
        return parse_arrow_from(std::move(params), start, true);
      }
      lexer_.restore(state);
      tok_ = saved_tok;
    }
  }

  auto lhs = parse_conditional(no_in);

  if (at("=>")) {
    if (tok_.newline_before) unexpected();
    const bool async_call = lhs->is(NodeKind::Call) && lhs->kid(0).is(NodeKind::Identifier) &&
                            lhs->kid(0).text == "async" && !lhs->has(flags::Parenthesized);
    if (lhs->is(NodeKind::Params) || lhs->has(flags::Parenthesized) || async_call) {
      return parse_arrow_from(std::move(lhs), start, async_call);
    }
    unexpected();
  }
  if (lhs->is(NodeKind::Params)) throw ParseError(lhs->pos, "expected '=>' after parameter list");

  if (is_assign_operator(tok_)) {
    const std::string op = tok_.text;
    const bool ok = op == "=" ? valid_pattern(*lhs) || valid_simple_target(*lhs)
                              : valid_simple_target(*lhs);
    if (!ok) throw ParseError(lhs->pos, "invalid assignment target");
    advance();
    auto assign = make_node(NodeKind::Assign, start, op);
    assign->kids.push_back(std::move(lhs));
    assign->kids.push_back(parse_assignment(no_in));
    return assign;
  }
  return lhs;
}

NodePtr Parser::parse_arrow_from(NodePtr head, SourcePos start, bool is_async) {
  auto arrow = make_node(NodeKind::Arrow, start);
  if (is_async) arrow->flags |= flags::Async;
  NodePtr params;
  if (head->is(NodeKind::Params)) {
    params = std::move(head);
  } else {
    params = make_node(NodeKind::Params, head->pos);
    std::vector<NodePtr> items;
    if (head->is(NodeKind::Call)) {
      for (std::size_t i = 1; i < head->kids.size(); ++i) items.push_back(std::move(head->kids[i]));
    } else if (head->is(NodeKind::Sequence)) {
      items = std::move(head->kids);
    } else {
      items.push_back(std::move(head));
    }
    for (auto& item : items) {
      if (!valid_pattern(*item) || item->is(NodeKind::Member) || item->is(NodeKind::Index))
        throw ParseError(item->pos, "invalid arrow function parameter");
      params->kids.push_back(std::move(item));
    }
  }
  arrow->kids.push_back(std::move(params));
  return parse_arrow_body(std::move(arrow));
}

NodePtr Parser::parse_arrow_body(NodePtr arrow) {
  expect("=>");
  const bool saved_async = in_async_;
  const bool saved_gen = in_generator_;
  in_async_ = arrow->has(flags::Async);
  in_generator_ = false;
  if (at("{")) {
    arrow->kids.push_back(parse_block());
  } else {
    arrow->flags |= flags::ExpressionBody;
    arrow->kids.push_back(parse_assignment());
  }
  in_async_ = saved_async;
  in_generator_ = saved_gen;
  return arrow;
}

NodePtr Parser::parse_conditional(bool no_in) {
  const SourcePos start = here();
  auto test = parse_binary(0, no_in);
  if (!at("?")) return test;
  advance();
  auto n = make_node(NodeKind::Conditional, start);
  n->kids.push_back(std::move(test));
  n->kids.push_back(parse_assignment(false));
  expect(":");
  n->kids.push_back(parse_assignment(no_in));
  return n;
}

NodePtr Parser::parse_binary(int min_prec, bool no_in) {
  const SourcePos start = here();
  auto left = parse_unary();
  while (true) {
    const int prec = binary_precedence(tok_, no_in);
    if (prec < 0 || prec < min_prec || left->is(NodeKind::Params)) break;
    const std::string op = tok_.text;
    advance();
    auto right = parse_binary(op == "**" ? prec : prec + 1, no_in);
    const bool logical = op == "&&" || op == "||" || op == "??";
    auto n = make_node(logical ? NodeKind::Logical : NodeKind::Binary, start, op);
    n->kids.push_back(std::move(left));
    n->kids.push_back(std::move(right));
    left = std::move(n);
  }
  return left;
}

NodePtr Parser::parse_unary() {
  const SourcePos start = here();
  if (tok_.kind == TokenKind::Punctuator &&
      (at("!") || at("~") || at("+") || at("-"))) {
    auto n = make_node(NodeKind::Unary, start, tok_.text);
    advance();
    n->kids.push_back(parse_unary());
    return n;
  }
  if (at("++") || at("--")) {
    auto n = make_node(NodeKind::Update, start, tok_.text);
    n->flags |= flags::Prefix;
    advance();
    n->kids.push_back(parse_unary());
    if (!valid_simple_target(n->kid(0))) throw ParseError(start, "invalid update target");
    return n;
  }
  if (at_word("typeof") || at_word("void") || at_word("delete")) {
    auto n = make_node(NodeKind::Unary, start, tok_.text);
    advance();
    n->kids.push_back(parse_unary());
    return n;
  }
  if (in_async_ && at_word("await")) {
    auto n = make_node(NodeKind::Await, start);
    advance();
    n->kids.push_back(parse_unary());
    return n;
  }
  return parse_postfix();
}

NodePtr Parser::parse_postfix() {
  const SourcePos start = here();
  auto expr = parse_lhs(true);
  if ((at("++") || at("--")) && !tok_.newline_before) {
    if (!valid_simple_target(*expr)) throw ParseError(start, "invalid update target");
    auto n = make_node(NodeKind::Update, start, tok_.text);
    advance();
    n->kids.push_back(std::move(expr));
    return n;
  }
  return expr;
}

NodePtr Parser::parse_lhs(bool allow_call) {
  const SourcePos start = here();
  if (at_word("new")) {
    advance();
    if (eat(".")) {
      auto meta = make_node(NodeKind::MetaProperty, start, "new." + take_property_name());
      return parse_call_tail(std::move(meta), allow_call);
    }
    auto n = make_node(NodeKind::New, start);
    n->kids.push_back(parse_lhs(false));
    if (at("(")) n = parse_arguments(std::move(n));
    return parse_call_tail(std::move(n), allow_call);
  }
  return parse_call_tail(parse_primary(), allow_call);
}

NodePtr Parser::parse_arguments(NodePtr call) {
  expect("(");
  while (!at(")")) {
    const SourcePos p = here();
    if (eat("...")) {
      auto spread = make_node(NodeKind::Spread, p);
      spread->kids.push_back(parse_assignment());
      call->kids.push_back(std::move(spread));
    } else {
      call->kids.push_back(parse_assignment());
    }
    if (!eat(",")) break;
  }
  expect(")");
  return call;
}

NodePtr Parser::parse_call_tail(NodePtr expr, bool allow_call) {
  while (true) {
    const SourcePos start = expr->pos;
    if (at(".")) {
      advance();
      auto m = make_node(NodeKind::Member, start, take_property_name());
      m->kids.push_back(std::move(expr));
      expr = std::move(m);
    } else if (at("?.")) {
      advance();
      if (at("(")) {
        if (!allow_call) unexpected();
        auto c = make_node(NodeKind::Call, start);
        c->flags |= flags::Optional;
        c->kids.push_back(std::move(expr));
        expr = parse_arguments(std::move(c));
      } else if (at("[")) {
        advance();
        auto ix = make_node(NodeKind::Index, start);
        ix->flags |= flags::Optional;
        ix->kids.push_back(std::move(expr));
        ix->kids.push_back(parse_expression());
        expect("]");
        expr = std::move(ix);
      } else {
        auto m = make_node(NodeKind::Member, start, take_property_name());
        m->flags |= flags::Optional;
        m->kids.push_back(std::move(expr));
        expr = std::move(m);
      }
    } else if (at("[")) {
      advance();
      auto ix = make_node(NodeKind::Index, start);
      ix->kids.push_back(std::move(expr));
      ix->kids.push_back(parse_expression());
      expect("]");
      expr = std::move(ix);
    } else if (at("(") && allow_call) {
      auto c = make_node(NodeKind::Call, start);
      c->kids.push_back(std::move(expr));
      expr = parse_arguments(std::move(c));
    } else if (tok_.kind == TokenKind::Template) {
      auto t = make_node(NodeKind::TaggedTemplate, start);
      t->kids.push_back(std::move(expr));
      t->kids.push_back(parse_template(nullptr));
      expr = std::move(t);
    } else {
      break;
    }
  }
  return expr;
}

NodePtr Parser::parse_primary() {
  const SourcePos start = here();
  switch (tok_.kind) {
    case TokenKind::Identifier: {
      if (tok_.escaped) {
        if (is_reserved(tok_)) unexpected();
        auto n = make_node(NodeKind::Identifier, start, tok_.text);
        advance();
        return n;
      }
      const std::string& w = tok_.text;
      if (w == "function") return parse_function(true, false, start);
      if (w == "async") {
        const Token next = peek_token();
        if (next.is_word("function") && !next.newline_before) {
          advance();
          return parse_function(true, true, start);
        }
      }
      if (w == "class") return parse_class(true);
      if (w == "this") {
        advance();
        return make_node(NodeKind::This, start);
      }
      if (w == "super") {
        advance();
        return make_node(NodeKind::Super, start);
      }
      if (w == "null") {
        advance();
        return make_node(NodeKind::NullLit, start);
      }
      if (w == "true" || w == "false") {
        auto n = make_node(NodeKind::BoolLit, start, w);
        advance();
        return n;
      }
      if (w == "new") return parse_lhs(false);
      if (w == "import") {
        advance();
        if (eat(".")) return make_node(NodeKind::MetaProperty, start, "import." + take_property_name());
        if (!at("(")) unexpected();
        return make_node(NodeKind::Identifier, start, "import");
      }
      if (is_reserved(tok_)) unexpected();
      auto n = make_node(NodeKind::Identifier, start, w);
      advance();
      return n;
    }
    case TokenKind::PrivateName: {
      auto n = make_node(NodeKind::PrivateName, start, tok_.text);
      advance();
      return n;
    }
    case TokenKind::Number: {
      auto n = make_node(NodeKind::NumberLit, start, tok_.text);
      n->number = tok_.number;
      advance();
      return n;
    }
    case TokenKind::BigInt: {
      auto n = make_node(NodeKind::BigIntLit, start, tok_.text);
      advance();
      return n;
    }
    case TokenKind::String: {
      auto n = make_node(NodeKind::StringLit, start, tok_.text);
      advance();
      return n;
    }
    case TokenKind::Template:
      return parse_template(nullptr);
    case TokenKind::Punctuator:
      if (at("(")) return parse_paren();
      if (at("[")) return parse_array();
      if (at("{")) return parse_object();
      if (at("/") || at("/=")) {
        tok_ = lexer_.rescan_regex(tok_);
        auto n = make_node(NodeKind::RegexLit, start, tok_.text);
        advance();
        return n;
      }
      break;
    default:
      break;
  }
  unexpected();
}

NodePtr Parser::parse_paren() {
  const SourcePos start = here();
  expect("(");
  auto arrow_only = [&](std::vector<NodePtr> items) {
    if (!at("=>")) throw ParseError(here(), "expected '=>' after parameter list");
    auto params = make_node(NodeKind::Params, start);
    for (auto& item : items) {
      if (!valid_pattern(*item) || item->is(NodeKind::Member) || item->is(NodeKind::Index))
        throw ParseError(item->pos, "invalid arrow function parameter");
      params->kids.push_back(std::move(item));
    }
    return params;
  };
  std::vector<NodePtr> items;
  if (eat(")")) return arrow_only(std::move(items));
  while (true) {
    if (at("...")) {
      items.push_back(parse_binding_element());
      expect(")");
      return arrow_only(std::move(items));
    }
    items.push_back(parse_assignment());
    if (!eat(",")) break;
    if (eat(")")) return arrow_only(std::move(items));
  }
  expect(")");
  NodePtr expr;
  if (items.size() == 1) {
    expr = std::move(items.front());
  } else {
    expr = make_node(NodeKind::Sequence, start);
    expr->kids = std::move(items);
  }
  expr->flags |= flags::Parenthesized;
  return expr;
}

NodePtr Parser::parse_array() {
  auto arr = make_node(NodeKind::ArrayLit, here());
  expect("[");
  while (!at("]")) {
    const SourcePos p = here();
    if (at(",")) {
      advance();
      arr->kids.push_back(make_node(NodeKind::Empty, p));
      continue;
    }
    if (eat("...")) {
      auto spread = make_node(NodeKind::Spread, p);
      spread->kids.push_back(parse_assignment());
      arr->kids.push_back(std::move(spread));
    } else {
      arr->kids.push_back(parse_assignment());
    }
    if (!at("]")) expect(",");
  }
  advance();
  return arr;
}

NodePtr Parser::parse_object() {
  auto obj = make_node(NodeKind::ObjectLit, here());
  expect("{");
  while (!at("}")) {
    const SourcePos start = here();
    auto prop = make_node(NodeKind::Property, start);
    if (eat("...")) {
      prop->flags |= flags::SpreadProperty;
      prop->kids.push_back(make_node(NodeKind::Empty, start));
      prop->kids.push_back(parse_assignment());
      obj->kids.push_back(std::move(prop));
      if (!at("}")) expect(",");
      continue;
    }
    auto prefix_applies = [&]() {
      const Token next = peek_token();
      return !next.is(":") && !next.is("(") && !next.is(",") && !next.is("}") && !next.is("=");
    };
    if (at_word("async") && prefix_applies() && !peek_token().newline_before) {
      advance();
      prop->flags |= flags::Async;
    }
    if (eat("*")) prop->flags |= flags::Generator;
    if ((at_word("get") || at_word("set")) && prefix_applies()) {
      prop->flags |= at_word("get") ? flags::Getter : flags::Setter;
      advance();
    }
    const bool key_is_identifier = at_binding_identifier();
    const Token key_tok = tok_;
    prop->kids.push_back(parse_property_key(*prop));
    const bool accessor = prop->has(flags::Getter) || prop->has(flags::Setter);
    if (at("(")) {
      prop->flags |= flags::Method;
      prop->kids.push_back(parse_method_value(here(), prop->flags));
    } else if (accessor || prop->has(flags::Async) || prop->has(flags::Generator)) {
      unexpected();
    } else if (eat(":")) {
      prop->kids.push_back(parse_assignment());
    } else {
      if (!key_is_identifier || prop->has(flags::Computed)) unexpected();
      prop->flags |= flags::Shorthand;
      auto ident = make_node(NodeKind::Identifier, start, key_tok.text);
      if (at("=")) {
        // Only valid as a destructuring pattern; validated by the caller.
        advance();
        auto assign = make_node(NodeKind::Assign, start, "=");
        assign->kids.push_back(std::move(ident));
        assign->kids.push_back(parse_assignment());
        prop->kids.push_back(std::move(assign));
      } else {
        prop->kids.push_back(std::move(ident));
      }
    }
    obj->kids.push_back(std::move(prop));
    if (!at("}")) expect(",");
  }
  advance();
  return obj;
}

NodePtr Parser::parse_template(NodePtr tag) {
  (void)tag;
  auto tpl = make_node(NodeKind::Template, here());
  while (true) {
    if (tok_.kind != TokenKind::Template) unexpected();
    tpl->kids.push_back(make_node(NodeKind::TemplateElement, here(), tok_.text));
    if (tok_.tail) {
      advance();
      return tpl;
    }
    advance();
    tpl->kids.push_back(parse_expression());
    if (!at("}")) unexpected();
    tok_ = lexer_.rescan_template(tok_);
  }
}

}  // namespace webreq::js

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "webreq/js/parse_error.hpp"
#include "webreq/source.hpp"

namespace webreq::js {

enum class TokenKind : std::uint8_t {
  End,
  Identifier,   // identifiers and reserved words alike; text holds the name
  PrivateName,  // #name
  Punctuator,
  String,       // text holds the cooked value
  Number,
  BigInt,
  Template,     // one template chunk; `tail` set when it ends the literal
  Regex,
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  double number = 0.0;
  std::size_t start = 0;
  std::size_t end = 0;
  bool newline_before = false;
  bool tail = false;     // Template: chunk ended with '`' rather than '${'
  bool escaped = false;  // Identifier: contained a unicode escape

  bool is(std::string_view punct) const noexcept {
    return kind == TokenKind::Punctuator && text == punct;
  }
  bool is_word(std::string_view word) const noexcept {
    return kind == TokenKind::Identifier && !escaped && text == word;
  }
};

/// On-demand tokenizer. The parser decides where `/` starts a regular
/// expression and where a `}` resumes a template literal, so the lexer
/// exposes rescanning entry points instead of guessing from context.
class Lexer {
 public:
  explicit Lexer(const SourceFile& file);

  Token next();

  /// Re-lexes the `/` or `/=` token starting at `start` as a regex literal.
  Token rescan_regex(const Token& slash);
  /// Re-lexes from the `}` at `close.start` as a template continuation.
  Token rescan_template(const Token& close);

  struct State {
    std::size_t pos;
  };
  State save() const noexcept { return {pos_}; }
  void restore(State s) noexcept { pos_ = s.pos; }

  [[noreturn]] void fail(std::size_t offset, const std::string& message) const;

 private:
  bool skip_trivia();
  Token lex_identifier(std::size_t start, bool private_name);
  Token lex_number(std::size_t start);
  Token lex_string(std::size_t start, char quote);
  Token lex_template_chunk(std::size_t start);
  Token lex_punctuator(std::size_t start);
  std::uint32_t read_escape_code_point(std::size_t& i, bool in_template);
  void read_escape(std::string& out, bool in_template);

  char peek(std::size_t ahead = 0) const noexcept {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  const SourceFile& file_;
  std::string_view src_;
  std::size_t pos_ = 0;
};

void append_utf8(std::string& out, std::uint32_t code_point);

}  // namespace webreq::js

// SPDX-License-Identifier: Apache-2.0
#include "webreq/js/lexer.hpp"

#include <array>
#include <cmath>
#include <cstdlib>

namespace webreq::js {

namespace {

bool is_ident_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '$' || c == '_' || c >= 0x80;
}

bool is_ident_part(unsigned char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

bool is_digit(char c) { return c >= '0' && c <= '9'; }

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

// Longest punctuators first so that a linear scan finds the maximal munch.
constexpr std::array<std::string_view, 54> kPunctuators = {
    ">>>=", "...", "===", "!==", "**=", "<<=", ">>=", ">>>", "&&=", "||=", "?\?=",
    "=>",   "==",  "!=",  "<=",  ">=",  "&&",  "||",  "??",  "?.",  "++",  "--",
    "+=",   "-=",  "*=",  "/=",  "%=",  "&=",  "|=",  "^=",  "**",  "<<",  ">>",
    "{",    "}",   "(",   ")",   "[",   "]",   ";",   ",",   "<",   ">",   "+",
    "-",    "*",   "/",   "%",   "&",   "|",   "^",   "!",   "~",   "?"};

constexpr std::array<std::string_view, 4> kTailPunctuators = {":", "=", ".", "@"};

}  // namespace

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

Lexer::Lexer(const SourceFile& file) : file_(file), src_(file.text()) {
  if (src_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
  if (src_.substr(pos_, 2) == "#!") {
    while (pos_ < src_.size() && src_[pos_] != '\n' && src_[pos_] != '\r') ++pos_;
  }
}

void Lexer::fail(std::size_t offset, const std::string& message) const {
  throw ParseError(file_.position(offset), message);
}

bool Lexer::skip_trivia() {
  bool newline = false;
  while (pos_ < src_.size()) {
    const char c = src_[pos_];
    if (c == '\n' || c == '\r') {
      newline = true;
      ++pos_;
    } else if (c == ' ' || c == '\t' || c == '\v' || c == '\f') {
      ++pos_;
    } else if (c == '/' && peek(1) == '/') {
      while (pos_ < src_.size() && src_[pos_] != '\n' && src_[pos_] != '\r') ++pos_;
    } else if (c == '/' && peek(1) == '*') {
      const std::size_t start = pos_;
      const auto close = src_.find("*/", pos_ + 2);
      if (close == std::string_view::npos) fail(start, "unterminated comment");
      for (std::size_t i = pos_; i < close; ++i) {
        if (src_[i] == '\n' || src_[i] == '\r') newline = true;
      }
      pos_ = close + 2;
    } else if (static_cast<unsigned char>(c) == 0xC2 && static_cast<unsigned char>(peek(1)) == 0xA0) {
      pos_ += 2;  // no-break space
    } else if (static_cast<unsigned char>(c) == 0xEF && static_cast<unsigned char>(peek(1)) == 0xBB &&
               static_cast<unsigned char>(peek(2)) == 0xBF) {
      pos_ += 3;  // stray BOM
    } else if (static_cast<unsigned char>(c) == 0xE2 && static_cast<unsigned char>(peek(1)) == 0x80 &&
               (static_cast<unsigned char>(peek(2)) == 0xA8 ||
                static_cast<unsigned char>(peek(2)) == 0xA9)) {
      newline = true;  // U+2028 / U+2029
      pos_ += 3;
    } else if (c == '<' && src_.substr(pos_, 4) == "<!--") {
      while (pos_ < src_.size() && src_[pos_] != '\n' && src_[pos_] != '\r') ++pos_;
    } else if (c == '-' && newline && src_.substr(pos_, 3) == "-->") {
      while (pos_ < src_.size() && src_[pos_] != '\n' && src_[pos_] != '\r') ++pos_;
    } else {
      break;
    }
  }
  return newline;
}

Token Lexer::next() {
  const bool newline = skip_trivia();
  Token tok;
  const std::size_t start = pos_;
  if (pos_ >= src_.size()) {
    tok.kind = TokenKind::End;
    tok.start = tok.end = pos_;
  } else {
    const auto c = static_cast<unsigned char>(src_[pos_]);
    if (is_ident_start(c) || (c == '\\' && peek(1) == 'u')) {
      tok = lex_identifier(start, false);
    } else if (c == '#') {
      ++pos_;
      tok = lex_identifier(start, true);
    } else if (is_digit(static_cast<char>(c)) || (c == '.' && is_digit(peek(1)))) {
      tok = lex_number(start);
    } else if (c == '"' || c == '\'') {
      tok = lex_string(start, static_cast<char>(c));
    } else if (c == '`') {
      ++pos_;
      tok = lex_template_chunk(start);
    } else {
      tok = lex_punctuator(start);
    }
  }
  tok.newline_before = newline;
  return tok;
}

Token Lexer::lex_identifier(std::size_t start, bool private_name) {
  Token tok;
  tok.kind = private_name ? TokenKind::PrivateName : TokenKind::Identifier;
  std::string name;
  bool first = true;
  while (pos_ < src_.size()) {
    const auto c = static_cast<unsigned char>(src_[pos_]);
    if (c == '\\') {
      if (peek(1) != 'u') fail(pos_, "invalid escape in identifier");
      pos_ += 2;
      std::size_t i = pos_;
      append_utf8(name, read_escape_code_point(i, false));
      pos_ = i;
      tok.escaped = true;
    } else if (first ? is_ident_start(c) : is_ident_part(c)) {
      // Multi-byte sequences that are whitespace or line terminators end the name.
      if (c == 0xC2 && static_cast<unsigned char>(peek(1)) == 0xA0) break;
      if (c == 0xE2 && static_cast<unsigned char>(peek(1)) == 0x80 &&
          (static_cast<unsigned char>(peek(2)) == 0xA8 || static_cast<unsigned char>(peek(2)) == 0xA9))
        break;
      name.push_back(static_cast<char>(c));
      ++pos_;
    } else {
      break;
    }
    first = false;
  }
  if (name.empty()) fail(start, "invalid identifier");
  tok.text = std::move(name);
  tok.start = start;
  tok.end = pos_;
  return tok;
}

Token Lexer::lex_number(std::size_t start) {
  Token tok;
  tok.kind = TokenKind::Number;
  auto digits = [&](auto accept) {
    std::string out;
    while (pos_ < src_.size() && (accept(src_[pos_]) || src_[pos_] == '_')) {
      if (src_[pos_] != '_') out.push_back(src_[pos_]);
      ++pos_;
    }
    return out;
  };
  auto radix = [&](int base) {
    pos_ += 2;
    const std::string ds = digits([&](char ch) {
      const int v = hex_value(ch);
      return v >= 0 && v < base;
    });
    if (ds.empty()) fail(start, "missing digits in numeric literal");
    double value = 0;
    for (char ch : ds) value = value * base + hex_value(ch);
    return value;
  };

  const char c0 = src_[pos_];
  const char c1 = peek(1);
  if (c0 == '0' && (c1 == 'x' || c1 == 'X')) {
    tok.number = radix(16);
  } else if (c0 == '0' && (c1 == 'o' || c1 == 'O')) {
    tok.number = radix(8);
  } else if (c0 == '0' && (c1 == 'b' || c1 == 'B')) {
    tok.number = radix(2);
  } else {
    std::string text = digits(is_digit);
    bool legacy_octal = text.size() > 1 && text[0] == '0';
    for (char ch : text) legacy_octal = legacy_octal && ch < '8';
    if (legacy_octal) {
      double value = 0;
      for (char ch : text) value = value * 8 + (ch - '0');
      tok.number = value;
    } else {
      if (peek() == '.') {
        ++pos_;
        text += '.';
        text += digits(is_digit);
      }
      if (peek() == 'e' || peek() == 'E') {
        const std::size_t save = pos_;
        ++pos_;
        std::string exp = "e";
        if (peek() == '+' || peek() == '-') exp += src_[pos_++];
        const std::string ds = digits(is_digit);
        if (ds.empty()) {
          pos_ = save;
          fail(start, "malformed exponent");
        }
        text += exp + ds;
      }
      tok.number = std::strtod(text.c_str(), nullptr);
    }
  }
  if (peek() == 'n') {
    ++pos_;
    tok.kind = TokenKind::BigInt;
  }
  if (pos_ < src_.size() && is_ident_start(static_cast<unsigned char>(src_[pos_])))
    fail(pos_, "identifier directly after number");
  tok.start = start;
  tok.end = pos_;
  tok.text = std::string(src_.substr(start, pos_ - start));
  return tok;
}

std::uint32_t Lexer::read_escape_code_point(std::size_t& i, bool in_template) {
  auto bad = [&]() -> std::uint32_t {
    if (in_template) return 0xFFFD;
    fail(i, "malformed unicode escape");
  };
  if (i < src_.size() && src_[i] == '{') {
    ++i;
    std::uint32_t cp = 0;
    bool any = false;
    while (i < src_.size() && src_[i] != '}') {
      const int v = hex_value(src_[i]);
      if (v < 0) return bad();
      cp = cp * 16 + static_cast<std::uint32_t>(v);
      if (cp > 0x10FFFF) return bad();
      any = true;
      ++i;
    }
    if (i >= src_.size() || !any) return bad();
    ++i;
    return cp;
  }
  std::uint32_t cp = 0;
  for (int k = 0; k < 4; ++k) {
    if (i >= src_.size()) return bad();
    const int v = hex_value(src_[i]);
    if (v < 0) return bad();
    cp = cp * 16 + static_cast<std::uint32_t>(v);
    ++i;
  }
  return cp;
}

void Lexer::read_escape(std::string& out, bool in_template) {
  // pos_ points just past the backslash.
  if (pos_ >= src_.size()) fail(pos_, "unterminated escape");
  const char c = src_[pos_++];
  switch (c) {
    case 'n': out.push_back('\n'); return;
    case 't': out.push_back('\t'); return;
    case 'r': out.push_back('\r'); return;
    case 'b': out.push_back('\b'); return;
    case 'f': out.push_back('\f'); return;
    case 'v': out.push_back('\v'); return;
    case '\r':
      if (peek() == '\n') ++pos_;
      return;
    case '\n':
      return;
    case 'x': {
      const int hi = hex_value(peek());
      const int lo = hex_value(peek(1));
      if (hi < 0 || lo < 0) {
        if (in_template) return;
        fail(pos_, "malformed hex escape");
      }
      pos_ += 2;
      append_utf8(out, static_cast<std::uint32_t>(hi * 16 + lo));
      return;
    }
    case 'u': {
      std::size_t i = pos_;
      std::uint32_t cp = read_escape_code_point(i, in_template);
      pos_ = i;
      if (cp >= 0xD800 && cp <= 0xDBFF && peek() == '\\' && peek(1) == 'u') {
        std::size_t j = pos_ + 2;
        const std::uint32_t low = read_escape_code_point(j, true);
        if (low >= 0xDC00 && low <= 0xDFFF) {
          cp = 0x10000 + ((cp - 0xD800) << 10) + (low - 0xDC00);
          pos_ = j;
        }
      }
      append_utf8(out, cp);
      return;
    }
    default:
      if (c >= '0' && c <= '7') {
        // Legacy octal escape (sloppy mode); \0 alone is NUL.
        std::uint32_t value = static_cast<std::uint32_t>(c - '0');
        int max_more = c <= '3' ? 2 : 1;
        while (max_more-- > 0 && peek() >= '0' && peek() <= '7') {
          value = value * 8 + static_cast<std::uint32_t>(src_[pos_++] - '0');
        }
        append_utf8(out, value);
        return;
      }
      out.push_back(c);
      return;
  }
}

Token Lexer::lex_string(std::size_t start, char quote) {
  Token tok;
  tok.kind = TokenKind::String;
  ++pos_;
  std::string value;
  while (true) {
    if (pos_ >= src_.size()) fail(start, "unterminated string literal");
    const char c = src_[pos_];
    if (c == quote) {
      ++pos_;
      break;
    }
    if (c == '\n' || c == '\r') fail(pos_, "newline in string literal");
    if (c == '\\') {
      ++pos_;
      read_escape(value, false);
      continue;
    }
    value.push_back(c);
    ++pos_;
  }
  tok.text = std::move(value);
  tok.start = start;
  tok.end = pos_;
  return tok;
}

Token Lexer::lex_template_chunk(std::size_t start) {
  // pos_ is just past the opening '`' or the closing '}' of a substitution.
  Token tok;
  tok.kind = TokenKind::Template;
  std::string value;
  while (true) {
    if (pos_ >= src_.size()) fail(start, "unterminated template literal");
    const char c = src_[pos_];
    if (c == '`') {
      ++pos_;
      tok.tail = true;
      break;
    }
    if (c == '$' && peek(1) == '{') {
      pos_ += 2;
      tok.tail = false;
      break;
    }
    if (c == '\\') {
      ++pos_;
      read_escape(value, true);
      continue;
    }
    if (c == '\r') {
      // Template literals normalise CRLF and CR to LF.
      value.push_back('\n');
      ++pos_;
      if (peek() == '\n') ++pos_;
      continue;
    }
    value.push_back(c);
    ++pos_;
  }
  tok.text = std::move(value);
  tok.start = start;
  tok.end = pos_;
  return tok;
}

Token Lexer::lex_punctuator(std::size_t start) {
  const std::string_view rest = src_.substr(pos_);
  auto emit = [&](std::string_view p) {
    Token tok;
    tok.kind = TokenKind::Punctuator;
    tok.text = std::string(p);
    pos_ += p.size();
    tok.start = start;
    tok.end = pos_;
    return tok;
  };
  for (std::string_view p : kPunctuators) {
    if (rest.substr(0, p.size()) == p) {
      if (p == "?." && rest.size() > 2 && is_digit(rest[2])) continue;
      return emit(p);
    }
  }
  for (std::string_view p : kTailPunctuators) {
    if (rest.substr(0, p.size()) == p) return emit(p);
  }
  fail(start, std::string("unexpected character '") + rest.front() + "'");
}

Token Lexer::rescan_regex(const Token& slash) {
  pos_ = slash.start + 1;
  bool in_class = false;
  while (true) {
    if (pos_ >= src_.size()) fail(slash.start, "unterminated regular expression");
    const char c = src_[pos_];
    if (c == '\n' || c == '\r') fail(pos_, "newline in regular expression");
    ++pos_;
    if (c == '\\') {
      if (pos_ >= src_.size()) fail(slash.start, "unterminated regular expression");
      ++pos_;
    } else if (c == '[') {
      in_class = true;
    } else if (c == ']') {
      in_class = false;
    } else if (c == '/' && !in_class) {
      break;
    }
  }
  while (pos_ < src_.size() && is_ident_part(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  Token tok;
  tok.kind = TokenKind::Regex;
  tok.text = std::string(src_.substr(slash.start, pos_ - slash.start));
  tok.start = slash.start;
  tok.end = pos_;
  tok.newline_before = slash.newline_before;
  return tok;
}

Token Lexer::rescan_template(const Token& close) {
  pos_ = close.start + 1;
  Token tok = lex_template_chunk(close.start);
  tok.newline_before = close.newline_before;
  return tok;
}

}  // namespace webreq::js

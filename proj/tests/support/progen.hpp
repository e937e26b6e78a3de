// SPDX-License-Identifier: Apache-2.0
// Random straight-line/branching JavaScript programs that build request URLs
// from literals, plus a reference interpreter that enumerates every
// valuation of the branch conditions. Independent of the library: programs
// are generated as a tiny tree and printed, never parsed.
#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace progen {

struct Expr {
  enum class Kind { Lit, Num, Var, Concat, Call, EncodeUri, Template, Substring, Ternary };
  Kind kind = Kind::Lit;
  std::string text;  // literal text, variable or function name
  int cond = -1;     // Ternary
  int from = 0;      // Substring
  int to = 0;
  std::vector<Expr> kids;
};

struct Stmt {
  enum class Kind { Var, Assign, Append, If, Request };
  Kind kind = Kind::Var;
  std::string name;
  Expr value;
  int cond = -1;
  std::vector<Stmt> then_body;
  std::vector<Stmt> else_body;
};

struct Function {
  std::string name;
  std::vector<std::string> params;
  std::vector<Stmt> body;
  Expr result;
};

struct Program {
  std::vector<std::pair<std::string, Expr>> globals;
  std::vector<Function> helpers;
  // When true, Request statements call `send(url)`, which issues the
  // request; otherwise they issue it directly.
  bool via_sender = false;
  std::vector<Stmt> main;
  std::string request_form;  // "ajax", "get" or "post"
  int conditions = 0;              // number of distinct condition ids
  int branch_sites = 0;

  std::string to_js() const;
};

struct Options {
  int max_branch_sites = 4;
  int max_functions = 3;
  bool correlated = false;  // reuse condition ids across branch sites
  // Programs whose path-insensitive value bound exceeds this are resampled.
  double max_value_bound = 64;
};

Program generate(std::uint64_t seed, const Options& options = {});

/// Upper bound on the URL values a path-insensitive analysis may derive:
/// branch alternatives add, concatenations multiply.
double path_insensitive_bound(const Program& program);

/// Every URL observed over all 2^conditions valuations.
std::set<std::string> enumerate_urls(const Program& program);

/// encodeURI as specified by ECMAScript, for ASCII input.
std::string reference_encode_uri(const std::string& s);

}  // namespace progen

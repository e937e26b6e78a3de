// SPDX-License-Identifier: Apache-2.0
// Sanity checks for the test-side program generator and interpreter.
#include <gtest/gtest.h>

#include "progen.hpp"

namespace progen {
namespace {

int count(const std::string& s, const std::string& needle) {
  int n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

TEST(Progen, RespectsLimits) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    for (bool correlated : {false, true}) {
      Options o;
      o.correlated = correlated;
      Program p = generate(seed, o);
      EXPECT_LE(p.branch_sites, 4);
      EXPECT_LE(p.conditions, p.branch_sites);
      const std::string js = p.to_js();
      EXPECT_EQ(count(js, "cond("), p.branch_sites) << js;
      EXPECT_LE(count(js, "function "), 3) << js;
    }
  }
}

TEST(Progen, Deterministic) { EXPECT_EQ(generate(42).to_js(), generate(42).to_js()); }

TEST(Progen, InterpreterBranches) {
  Program p;
  p.request_form = "get";
  Stmt v;
  v.kind = Stmt::Kind::Var;
  v.name = "v0";
  v.value.text = "https://a.test/";
  Stmt b;
  b.kind = Stmt::Kind::If;
  b.cond = 0;
  Stmt append;
  append.kind = Stmt::Kind::Append;
  append.name = "v0";
  append.value.text = "x";
  b.then_body.push_back(append);
  Stmt req;
  req.kind = Stmt::Kind::Request;
  req.value.kind = Expr::Kind::Var;
  req.value.text = "v0";
  p.main = {v, b, req};
  p.conditions = 1;
  EXPECT_EQ(enumerate_urls(p), (std::set<std::string>{"https://a.test/", "https://a.test/x"}));
}

TEST(Progen, ReferenceEncodeUri) {
  EXPECT_EQ(reference_encode_uri("a b%/?#"), "a%20b%25/?#");
  EXPECT_EQ(reference_encode_uri("caf\xC3\xA9"), "caf%C3%A9");
}

}  // namespace
}  // namespace progen

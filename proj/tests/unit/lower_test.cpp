// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "testing.hpp"

namespace webreq {
namespace {

using testing::lower_text;

template <typename T>
std::vector<const Instr*> find_ops(const ScriptIR& ir) {
  std::vector<const Instr*> out;
  for (const Instr& in : ir.instrs) {
    if (in.as<T>()) out.push_back(&in);
  }
  return out;
}

VarId var_named(const ScriptIR& ir, const std::string& name) {
  for (VarId v = 0; v < ir.vars.size(); ++v) {
    if (ir.vars[v].name == name) return v;
  }
  return kNoVar;
}

TEST(Lower, EmptyFileHasTopFunction) {
  ScriptIR ir = lower_text("");
  ASSERT_EQ(ir.functions.size(), 1u);
  EXPECT_EQ(ir.functions[0].name, "<top>");
}

TEST(Lower, ConcatOfLiteralAndRead) {
  ScriptIR ir = lower_text("var u = \"a\" + b;");
  auto concats = find_ops<op::Concat>(ir);
  ASSERT_EQ(concats.size(), 1u);
  const op::Concat& c = *concats[0]->as<op::Concat>();
  EXPECT_EQ(c.rhs, var_named(ir, "b"));
  bool lhs_is_a = false;
  for (const Instr& in : ir.instrs) {
    if (in.target == c.lhs) {
      if (auto k = in.as<op::Const>()) lhs_is_a = k->value.kind == ConstValue::Kind::String && k->value.text == "a";
    }
  }
  EXPECT_TRUE(lhs_is_a);
  // The concat result is assigned to u.
  bool assigned = false;
  for (const Instr& in : ir.instrs) {
    auto copy = in.as<op::Copy>();
    if (copy && copy->src == concats[0]->target && in.target == var_named(ir, "u")) assigned = true;
  }
  EXPECT_TRUE(assigned);
}

TEST(Lower, TemplateLiteralParts) {
  ScriptIR ir = lower_text("var u = `x${y}z`;");
  auto templates = find_ops<op::Template>(ir);
  ASSERT_EQ(templates.size(), 1u);
  const auto& parts = templates[0]->as<op::Template>()->parts;
  ASSERT_EQ(parts.size(), 3u);
  EXPECT_EQ(std::get<std::string>(parts[0]), "x");
  EXPECT_EQ(std::get<VarId>(parts[1]), var_named(ir, "y"));
  EXPECT_EQ(std::get<std::string>(parts[2]), "z");
}

TEST(Lower, EvalIsOpaqueWritingEverything) {
  ScriptIR ir = lower_text("function f(s) { var a = 'x'; eval(s); return a; }");
  auto opaque = find_ops<op::Opaque>(ir);
  ASSERT_EQ(opaque.size(), 1u);
  const op::Opaque& o = *opaque[0]->as<op::Opaque>();
  EXPECT_TRUE(o.writes_all);
  EXPECT_NE(std::find(o.reads.begin(), o.reads.end(), var_named(ir, "s")), o.reads.end());
}

TEST(Lower, ValueAfterEvalIsSymbolic) {
  auto result = testing::extract_text("function f(s) { var a = 'https://x.test/a'; eval(s); $.get(a); }");
  ASSERT_EQ(result.descriptors.size(), 1u);
  // eval may or may not overwrite `a`: the union holds both.
  EXPECT_EQ(testing::rendered(result.descriptors[0].urls), (std::vector<std::string>{"https://x.test/a", "{a}"}));
}

TEST(Lower, CallPositionsMatchSource) {
  ScriptIR ir = lower_text("var a = 1;\n\nfoo(a,\n  b);\n  x.y.z();\n");
  std::vector<int> lines;
  for (const Instr* in : find_ops<op::Call>(ir)) lines.push_back(in->pos.line);
  EXPECT_EQ(lines, (std::vector<int>{3, 5}));
}

TEST(Lower, EveryInstructionBelongsToOneFunction) {
  ScriptIR ir = lower_text("function a(x){ if (x) { return function(){ return x; }; } }\nvar b = () => a(1);");
  std::vector<int> seen(ir.instrs.size(), 0);
  for (const IrFunction& f : ir.functions) {
    for (const BasicBlock& b : f.blocks) {
      for (InstrId id : b.instrs) {
        ++seen.at(id);
        EXPECT_EQ(ir.instr(id).fn, f.id);
      }
    }
  }
  for (int n : seen) EXPECT_EQ(n, 1);
  // Parent links are acyclic.
  for (const IrFunction& f : ir.functions) {
    std::size_t steps = 0;
    for (auto p = f.parent; p; p = ir.function(*p).parent) ASSERT_LT(++steps, ir.functions.size());
  }
}

TEST(Lower, Determinism) {
  const char* text = "function g(a){ var o = {k: a, n: [1, 'b']}; o.k += '/x'; return o; }\n$.ajax(g('u'));";
  EXPECT_EQ(dump(lower_text(text)), dump(lower_text(text)));
}

TEST(Lower, UnsupportedConstructsBecomeOpaque) {
  ScriptIR ir = lower_text("with (o) { x = y; }\nvar {a, b} = obj;\nfor (var k in o) { s += k; }");
  EXPECT_FALSE(find_ops<op::Opaque>(ir).empty());
}

}  // namespace
}  // namespace webreq

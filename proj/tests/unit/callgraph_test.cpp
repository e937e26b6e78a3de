// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <set>

#include "testing.hpp"

namespace webreq {
namespace {

std::vector<InstrId> calls_on_line(const CallGraph& g, int line) {
  std::vector<InstrId> out;
  for (const Instr& in : g.ir().instrs) {
    if (in.as<op::Call>() && in.pos.line == line) out.push_back(in.id);
  }
  return out;
}

std::set<std::string> callee_names(const CallGraph& g, InstrId call) {
  std::set<std::string> out;
  for (FuncId f : g.callees(call)) out.insert(g.ir().function(f).name);
  return out;
}

FuncId function_named(const CallGraph& g, const std::string& name) {
  for (const IrFunction& f : g.ir().functions) {
    if (f.name == name) return f.id;
  }
  throw std::runtime_error("no function " + name);
}

TEST(CallGraph, DirectCall) {
  CallGraph g = testing::graph_of("function g(){}\ng();");
  auto calls = calls_on_line(g, 2);
  ASSERT_EQ(calls.size(), 1u);
  EXPECT_EQ(callee_names(g, calls[0]), (std::set<std::string>{"g"}));
}

TEST(CallGraph, FieldBasedCollapse) {
  // At runtime only `a` is called; the field-based graph over-approximates.
  CallGraph g = testing::graph_of(
      "var o={}; o.h=function a(){}; var p={}; p.h=function b(){};\n"
      "o.h();");
  auto calls = calls_on_line(g, 2);
  ASSERT_EQ(calls.size(), 1u);
  EXPECT_EQ(callee_names(g, calls[0]), (std::set<std::string>{"a", "b"}));
}

TEST(CallGraph, FieldBasedAcrossObjectLiterals) {
  CallGraph g = testing::graph_of(
      "var o = {run: function x(){}};\n"
      "var q = {}; q.run = function y(){};\n"
      "var r = {other: function z(){}};\n"
      "anything.run();");
  auto calls = calls_on_line(g, 4);
  ASSERT_EQ(calls.size(), 1u);
  EXPECT_EQ(callee_names(g, calls[0]), (std::set<std::string>{"x", "y"}));
}

TEST(CallGraph, ExternalCalleeIsEmpty) {
  CallGraph g = testing::graph_of("jQuery.ajax({url: 'x'});\n$.get('y');");
  for (InstrId c : calls_on_line(g, 1)) EXPECT_TRUE(g.callees(c).empty());
  for (InstrId c : calls_on_line(g, 2)) EXPECT_TRUE(g.callees(c).empty());
}

TEST(CallGraph, MapsEngineEdgeAndParameterFlow) {
  const std::string text =
      testing::read_file(testing::source_dir() / "corpus/js/fig1_mapsengine.js");
  CallGraph g(testing::lower_text(text));
  const FuncId send = function_named(g, "sendRequest");
  const FuncId update = function_named(g, "updateLocation");
  ASSERT_EQ(g.callers(send).size(), 1u);
  const Instr& call = g.ir().instr(g.callers(send)[0]);
  EXPECT_EQ(call.fn, update);
  // The first argument is the variable `url` of updateLocation.
  const op::Call& c = *call.as<op::Call>();
  ASSERT_GE(c.args.size(), 1u);
  bool from_url = false;
  for (InstrId d : g.reaching_defs(call.id, c.args[0])) {
    auto copy = g.ir().instr(d).as<op::Copy>();
    from_url |= g.ir().var(c.args[0]).name == "url" || (copy && g.ir().var(copy->src).name == "url");
  }
  EXPECT_TRUE(from_url);
}

TEST(CallGraph, EveryFunctionIsANodeAndEdgesAreValid) {
  CallGraph g = testing::graph_of(
      "function a(){ b(); }\nfunction b(){ return function(){ a(); }; }\nvar c = () => b()();\nunused.call();");
  std::size_t edges = 0;
  for (const Instr& in : g.ir().instrs) {
    if (!in.as<op::Call>()) continue;
    for (FuncId f : g.callees(in.id)) {
      ASSERT_LT(f, g.ir().functions.size());
      const auto& callers = g.callers(f);
      EXPECT_TRUE(std::binary_search(callers.begin(), callers.end(), in.id));
      ++edges;
    }
  }
  EXPECT_EQ(edges, g.edge_count());
  for (const IrFunction& f : g.ir().functions) EXPECT_NO_THROW(g.callers(f.id));
}

TEST(CallGraph, ReturnsFlowToCaller) {
  auto r = testing::extract_text("function base(){ return 'https://h.test'; }\n$.get(base() + '/p');");
  ASSERT_EQ(r.descriptors.size(), 1u);
  EXPECT_EQ(testing::rendered(r.descriptors[0].urls), (std::vector<std::string>{"https://h.test/p"}));
}

TEST(CallGraph, CallAndApplyShiftArguments) {
  auto r = testing::extract_text(
      "function s(u){ $.get(u); }\ns.call(null, 'https://a.test/x');\ns('https://a.test/y');");
  ASSERT_EQ(r.descriptors.size(), 1u);
  EXPECT_EQ(testing::rendered(r.descriptors[0].urls),
            (std::vector<std::string>{"https://a.test/x", "https://a.test/y"}));
}

}  // namespace
}  // namespace webreq

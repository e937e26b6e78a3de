// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "webreq/js/ast.hpp"
#include "webreq/source.hpp"

namespace webreq {

using VarId = std::uint32_t;
using InstrId = std::uint32_t;
using FuncId = std::uint32_t;
using BlockId = std::uint32_t;

inline constexpr VarId kNoVar = std::numeric_limits<VarId>::max();

enum class VarKind : std::uint8_t { Local, Param, Temp, Global };

struct VarInfo {
  std::string name;  // source name; temporaries are named "%N"
  FuncId owner = 0;
  VarKind kind = VarKind::Temp;
  int decl_line = 0;
};

struct ConstValue {
  enum class Kind : std::uint8_t { String, Number, Bool, Null, Undefined, Regex };
  Kind kind = Kind::Undefined;
  std::string text;  // String and Regex
  double number = 0.0;
  bool boolean = false;
};

namespace op {

struct Copy {
  VarId src;
};
struct Const {
  ConstValue value;
};
// Template literal: literal chunks interleaved with substituted values.
struct Template {
  std::vector<std::variant<std::string, VarId>> parts;
};
// Binary `+`, including the `+=` compound form.
struct Concat {
  VarId lhs;
  VarId rhs;
};
struct Call {
  VarId callee;
  VarId receiver = kNoVar;  // set for `obj.m(...)`
  std::string method;       // `m` for `obj.m(...)`
  std::vector<VarId> args;
  bool is_new = false;
  bool has_spread = false;
};
struct PropRead {
  VarId object;
  std::string name;
};
// Has no target.
struct PropWrite {
  VarId object;
  std::string name;
  VarId value;
};
struct ObjectLit {
  std::vector<std::pair<std::string, VarId>> props;
  bool dynamic = false;  // computed keys or spread properties present
};
struct ArrayLit {
  std::vector<VarId> elems;
  bool dynamic = false;  // holes or spread elements present
};
struct Closure {
  FuncId fn;
};
// Has no target.
struct Return {
  VarId value;  // kNoVar for a bare `return`
};
struct Param {
  std::uint32_t index;
};
// Anything without a dedicated model. `writes_all` marks constructs such as
// `eval` or `with` that may assign any variable.
struct Opaque {
  std::vector<VarId> reads;
  std::vector<VarId> writes;
  bool writes_all = false;
  std::string hint;
};

}  // namespace op

using Op = std::variant<op::Copy, op::Const, op::Template, op::Concat, op::Call, op::PropRead,
                        op::PropWrite, op::ObjectLit, op::ArrayLit, op::Closure, op::Return,
                        op::Param, op::Opaque>;

struct Instr {
  InstrId id = 0;
  Op op;
  VarId target = kNoVar;
  SourcePos pos;
  FuncId fn = 0;
  BlockId block = 0;

  template <typename T>
  const T* as() const noexcept {
    return std::get_if<T>(&op);
  }
};

struct BasicBlock {
  std::vector<InstrId> instrs;
  std::vector<BlockId> succs;
  // Block that receives control if an instruction here throws.
  std::optional<BlockId> handler;
};

struct IrFunction {
  FuncId id = 0;
  std::string name;  // empty for anonymous functions; "<top>" for the script body
  SourcePos pos;
  std::optional<FuncId> parent;
  std::vector<VarId> params;
  std::vector<BasicBlock> blocks;  // block 0 is the entry
};

/// Lowered form of one script. The script body is function 0.
struct ScriptIR {
  std::string path;
  std::vector<IrFunction> functions;
  std::vector<Instr> instrs;
  std::vector<VarInfo> vars;

  const Instr& instr(InstrId id) const { return instrs.at(id); }
  const VarInfo& var(VarId id) const { return vars.at(id); }
  const IrFunction& function(FuncId id) const { return functions.at(id); }
};

/// Vars an instruction reads, in operand order.
std::vector<VarId> operands(const Instr& instr);

/// Vars an instruction may define (target plus opaque writes).
std::vector<VarId> defined_vars(const Instr& instr);

/// Translates a parsed script into IR.
ScriptIR lower(const js::Ast& ast, std::string path);

/// Human-readable listing for debugging and tests.
std::string dump(const ScriptIR& ir);

}  // namespace webreq

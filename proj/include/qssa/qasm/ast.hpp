// Copyright 2026 The QSSA Contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "qssa/support/error.hpp"

namespace qssa::qasm {

/// Reference to one qubit: register element `name[index]`. Whole-register
/// gate application is desugared to element-wise statements at parse time,
/// so indices are always concrete in executable statements.
struct QubitRef {
  std::string reg;
  uint32_t index = 0;
  bool operator==(const QubitRef &) const = default;
};

struct BitRef {
  std::string reg;
  uint32_t index = 0;
  bool operator==(const BitRef &) const = default;
};

/// Angle expression over a gate definition's formal parameters. Top-level
/// applications carry already-evaluated doubles; expression trees only
/// survive inside gate bodies.
struct ParamExpr;
using ParamExprPtr = std::shared_ptr<const ParamExpr>;

struct ParamExpr {
  enum class Kind { Num, Pi, Param, Add, Sub, Mul, Div, Neg };

  Kind kind = Kind::Num;
  double num = 0.0;      // Kind::Num
  uint32_t param = 0;    // Kind::Param, index into formal parameter list
  ParamExprPtr lhs, rhs; // binary ops; Neg uses lhs only

  static ParamExprPtr number(double v) {
    auto e = std::make_shared<ParamExpr>();
    e->kind = Kind::Num;
    e->num = v;
    return e;
  }
  static ParamExprPtr pi() {
    auto e = std::make_shared<ParamExpr>();
    e->kind = Kind::Pi;
    return e;
  }
  static ParamExprPtr param_ref(uint32_t idx) {
    auto e = std::make_shared<ParamExpr>();
    e->kind = Kind::Param;
    e->param = idx;
    return e;
  }
  static ParamExprPtr binary(Kind k, ParamExprPtr l, ParamExprPtr r) {
    auto e = std::make_shared<ParamExpr>();
    e->kind = k;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
  }
  static ParamExprPtr neg(ParamExprPtr inner) {
    auto e = std::make_shared<ParamExpr>();
    e->kind = Kind::Neg;
    e->lhs = std::move(inner);
    return e;
  }

  double eval(const std::vector<double> &args) const {
    switch (kind) {
    case Kind::Num: return num;
    case Kind::Pi: return 3.14159265358979323846;
    case Kind::Param: return args.at(param);
    case Kind::Add: return lhs->eval(args) + rhs->eval(args);
    case Kind::Sub: return lhs->eval(args) - rhs->eval(args);
    case Kind::Mul: return lhs->eval(args) * rhs->eval(args);
    case Kind::Div: return lhs->eval(args) / rhs->eval(args);
    case Kind::Neg: return -lhs->eval(args);
    }
    return 0.0;
  }
};

inline bool expr_equal(const ParamExprPtr &a, const ParamExprPtr &b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
  case ParamExpr::Kind::Num: return a->num == b->num;
  case ParamExpr::Kind::Pi: return true;
  case ParamExpr::Kind::Param: return a->param == b->param;
  case ParamExpr::Kind::Neg: return expr_equal(a->lhs, b->lhs);
  default: return expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
  }
}

struct QregDecl {
  std::string name;
  uint32_t size = 1;
  bool operator==(const QregDecl &) const = default;
};

struct CregDecl {
  std::string name;
  uint32_t size = 1;
  bool operator==(const CregDecl &) const = default;
};

/// One statement of a gate definition body: an application of a previously
/// defined gate to formal arguments, or a barrier over formal arguments.
struct GateBodyStmt {
  bool is_barrier = false;
  std::string gate;                 // empty for barrier
  std::vector<ParamExprPtr> params; // expressions over the formals
  std::vector<uint32_t> args;       // indices into the formal qubit list

  bool operator==(const GateBodyStmt &o) const {
    if (is_barrier != o.is_barrier || gate != o.gate || args != o.args ||
        params.size() != o.params.size())
      return false;
    for (size_t i = 0; i < params.size(); ++i)
      if (!expr_equal(params[i], o.params[i])) return false;
    return true;
  }
};

struct GateDef {
  std::string name;
  std::vector<std::string> params;
  std::vector<std::string> qargs;
  std::vector<GateBodyStmt> body;
  bool operator==(const GateDef &) const = default;
};

struct OpaqueDecl {
  std::string name;
  std::vector<std::string> params;
  std::vector<std::string> qargs;
  bool operator==(const OpaqueDecl &) const = default;
};

struct GateApply {
  std::string name;
  std::vector<double> params; // evaluated radians
  std::vector<QubitRef> qubits;
  SourceLoc loc;
  bool operator==(const GateApply &o) const {
    return name == o.name && params == o.params && qubits == o.qubits;
  }
};

struct MeasureStmt {
  QubitRef qubit;
  BitRef bit;
  SourceLoc loc;
  bool operator==(const MeasureStmt &o) const {
    return qubit == o.qubit && bit == o.bit;
  }
};

struct ResetStmt {
  QubitRef qubit;
  SourceLoc loc;
  bool operator==(const ResetStmt &o) const { return qubit == o.qubit; }
};

struct BarrierStmt {
  std::vector<QubitRef> qubits;
  SourceLoc loc;
  bool operator==(const BarrierStmt &o) const { return qubits == o.qubits; }
};

using CondOp = std::variant<GateApply, MeasureStmt, ResetStmt>;

/// `if (creg == value) op;`
struct IfStmt {
  std::string creg;
  uint64_t value = 0;
  CondOp op;
  SourceLoc loc;
  bool operator==(const IfStmt &o) const {
    return creg == o.creg && value == o.value && op == o.op;
  }
};

using QasmStmt = std::variant<QregDecl, CregDecl, GateDef, OpaqueDecl,
                              GateApply, MeasureStmt, ResetStmt, BarrierStmt,
                              IfStmt>;

/// Parsed OpenQASM 2.0 program. `include "qelib1.inc"` is normalized away
/// during parsing (the standard library is compiled in); the printer always
/// emits the include line.
struct QasmProgram {
  std::string version = "2.0";
  std::vector<QasmStmt> statements;
  bool operator==(const QasmProgram &) const = default;
};

} // namespace qssa::qasm

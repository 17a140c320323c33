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

#include <sstream>
#include <string>

#include "qssa/qasm/ast.hpp"
#include "qssa/support/numeric.hpp"

namespace qssa::qasm {

namespace detail {

inline void print_expr(std::ostream &os, const ParamExprPtr &e,
                       const std::vector<std::string> &params) {
  switch (e->kind) {
  case ParamExpr::Kind::Num: os << format_double_exact(e->num); return;
  case ParamExpr::Kind::Pi: os << "pi"; return;
  case ParamExpr::Kind::Param: os << params.at(e->param); return;
  case ParamExpr::Kind::Neg:
    os << "(-";
    print_expr(os, e->lhs, params);
    os << ")";
    return;
  default: break;
  }
  const char *op = e->kind == ParamExpr::Kind::Add   ? "+"
                   : e->kind == ParamExpr::Kind::Sub ? "-"
                   : e->kind == ParamExpr::Kind::Mul ? "*"
                                                     : "/";
  os << "(";
  print_expr(os, e->lhs, params);
  os << op;
  print_expr(os, e->rhs, params);
  os << ")";
}

inline void print_qubit(std::ostream &os, const QubitRef &q) {
  os << q.reg << "[" << q.index << "]";
}

inline void print_apply(std::ostream &os, const GateApply &g) {
  os << g.name;
  if (!g.params.empty()) {
    os << "(";
    for (size_t i = 0; i < g.params.size(); ++i) {
      if (i) os << ",";
      os << format_double_exact(g.params[i]);
    }
    os << ")";
  }
  os << " ";
  for (size_t i = 0; i < g.qubits.size(); ++i) {
    if (i) os << ",";
    print_qubit(os, g.qubits[i]);
  }
  os << ";";
}

inline void print_measure(std::ostream &os, const MeasureStmt &m) {
  os << "measure ";
  print_qubit(os, m.qubit);
  os << " -> " << m.bit.reg << "[" << m.bit.index << "];";
}

inline void print_reset(std::ostream &os, const ResetStmt &r) {
  os << "reset ";
  print_qubit(os, r.qubit);
  os << ";";
}

struct StmtPrinter {
  std::ostream &os;

  void operator()(const QregDecl &d) const {
    os << "qreg " << d.name << "[" << d.size << "];";
  }
  void operator()(const CregDecl &d) const {
    os << "creg " << d.name << "[" << d.size << "];";
  }
  void operator()(const GateDef &d) const {
    os << "gate " << d.name;
    if (!d.params.empty()) {
      os << "(";
      for (size_t i = 0; i < d.params.size(); ++i) {
        if (i) os << ",";
        os << d.params[i];
      }
      os << ")";
    }
    os << " ";
    for (size_t i = 0; i < d.qargs.size(); ++i) {
      if (i) os << ",";
      os << d.qargs[i];
    }
    os << " { ";
    for (const auto &st : d.body) {
      if (st.is_barrier) {
        os << "barrier ";
        for (size_t i = 0; i < st.args.size(); ++i) {
          if (i) os << ",";
          os << d.qargs[st.args[i]];
        }
        os << "; ";
        continue;
      }
      os << st.gate;
      if (!st.params.empty()) {
        os << "(";
        for (size_t i = 0; i < st.params.size(); ++i) {
          if (i) os << ",";
          print_expr(os, st.params[i], d.params);
        }
        os << ")";
      }
      os << " ";
      for (size_t i = 0; i < st.args.size(); ++i) {
        if (i) os << ",";
        os << d.qargs[st.args[i]];
      }
      os << "; ";
    }
    os << "}";
  }
  void operator()(const OpaqueDecl &d) const {
    os << "opaque " << d.name;
    if (!d.params.empty()) {
      os << "(";
      for (size_t i = 0; i < d.params.size(); ++i) {
        if (i) os << ",";
        os << d.params[i];
      }
      os << ")";
    }
    os << " ";
    for (size_t i = 0; i < d.qargs.size(); ++i) {
      if (i) os << ",";
      os << d.qargs[i];
    }
    os << ";";
  }
  void operator()(const GateApply &g) const { print_apply(os, g); }
  void operator()(const MeasureStmt &m) const { print_measure(os, m); }
  void operator()(const ResetStmt &r) const { print_reset(os, r); }
  void operator()(const BarrierStmt &b) const {
    os << "barrier ";
    for (size_t i = 0; i < b.qubits.size(); ++i) {
      if (i) os << ",";
      print_qubit(os, b.qubits[i]);
    }
    os << ";";
  }
  void operator()(const IfStmt &s) const {
    os << "if(" << s.creg << "==" << s.value << ") ";
    if (const auto *g = std::get_if<GateApply>(&s.op))
      print_apply(os, *g);
    else if (const auto *m = std::get_if<MeasureStmt>(&s.op))
      print_measure(os, *m);
    else
      print_reset(os, std::get<ResetStmt>(s.op));
  }
};

} // namespace detail

/// Canonical OpenQASM 2.0 text: header, include line, then one statement per
/// line. parse_qasm(print_qasm(p)) == p for every valid program.
inline std::string print_qasm(const QasmProgram &program) {
  std::ostringstream os;
  os << "OPENQASM " << program.version << ";\n";
  os << "include \"qelib1.inc\";\n";
  detail::StmtPrinter printer{os};
  for (const auto &st : program.statements) {
    std::visit(printer, st);
    os << "\n";
  }
  return os.str();
}

} // namespace qssa::qasm

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

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "qssa/ir/module.hpp"
#include "qssa/qasm/ast.hpp"
#include "qssa/support/error.hpp"

namespace qssa::metrics {

/// Gate count, circuit depth, and per-kind histogram.
///
/// Counting conventions (fixed once, used on both the IR and QASM sides):
///  - counted ops: gates, measure, reset; split/concat/cast/dim/barrier and
///    classical ops are free
///  - a measure over qubit<n> counts once but adds a depth layer on each of
///    its n wires
///  - scf.if branches: counts add (static instructions), depth takes the
///    branch maximum; constant loops multiply by trip count
///  - calls count the callee per call site
struct CircuitMetrics {
  uint64_t gate_count = 0;
  uint64_t depth = 0;
  std::map<std::string, uint64_t> histogram;
};

inline double optimization_ratio(const CircuitMetrics &before,
                                 const CircuitMetrics &after) {
  if (before.gate_count == 0) return 0.0;
  return 1.0 - static_cast<double>(after.gate_count) /
                   static_cast<double>(before.gate_count);
}

namespace detail {

inline const char *counted_name(ir::OpKind k) {
  switch (k) {
  case ir::OpKind::X: return "x";
  case ir::OpKind::Y: return "y";
  case ir::OpKind::Z: return "z";
  case ir::OpKind::H: return "h";
  case ir::OpKind::S: return "s";
  case ir::OpKind::Sdg: return "sdg";
  case ir::OpKind::T: return "t";
  case ir::OpKind::Tdg: return "tdg";
  case ir::OpKind::Rx: return "rx";
  case ir::OpKind::Ry: return "ry";
  case ir::OpKind::Rz: return "rz";
  case ir::OpKind::U: return "u3";
  case ir::OpKind::CNOT: return "cx";
  case ir::OpKind::GenericGate: return "gate";
  case ir::OpKind::Measure: return "measure";
  case ir::OpKind::Reset: return "reset";
  default: return nullptr;
  }
}

class ModuleMetrics {
public:
  explicit ModuleMetrics(const ir::ModuleIR &module) : module_(module) {}

  CircuitMetrics run() {
    const ir::FunctionDef *main = module_.find("main");
    if (!main)
      throw_error(ErrorKind::Resolution, "module has no @main function");
    CircuitMetrics out;
    std::vector<uint64_t> depth(main->num_values(), 0);
    uint64_t max_depth = measure_function(*main, depth, out, 0);
    out.depth = max_depth;
    return out;
  }

private:
  int64_t const_value(const ir::FunctionDef &func, ir::ValueId v) {
    const ir::Operation *def = nullptr;
    walk_ops(func, [&](const ir::Operation &op) {
      for (ir::ValueId r : op.results)
        if (r == v) def = &op;
    });
    if (!def || def->kind != ir::OpKind::ConstInt)
      throw_error(ErrorKind::Unbounded,
                  "loop bound is not a compile-time constant");
    return def->int_attr("value");
  }

  uint64_t measure_function(const ir::FunctionDef &func,
                            std::vector<uint64_t> &depth, CircuitMetrics &out,
                            int call_depth) {
    if (call_depth > 64)
      throw_error(ErrorKind::Unbounded, "call graph too deep or recursive");
    uint64_t max_depth = 0;
    for (const auto &block : func.body.blocks)
      max_depth = std::max(
          max_depth, measure_block(func, block, depth, out, call_depth));
    return max_depth;
  }

  uint64_t measure_block(const ir::FunctionDef &func, const ir::Block &block,
                         std::vector<uint64_t> &depth, CircuitMetrics &out,
                         int call_depth) {
    uint64_t max_depth = 0;
    for (const auto &op : block.ops) {
      uint64_t in = 0;
      for (ir::ValueId v : op.operands)
        if (func.type_of(v).is_qubit()) in = std::max(in, depth[v.index]);

      uint64_t result_depth = in;
      if (const char *name = counted_name(op.kind)) {
        ++out.gate_count;
        ++out.histogram[name];
        result_depth = in + 1;
      } else if (op.kind == ir::OpKind::Call) {
        const ir::FunctionDef *callee = module_.find(op.callee);
        if (!callee)
          throw_error(ErrorKind::Resolution, "unknown callee @" + op.callee);
        std::vector<uint64_t> inner(callee->num_values(), 0);
        const auto &params = callee->body.entry().args;
        for (size_t i = 0; i < params.size(); ++i)
          if (callee->type_of(params[i]).is_qubit())
            inner[params[i].index] = 0; // callee depth measured locally
        uint64_t body = measure_function(*callee, inner, out, call_depth + 1);
        result_depth = in + body;
      } else if (op.kind == ir::OpKind::ScfIf) {
        uint64_t then_d =
            measure_block(func, op.regions[0].entry(), depth, out, call_depth);
        uint64_t else_d =
            measure_block(func, op.regions[1].entry(), depth, out, call_depth);
        const auto &ty = op.regions[0].entry().terminator();
        const auto &ey = op.regions[1].entry().terminator();
        for (size_t k = 0; k < op.results.size(); ++k)
          if (func.type_of(op.results[k]).is_qubit())
            depth[op.results[k].index] = std::max(
                depth[ty.operands[k].index], depth[ey.operands[k].index]);
        max_depth = std::max({max_depth, then_d, else_d});
        continue;
      } else if (op.kind == ir::OpKind::ScfFor) {
        int64_t lo = const_value(func, op.operands[0]);
        int64_t hi = const_value(func, op.operands[1]);
        int64_t step = const_value(func, op.operands[2]);
        if (step < 1) throw_error(ErrorKind::Unbounded, "loop step must be >= 1");
        int64_t trip = hi > lo ? (hi - lo + step - 1) / step : 0;
        const ir::Block &body = op.regions[0].entry();
        // seed iter args from the init wires, run the body per iteration
        for (size_t j = 3; j < op.operands.size(); ++j)
          if (func.type_of(op.operands[j]).is_qubit())
            depth[body.args[j - 2].index] = depth[op.operands[j].index];
        uint64_t inner_max = 0;
        for (int64_t k = 0; k < trip; ++k) {
          inner_max = std::max(
              inner_max, measure_block(func, body, depth, out, call_depth));
          const auto &yield = body.terminator();
          for (size_t j = 0; j < yield.operands.size(); ++j)
            if (func.type_of(yield.operands[j]).is_qubit())
              depth[body.args[j + 1].index] = depth[yield.operands[j].index];
        }
        const auto &yield = body.terminator();
        for (size_t k = 0; k < op.results.size(); ++k)
          if (func.type_of(op.results[k]).is_qubit())
            depth[op.results[k].index] =
                trip > 0 ? depth[yield.operands[k].index]
                         : depth[op.operands[k + 3].index];
        max_depth = std::max(max_depth, inner_max);
        continue;
      }

      for (ir::ValueId r : op.results)
        if (func.type_of(r).is_qubit()) depth[r.index] = result_depth;
      if (counted_name(op.kind) || op.kind == ir::OpKind::Call)
        max_depth = std::max(max_depth, result_depth);
    }
    return max_depth;
  }

  const ir::ModuleIR &module_;
};

} // namespace detail

/// Gate count / depth / histogram for a module (entry @main, calls counted
/// per site, constant loops multiplied out). Throws Unbounded for loops
/// without compile-time trip counts.
inline CircuitMetrics compute_metrics(const ir::ModuleIR &module) {
  detail::ModuleMetrics m(module);
  return m.run();
}

/// Same metrics over a QASM AST: per-qubit wire depths, gates/measure/reset
/// counted, barriers synchronize wires without counting, `if` bodies count
/// like their inner op (classical dependencies do not add depth).
inline CircuitMetrics compute_metrics(const qasm::QasmProgram &program) {
  CircuitMetrics out;
  std::map<std::string, std::vector<uint64_t>> wires;
  uint64_t max_depth = 0;

  auto touch = [&](const std::vector<qasm::QubitRef> &refs,
                   const std::string &name) {
    uint64_t in = 0;
    for (const auto &q : refs) in = std::max(in, wires.at(q.reg).at(q.index));
    uint64_t d = in + 1;
    for (const auto &q : refs) wires.at(q.reg).at(q.index) = d;
    ++out.gate_count;
    ++out.histogram[name];
    max_depth = std::max(max_depth, d);
  };

  struct Visitor {
    CircuitMetrics &out;
    std::map<std::string, std::vector<uint64_t>> &wires;
    decltype(touch) &apply;

    void operator()(const qasm::QregDecl &d) {
      wires[d.name].assign(d.size, 0);
    }
    void operator()(const qasm::CregDecl &) {}
    void operator()(const qasm::GateDef &) {}
    void operator()(const qasm::OpaqueDecl &) {}
    void operator()(const qasm::GateApply &g) { apply(g.qubits, g.name); }
    void operator()(const qasm::MeasureStmt &m) {
      apply({m.qubit}, "measure");
    }
    void operator()(const qasm::ResetStmt &r) { apply({r.qubit}, "reset"); }
    void operator()(const qasm::BarrierStmt &b) {
      uint64_t in = 0;
      for (const auto &q : b.qubits)
        in = std::max(in, wires.at(q.reg).at(q.index));
      for (const auto &q : b.qubits) wires.at(q.reg).at(q.index) = in;
    }
    void operator()(const qasm::IfStmt &s) {
      if (const auto *g = std::get_if<qasm::GateApply>(&s.op))
        (*this)(*g);
      else if (const auto *m = std::get_if<qasm::MeasureStmt>(&s.op))
        (*this)(*m);
      else
        (*this)(std::get<qasm::ResetStmt>(s.op));
    }
  } visitor{out, wires, touch};

  for (const auto &st : program.statements) std::visit(visitor, st);
  out.depth = max_depth;
  return out;
}

} // namespace qssa::metrics

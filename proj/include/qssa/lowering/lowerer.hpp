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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qssa/ir/gates.hpp"
#include "qssa/ir/module.hpp"
#include "qssa/qasm/ast.hpp"
#include "qssa/support/error.hpp"

namespace qssa::lowering {

namespace detail {

[[noreturn]] inline void not_lowerable(const std::string &why) {
  throw_error(ErrorKind::NotLowerable, why);
}

/// Converts a verified, static, structured, main-only module back to
/// OpenQASM 2.0 by erasing qubit results: every gate result aliases its
/// operand's physical wires, allocs coalesce into one qreg, bit cells
/// re-materialize as cregs.
class Lowerer {
public:
  explicit Lowerer(const ir::ModuleIR &module) : module_(module) {}

  qasm::QasmProgram run() {
    const ir::FunctionDef &main = entry();
    scan(main);
    track_classical(main);
    refine_groups(main);
    emit_declarations();
    lower_block(main, main.body.entry(), /*top_level=*/true);
    return std::move(out_);
  }

  /// ValueId -> physical wire indices for every qubit-typed value.
  std::map<uint32_t, std::vector<uint32_t>> trace_only() {
    const ir::FunctionDef &main = entry();
    scan(main);
    return std::move(wires_);
  }

private:
  const ir::FunctionDef &entry() {
    if (module_.functions.size() != 1 || !module_.find("main"))
      not_lowerable("module must contain only @main (run inline first)");
    const ir::FunctionDef &main = module_.functions.front();
    if (main.body.blocks.size() != 1)
      not_lowerable("flat multi-block control flow has no OpenQASM form");
    if (!main.body.entry().args.empty() || !main.result_types.empty())
      not_lowerable("@main must take and return nothing");
    return main;
  }

  // ---- pass 1: wire tracing, register layout, classical tracking ----

  struct CExpr {
    bool valid = false;
    int64_t constant = 0;
    std::map<uint32_t, int64_t> weights; // cell value -> coefficient
  };

  void scan(const ir::FunctionDef &func) {
    walk_ops(func, [&](const ir::Operation &op) {
      for (ir::ValueId r : op.results) {
        ir::Type t = func.type_of(r);
        if ((t.kind == ir::TypeKind::Qubit || t.kind == ir::TypeKind::Bits) &&
            t.dynamic)
          not_lowerable("dynamic qubit arrays have no OpenQASM form");
      }
      if (op.kind == ir::OpKind::ScfFor)
        not_lowerable("scf.for has no OpenQASM form (run unroll first)");
      if (op.kind == ir::OpKind::GenericGate)
        not_lowerable("matrix-defined gates have no OpenQASM form");
    });
    trace_block(func, func.body.entry());
  }

  void trace_block(const ir::FunctionDef &func, const ir::Block &block) {
    for (const auto &op : block.ops) {
      for (ir::ValueId r : op.results) defs_[r.index] = &op;
      bool is_cell = op.kind == ir::OpKind::MemAllocBit;
      if (is_cell && !last_was_cell_) cell_groups_.emplace_back();
      last_was_cell_ = is_cell;
      switch (op.kind) {
      case ir::OpKind::Alloc: {
        uint32_t n = func.type_of(op.results[0]).size;
        std::vector<uint32_t> idx(n);
        for (uint32_t i = 0; i < n; ++i) idx[i] = total_qubits_ + i;
        total_qubits_ += n;
        wires_[op.results[0].index] = std::move(idx);
        break;
      }
      case ir::OpKind::MemAllocBit:
        cell_groups_.back().push_back(op.results[0].index);
        break;
      case ir::OpKind::Split: {
        const auto &in = wires_.at(op.operands[0].index);
        uint32_t a = func.type_of(op.results[0]).size;
        wires_[op.results[0].index] = {in.begin(), in.begin() + a};
        wires_[op.results[1].index] = {in.begin() + a, in.end()};
        break;
      }
      case ir::OpKind::Concat: {
        auto joined = wires_.at(op.operands[0].index);
        const auto &b = wires_.at(op.operands[1].index);
        joined.insert(joined.end(), b.begin(), b.end());
        wires_[op.results[0].index] = std::move(joined);
        break;
      }
      case ir::OpKind::Dim:
        wires_[op.results[1].index] = wires_.at(op.operands[0].index);
        break;
      case ir::OpKind::Cast:
        wires_[op.results[0].index] = wires_.at(op.operands[0].index);
        break;
      case ir::OpKind::Measure:
        wires_[op.results[1].index] = wires_.at(op.operands[0].index);
        break;
      case ir::OpKind::Barrier:
        for (size_t i = 0; i < op.operands.size(); ++i)
          wires_[op.results[i].index] = wires_.at(op.operands[i].index);
        break;
      case ir::OpKind::ScfIf: {
        trace_block(func, op.regions[0].entry());
        trace_block(func, op.regions[1].entry());
        const auto &then_yield = op.regions[0].entry().terminator();
        const auto &else_yield = op.regions[1].entry().terminator();
        for (size_t i = 0; i < op.results.size(); ++i) {
          if (func.type_of(op.results[i]).kind != ir::TypeKind::Qubit)
            not_lowerable("scf.if yielding non-qubit values");
          const auto &a = wires_.at(then_yield.operands[i].index);
          const auto &b = wires_.at(else_yield.operands[i].index);
          if (a != b)
            not_lowerable("scf.if branches deliver different physical wires");
          wires_[op.results[i].index] = a;
        }
        break;
      }
      default:
        // gates and reset: results alias operand wires positionally
        if (ir::is_gate(op.kind) || op.kind == ir::OpKind::Reset) {
          for (size_t i = 0; i < op.results.size(); ++i)
            wires_[op.results[i].index] = wires_.at(op.operands[i].index);
        }
        break;
      }
    }
  }

  // ---- pass 2: classical expression tracking and register planning ----

  void track_classical(const ir::FunctionDef &func) {
    walk_ops(func, [&](const ir::Operation &op) {
      switch (op.kind) {
      case ir::OpKind::ConstInt: {
        CExpr e;
        e.valid = true;
        e.constant = op.int_attr("value");
        ints_[op.results[0].index] = std::move(e);
        break;
      }
      case ir::OpKind::ConstAngle:
        angles_[op.results[0].index] = op.float_attr("value");
        break;
      case ir::OpKind::MemLoadBit: {
        CExpr e;
        e.valid = true;
        e.weights[op.operands[0].index] = 1;
        ints_[op.results[0].index] = std::move(e);
        break;
      }
      case ir::OpKind::AddI:
      case ir::OpKind::SubI: {
        CExpr a = expr_of(op.operands[0]), b = expr_of(op.operands[1]);
        CExpr e;
        e.valid = a.valid && b.valid;
        int64_t sign = op.kind == ir::OpKind::AddI ? 1 : -1;
        e.constant = a.constant + sign * b.constant;
        e.weights = a.weights;
        for (auto &[cell, w] : b.weights) e.weights[cell] += sign * w;
        ints_[op.results[0].index] = std::move(e);
        break;
      }
      case ir::OpKind::MulI: {
        CExpr a = expr_of(op.operands[0]), b = expr_of(op.operands[1]);
        CExpr e;
        if (a.valid && b.valid && b.weights.empty()) {
          e.valid = true;
          e.constant = a.constant * b.constant;
          e.weights = a.weights;
          for (auto &[cell, w] : e.weights) w *= b.constant;
        } else if (a.valid && b.valid && a.weights.empty()) {
          e.valid = true;
          e.constant = a.constant * b.constant;
          e.weights = b.weights;
          for (auto &[cell, w] : e.weights) w *= a.constant;
        }
        ints_[op.results[0].index] = std::move(e);
        break;
      }
      default:
        break;
      }
    });
  }

  /// Conditions constrain the creg layout: a compare over bits with weights
  /// 1,2,4,... must read one whole creg. Split the adjacency runs at every
  /// boundary a condition demands.
  void refine_groups(const ir::FunctionDef &func) {
    std::vector<std::vector<uint32_t>> condition_cells;
    walk_ops(func, [&](const ir::Operation &op) {
      if (op.kind != ir::OpKind::ScfIf) return;
      const ir::Operation *cmp = find_def(func, op.operands[0]);
      if (!cmp || cmp->kind != ir::OpKind::CmpEq) return;
      CExpr lhs = expr_of(cmp->operands[0]), rhs = expr_of(cmp->operands[1]);
      if (!lhs.valid || !rhs.valid) return;
      if (!lhs.weights.empty() && !rhs.weights.empty()) return;
      const CExpr &reg = lhs.weights.empty() ? rhs : lhs;
      if (reg.weights.empty()) return;
      // order cells by weight; accept only clean 1,2,4,... patterns
      std::vector<std::pair<int64_t, uint32_t>> by_weight;
      for (const auto &[cell, w] : reg.weights) by_weight.push_back({w, cell});
      std::sort(by_weight.begin(), by_weight.end());
      std::vector<uint32_t> cells;
      for (size_t i = 0; i < by_weight.size(); ++i) {
        if (by_weight[i].first != (int64_t{1} << i)) return;
        cells.push_back(by_weight[i].second);
      }
      condition_cells.push_back(std::move(cells));
    });

    std::vector<std::vector<uint32_t>> refined;
    for (const auto &run : cell_groups_) {
      std::set<size_t> cuts{0, run.size()};
      for (const auto &cells : condition_cells) {
        // locate the condition's cells as a consecutive slice of this run
        auto it = std::find(run.begin(), run.end(), cells.front());
        if (it == run.end()) continue;
        size_t start = static_cast<size_t>(it - run.begin());
        if (start + cells.size() > run.size()) continue;
        if (!std::equal(cells.begin(), cells.end(), run.begin() + start))
          continue;
        cuts.insert(start);
        cuts.insert(start + cells.size());
      }
      auto cut = cuts.begin();
      for (auto next = std::next(cut); next != cuts.end(); ++cut, ++next)
        refined.emplace_back(run.begin() + *cut, run.begin() + *next);
    }
    cell_groups_ = std::move(refined);
  }

  // ---- declarations ----

  void emit_declarations() {
    if (total_qubits_ > 0)
      out_.statements.push_back(qasm::QregDecl{"q", total_qubits_});
    // Bit cells group into cregs by maximal adjacency in program order. A
    // single group keeps the conventional name "c".
    for (size_t g = 0; g < cell_groups_.size(); ++g) {
      std::string name =
          cell_groups_.size() == 1 ? "c" : "c" + std::to_string(g);
      out_.statements.push_back(qasm::CregDecl{
          name, static_cast<uint32_t>(cell_groups_[g].size())});
      for (size_t i = 0; i < cell_groups_[g].size(); ++i)
        cell_ref_[cell_groups_[g][i]] = {name, static_cast<uint32_t>(i)};
    }
  }

  // ---- pass 3: statement emission ----

  qasm::QubitRef wire_ref(const ir::FunctionDef &func, ir::ValueId v,
                          size_t elem = 0) {
    (void)func;
    return {"q", wires_.at(v.index).at(elem)};
  }

  CExpr expr_of(ir::ValueId v) const {
    auto it = ints_.find(v.index);
    if (it == ints_.end()) return {};
    return it->second;
  }

  void lower_block(const ir::FunctionDef &func, const ir::Block &block,
                   bool top_level) {
    for (const auto &op : block.ops) {
      switch (op.kind) {
      case ir::OpKind::Alloc:
      case ir::OpKind::MemAllocBit:
      case ir::OpKind::Split:
      case ir::OpKind::Concat:
      case ir::OpKind::Dim:
      case ir::OpKind::Cast:
        break; // layout only
      case ir::OpKind::ConstInt:
      case ir::OpKind::ConstAngle:
      case ir::OpKind::MemLoadBit:
      case ir::OpKind::AddI:
      case ir::OpKind::SubI:
      case ir::OpKind::MulI:
      case ir::OpKind::CmpEq:
        break; // tracked up front; consumed by scf.if recognition
      case ir::OpKind::Measure:
        check_measure_uses(func, op);
        break;
      case ir::OpKind::MemStoreBit:
        emit_store(func, op);
        break;
      case ir::OpKind::Reset:
        out_.statements.push_back(
            qasm::ResetStmt{wire_ref(func, op.operands[0]), op.loc});
        break;
      case ir::OpKind::Barrier: {
        qasm::BarrierStmt st;
        for (ir::ValueId v : op.operands)
          for (size_t e = 0; e < wires_.at(v.index).size(); ++e)
            st.qubits.push_back(wire_ref(func, v, e));
        out_.statements.push_back(std::move(st));
        break;
      }
      case ir::OpKind::ScfIf:
        emit_if(func, op, top_level);
        break;
      case ir::OpKind::Return:
        break;
      case ir::OpKind::Yield:
        if (top_level) not_lowerable("yield outside scf region");
        break;
      case ir::OpKind::Call:
        not_lowerable("call has no OpenQASM form (run inline first)");
      case ir::OpKind::Br:
      case ir::OpKind::CondBr:
      case ir::OpKind::ScfFor:
      case ir::OpKind::GenericGate:
        not_lowerable("operation has no OpenQASM form");
      default:
        if (ir::is_gate(op.kind)) {
          out_.statements.push_back(gate_stmt(func, op));
          break;
        }
        not_lowerable(std::string("cannot lower ") + op_mnemonic(op.kind));
      }
    }
  }

  qasm::GateApply gate_stmt(const ir::FunctionDef &func,
                            const ir::Operation &op) {
    qasm::GateApply g;
    switch (op.kind) {
    case ir::OpKind::X: g.name = "x"; break;
    case ir::OpKind::Y: g.name = "y"; break;
    case ir::OpKind::Z: g.name = "z"; break;
    case ir::OpKind::H: g.name = "h"; break;
    case ir::OpKind::S: g.name = "s"; break;
    case ir::OpKind::Sdg: g.name = "sdg"; break;
    case ir::OpKind::T: g.name = "t"; break;
    case ir::OpKind::Tdg: g.name = "tdg"; break;
    case ir::OpKind::CNOT: g.name = "cx"; break;
    case ir::OpKind::Rx: g.name = "rx"; break;
    case ir::OpKind::Ry: g.name = "ry"; break;
    case ir::OpKind::Rz: g.name = "rz"; break;
    case ir::OpKind::U: g.name = "u3"; break;
    default: not_lowerable("unexpected gate kind");
    }
    g.params = lowered_angles(op);
    for (ir::ValueId v : op.operands)
      if (func.type_of(v).kind == ir::TypeKind::Qubit)
        g.qubits.push_back(wire_ref(func, v));
    return g;
  }

  std::vector<double> lowered_angles(const ir::Operation &op) {
    std::vector<double> angles;
    if (ir::gate_attr_angles(op, angles)) return angles;
    for (size_t i = 1; i < op.operands.size(); ++i) {
      auto it = angles_.find(op.operands[i].index);
      if (it == angles_.end())
        not_lowerable("gate angle is not a compile-time constant");
      angles.push_back(it->second);
    }
    return angles;
  }

  void check_measure_uses(const ir::FunctionDef &func,
                          const ir::Operation &op) {
    if (func.type_of(op.results[0]).size != 1)
      not_lowerable("multi-qubit measure must be split before lowering");
    // The bits result must reach at least one store; stores do the emission.
    if (!value_feeds_store(func, op.results[0]))
      not_lowerable("measurement result is never stored to a bit cell");
  }

  bool value_feeds_store(const ir::FunctionDef &func, ir::ValueId bits) {
    bool found = false, bad = false;
    walk_ops(func, [&](const ir::Operation &op) {
      for (size_t i = 0; i < op.operands.size(); ++i)
        if (op.operands[i] == bits) {
          if (op.kind == ir::OpKind::MemStoreBit && i == 1)
            found = true;
          else
            bad = true;
        }
    });
    if (bad)
      not_lowerable("measurement result consumed by classical arithmetic");
    return found;
  }

  void emit_store(const ir::FunctionDef &func, const ir::Operation &op) {
    // find the defining measure of the stored bits value
    const ir::Operation *measure = find_def(func, op.operands[1]);
    if (!measure || measure->kind != ir::OpKind::Measure)
      not_lowerable("stored bit does not come from a measurement");
    auto it = cell_ref_.find(op.operands[0].index);
    if (it == cell_ref_.end()) not_lowerable("store into unknown bit cell");
    out_.statements.push_back(qasm::MeasureStmt{
        wire_ref(func, measure->operands[0]),
        {it->second.first, it->second.second},
        op.loc});
  }

  const ir::Operation *find_def(const ir::FunctionDef &func, ir::ValueId v) {
    (void)func;
    auto it = defs_.find(v.index);
    return it == defs_.end() ? nullptr : it->second;
  }

  void emit_if(const ir::FunctionDef &func, const ir::Operation &op,
               bool top_level) {
    if (!top_level) not_lowerable("nested scf.if has no OpenQASM form");
    // condition: (sum of 2^i * load(cell_i) over one full creg) == constant
    const ir::Operation *cmp = find_def(func, op.operands[0]);
    if (!cmp || cmp->kind != ir::OpKind::CmpEq)
      not_lowerable("scf.if condition is not a creg equality");
    CExpr lhs = expr_of(cmp->operands[0]), rhs = expr_of(cmp->operands[1]);
    if (!lhs.valid || !rhs.valid)
      not_lowerable("scf.if condition is not a creg equality");
    if (!lhs.weights.empty() && !rhs.weights.empty())
      not_lowerable("scf.if condition compares two register values");
    const CExpr &reg = lhs.weights.empty() ? rhs : lhs;
    const CExpr &cst = lhs.weights.empty() ? lhs : rhs;
    int64_t value = cst.constant - reg.constant;
    std::string creg = creg_of_weights(reg.weights);
    if (value < 0) not_lowerable("scf.if compares against a negative value");

    // then region: one quantum op (measure comes with its store); else: empty
    const auto &then_ops = op.regions[0].entry().ops;
    const auto &else_ops = op.regions[1].entry().ops;
    if (else_ops.size() != 1)
      not_lowerable("scf.if else-branch must only yield");
    size_t emitted_before = out_.statements.size();
    lower_block(func, op.regions[0].entry(), /*top_level=*/false);
    size_t emitted = out_.statements.size() - emitted_before;
    if (emitted != 1 || then_ops.size() > 3)
      not_lowerable("scf.if body must lower to exactly one statement");
    qasm::IfStmt out;
    out.creg = creg;
    out.value = static_cast<uint64_t>(value);
    qasm::QasmStmt inner = std::move(out_.statements.back());
    out_.statements.pop_back();
    if (auto *g = std::get_if<qasm::GateApply>(&inner))
      out.op = std::move(*g);
    else if (auto *m = std::get_if<qasm::MeasureStmt>(&inner))
      out.op = std::move(*m);
    else if (auto *r = std::get_if<qasm::ResetStmt>(&inner))
      out.op = std::move(*r);
    else
      not_lowerable("scf.if body is not a gate, measure, or reset");
    out_.statements.push_back(std::move(out));
  }

  std::string creg_of_weights(const std::map<uint32_t, int64_t> &weights) {
    if (weights.empty()) not_lowerable("scf.if condition reads no creg");
    // All weighted cells must belong to one creg, with weight 2^index, and
    // cover it completely.
    std::string name;
    uint32_t creg_size = 0;
    for (const auto &[cell, w] : weights) {
      auto it = cell_ref_.find(cell);
      if (it == cell_ref_.end()) not_lowerable("condition reads unknown cell");
      if (name.empty()) name = it->second.first;
      if (it->second.first != name)
        not_lowerable("scf.if condition mixes cregs");
      if (w != (int64_t{1} << it->second.second))
        not_lowerable("scf.if condition is not a plain register compare");
      ++creg_size;
    }
    for (const auto &st : out_.statements)
      if (const auto *c = std::get_if<qasm::CregDecl>(&st))
        if (c->name == name && c->size != creg_size)
          not_lowerable("scf.if condition reads a partial register");
    return name;
  }

  const ir::ModuleIR &module_;
  qasm::QasmProgram out_;
  std::map<uint32_t, std::vector<uint32_t>> wires_;
  std::vector<std::vector<uint32_t>> cell_groups_;
  std::map<uint32_t, std::pair<std::string, uint32_t>> cell_ref_;
  std::map<uint32_t, CExpr> ints_;
  std::map<uint32_t, double> angles_;
  std::map<uint32_t, const ir::Operation *> defs_;
  uint32_t total_qubits_ = 0;
  bool last_was_cell_ = false;
};

} // namespace detail

/// Lower a clean, static, structured, main-only module to OpenQASM 2.0.
/// Gate results collapse onto their operand wires; allocs coalesce into
/// `qreg q[N]` in allocation order; bit cells become cregs; measures are
/// emitted at their stores. Throws Error(NotLowerable) with the reason.
inline qasm::QasmProgram lower(const ir::ModuleIR &module) {
  detail::Lowerer lowerer(module);
  return lowerer.run();
}

/// Physical wire assignment per qubit-typed SSA value (keyed by raw value
/// index): the alloc origin followed through gate collapsing and
/// split/concat arithmetic.
inline std::map<uint32_t, std::vector<uint32_t>>
wire_trace(const ir::ModuleIR &module) {
  detail::Lowerer lowerer(module);
  return lowerer.trace_only();
}

} // namespace qssa::lowering

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

#include "qssa/ir/build.hpp"
#include "qssa/ir/module.hpp"
#include "qssa/qasm/ast.hpp"
#include "qssa/qasm/expand.hpp"
#include "qssa/support/error.hpp"

namespace qssa::raising {

namespace detail {

/// mem2reg-style conversion state: every physical qubit maps to the SSA
/// value holding its latest state; every classical bit maps to its cell.
class Raiser {
public:
  explicit Raiser(const qasm::QasmProgram &program) : program_(program) {}

  ir::ModuleIR run() {
    module_.functions.emplace_back();
    ir::FunctionDef &main = module_.functions.back();
    main.name = "main";
    main.body.blocks.emplace_back();
    builder_.emplace(module_, main);
    builder_->set_insertion_block(&main.body.entry());

    for (const auto &st : program_.statements) std::visit(*this, st);
    builder_->ret();
    return std::move(module_);
  }

  // -- statement visitors --

  void operator()(const qasm::QregDecl &d) {
    auto &wires = qubits_[d.name];
    for (uint32_t i = 0; i < d.size; ++i) wires.push_back(builder_->alloc(1));
  }

  void operator()(const qasm::CregDecl &d) {
    auto &cells = cells_[d.name];
    for (uint32_t i = 0; i < d.size; ++i)
      cells.push_back(builder_->create(ir::OpKind::MemAllocBit).results[0]);
  }

  void operator()(const qasm::GateDef &) {} // bodies are inlined on use
  void operator()(const qasm::OpaqueDecl &) {}

  void operator()(const qasm::GateApply &g) {
    auto prims = qasm::expand_gate(program_, g.name, g.params,
                                   static_cast<uint32_t>(g.qubits.size()));
    for (const auto &p : prims) emit_prim(p, g.qubits);
  }

  void operator()(const qasm::MeasureStmt &m) {
    auto [bits, qubit] = builder_->measure(latest(m.qubit));
    update(m.qubit, qubit);
    builder_->create(ir::OpKind::MemStoreBit, {cell(m.bit), bits});
  }

  void operator()(const qasm::ResetStmt &r) {
    update(r.qubit, builder_->gate1(ir::OpKind::Reset, latest(r.qubit)));
  }

  void operator()(const qasm::BarrierStmt &b) {
    std::vector<ir::ValueId> operands;
    for (const auto &q : b.qubits) operands.push_back(latest(q));
    auto &op = builder_->create(ir::OpKind::Barrier, std::move(operands));
    for (size_t i = 0; i < b.qubits.size(); ++i)
      update(b.qubits[i], op.results[i]);
  }

  void operator()(const qasm::IfStmt &f) {
    ir::ValueId cond = emit_condition(f.creg, f.value);

    // The conditional op touches a fixed qubit set; the then-region applies
    // it to the captured latest values, the else-region yields them as-is.
    std::vector<qasm::QubitRef> touched = touched_qubits(f.op);
    std::vector<ir::ValueId> incoming;
    for (const auto &q : touched) incoming.push_back(latest(q));

    ir::Region then_region, else_region;
    then_region.blocks.emplace_back();
    else_region.blocks.emplace_back();

    ir::Block *saved = builder_->insertion_block();
    builder_->set_insertion_block(&then_region.entry());
    emit_cond_body(f.op, touched);
    std::vector<ir::ValueId> then_values;
    for (const auto &q : touched) then_values.push_back(latest(q));
    builder_->yield(then_values);

    // Restore the map so the else-region yields the pre-branch values.
    for (size_t i = 0; i < touched.size(); ++i) update(touched[i], incoming[i]);
    builder_->set_insertion_block(&else_region.entry());
    builder_->yield(incoming);

    builder_->set_insertion_block(saved);
    std::vector<ir::Region> regions;
    regions.push_back(std::move(then_region));
    regions.push_back(std::move(else_region));
    auto &ifop =
        builder_->create(ir::OpKind::ScfIf, {cond}, {}, std::move(regions));
    for (size_t i = 0; i < touched.size(); ++i)
      update(touched[i], ifop.results[i]);
  }

private:
  // -- latest-qubit map --

  ir::ValueId latest(const qasm::QubitRef &q) const {
    return qubits_.at(q.reg).at(q.index);
  }
  void update(const qasm::QubitRef &q, ir::ValueId v) {
    qubits_[q.reg][q.index] = v;
  }
  ir::ValueId cell(const qasm::BitRef &b) const {
    return cells_.at(b.reg).at(b.index);
  }

  void emit_prim(const qasm::PrimApp &p,
                 const std::vector<qasm::QubitRef> &args) {
    if (p.barrier) {
      std::vector<ir::ValueId> operands;
      for (uint32_t slot : p.args) operands.push_back(latest(args[slot]));
      auto &op = builder_->create(ir::OpKind::Barrier, std::move(operands));
      for (size_t i = 0; i < p.args.size(); ++i)
        update(args[p.args[i]], op.results[i]);
      return;
    }
    ir::AttrMap attrs;
    switch (p.kind) {
    case ir::OpKind::Rx: case ir::OpKind::Ry: case ir::OpKind::Rz:
      attrs["angle"] = p.angles.at(0);
      break;
    case ir::OpKind::U:
      attrs["theta"] = p.angles.at(0);
      attrs["phi"] = p.angles.at(1);
      attrs["lambda"] = p.angles.at(2);
      break;
    default:
      break;
    }
    std::vector<ir::ValueId> operands;
    for (uint32_t slot : p.args) operands.push_back(latest(args[slot]));
    auto &op = builder_->create(p.kind, std::move(operands), std::move(attrs));
    for (size_t i = 0; i < p.args.size(); ++i)
      update(args[p.args[i]], op.results[i]);
  }

  /// Load the creg's bits, assemble the little-endian integer (c[0] is the
  /// LSB), and compare against the constant.
  ir::ValueId emit_condition(const std::string &creg, uint64_t value) {
    const auto &cells = cells_.at(creg);
    if (cells.size() > 62)
      throw_error(ErrorKind::Unsupported,
                  "creg '" + creg + "' too wide for if-comparison");
    ir::ValueId acc;
    for (size_t i = 0; i < cells.size(); ++i) {
      ir::ValueId bit =
          builder_->create(ir::OpKind::MemLoadBit, {cells[i]}).results[0];
      if (i == 0) {
        acc = bit;
        continue;
      }
      ir::ValueId weight = builder_->const_int(int64_t{1} << i);
      ir::ValueId term =
          builder_->create(ir::OpKind::MulI, {bit, weight}).results[0];
      acc = builder_->create(ir::OpKind::AddI, {acc, term}).results[0];
    }
    ir::ValueId target = builder_->const_int(static_cast<int64_t>(value));
    return builder_->create(ir::OpKind::CmpEq, {acc, target}).results[0];
  }

  static std::vector<qasm::QubitRef> touched_qubits(const qasm::CondOp &op) {
    if (const auto *g = std::get_if<qasm::GateApply>(&op)) return g->qubits;
    if (const auto *m = std::get_if<qasm::MeasureStmt>(&op))
      return {m->qubit};
    return {std::get<qasm::ResetStmt>(op).qubit};
  }

  void emit_cond_body(const qasm::CondOp &op,
                      const std::vector<qasm::QubitRef> &touched) {
    (void)touched;
    if (const auto *g = std::get_if<qasm::GateApply>(&op)) {
      (*this)(*g);
    } else if (const auto *m = std::get_if<qasm::MeasureStmt>(&op)) {
      (*this)(*m);
    } else {
      (*this)(std::get<qasm::ResetStmt>(op));
    }
  }

  const qasm::QasmProgram &program_;
  ir::ModuleIR module_;
  std::optional<ir::OpBuilder> builder_;
  std::map<std::string, std::vector<ir::ValueId>> qubits_;
  std::map<std::string, std::vector<ir::ValueId>> cells_;
};

} // namespace detail

/// Raise an OpenQASM program into QSSA: one qubit<1> alloc per physical
/// qubit, one bit cell per classical bit, gates chained through the latest
/// SSA value of each qubit, measures decoupled into measure + store, and
/// `if (c==n)` encoded as loads + compare + scf.if with pass-through else.
/// The result verifies cleanly (types and single-use).
inline ir::ModuleIR raise(const qasm::QasmProgram &program) {
  detail::Raiser raiser(program);
  return raiser.run();
}

/// Expansion of a standard-library or user gate application into primitive
/// kinds (the raiser's core step, exposed for reuse and tests).
using qasm::expand_gate;
using qasm::PrimApp;

} // namespace qssa::raising

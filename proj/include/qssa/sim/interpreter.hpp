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
#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "qssa/ir/module.hpp"
#include "qssa/qasm/ast.hpp"
#include "qssa/qasm/expand.hpp"
#include "qssa/sim/statevector.hpp"
#include "qssa/support/error.hpp"

namespace qssa::sim {

inline constexpr uint32_t kMaxDistributionQubits = 12;
inline constexpr uint32_t kMaxMeasuredBits = 20;
inline constexpr uint32_t kMaxUnitaryQubits = 10;
inline constexpr double kBranchEpsilon = 1e-15;
inline constexpr size_t kMaxExecutedOps = 10'000'000;

/// Exact outcome distribution over classical bitstrings. The key's first
/// character is the first-declared classical bit.
struct OutcomeDistribution {
  std::map<std::string, double> probs;

  double total() const {
    double t = 0.0;
    for (const auto &[k, p] : probs) t += p;
    return t;
  }
};

/// Total-variation distance: (1/2) * sum |p - q| over the key union.
inline double tv_distance(const OutcomeDistribution &a,
                          const OutcomeDistribution &b) {
  double acc = 0.0;
  for (const auto &[k, p] : a.probs) {
    auto it = b.probs.find(k);
    acc += std::fabs(p - (it == b.probs.end() ? 0.0 : it->second));
  }
  for (const auto &[k, q] : b.probs)
    if (!a.probs.count(k)) acc += q;
  return acc / 2.0;
}

// ======================================================================
// Module interpreter (measurement branching, exact; no sampling)
// ======================================================================

namespace detail {

using QubitIndices = std::vector<uint32_t>;
using BitsValue = std::vector<uint8_t>;

using RuntimeValue = std::variant<std::monostate, QubitIndices, int64_t, bool,
                                  double, BitsValue, uint32_t /*cell*/>;

struct MachineState {
  Statevector sv;
  std::vector<uint8_t> cells;
  double weight = 1.0;
  uint32_t measured_bits = 0;
};

using Env = std::vector<RuntimeValue>;

inline const QubitIndices &as_qubits(const Env &env, ir::ValueId v) {
  if (const auto *q = std::get_if<QubitIndices>(&env[v.index])) return *q;
  throw_error(ErrorKind::Type, "runtime value is not a qubit array");
}
inline int64_t as_int(const Env &env, ir::ValueId v) {
  if (const auto *i = std::get_if<int64_t>(&env[v.index])) return *i;
  throw_error(ErrorKind::Type, "runtime value is not an int");
}
inline bool as_bool(const Env &env, ir::ValueId v) {
  if (const auto *b = std::get_if<bool>(&env[v.index])) return *b;
  throw_error(ErrorKind::Type, "runtime value is not a bool");
}
inline double as_angle(const Env &env, ir::ValueId v) {
  if (const auto *d = std::get_if<double>(&env[v.index])) return *d;
  throw_error(ErrorKind::Type, "runtime value is not an angle");
}
inline const BitsValue &as_bits(const Env &env, ir::ValueId v) {
  if (const auto *b = std::get_if<BitsValue>(&env[v.index])) return *b;
  throw_error(ErrorKind::Type, "runtime value is not a bits tensor");
}
inline uint32_t as_cell(const Env &env, ir::ValueId v) {
  if (const auto *c = std::get_if<uint32_t>(&env[v.index])) return *c;
  throw_error(ErrorKind::Type, "runtime value is not a bit cell");
}

/// Resolve a gate op's angles from attributes or angle operands.
inline std::vector<double> gate_angles_of(const ir::Operation &op,
                                          const Env &env) {
  std::vector<double> angles;
  if (ir::gate_attr_angles(op, angles)) return angles;
  for (size_t i = 1; i < op.operands.size(); ++i)
    angles.push_back(as_angle(env, op.operands[i]));
  return angles;
}

class ModuleInterp {
public:
  explicit ModuleInterp(const ir::ModuleIR &module) : module_(module) {}

  OutcomeDistribution run() {
    const ir::FunctionDef *main = module_.find("main");
    if (!main)
      throw_error(ErrorKind::Resolution, "module has no @main function");
    if (!main->body.entry().args.empty())
      throw_error(ErrorKind::Unsupported, "@main must take no arguments");
    check_structured(*main);
    MachineState st;
    Env env(main->num_values());
    run_block(*main, main->body.entry(), 0, std::move(st), std::move(env),
              [this](MachineState final, Env, std::vector<RuntimeValue>) {
                finalize(std::move(final));
              });
    return std::move(out_);
  }

private:
  using Cont = std::function<void(MachineState, Env, std::vector<RuntimeValue>)>;

  void check_structured(const ir::FunctionDef &func) {
    if (func.body.blocks.size() != 1)
      throw_error(ErrorKind::Unsupported,
                  "simulation requires structured (single-block) bodies");
  }

  void finalize(MachineState st) {
    std::string key(st.cells.size(), '0');
    for (size_t i = 0; i < st.cells.size(); ++i)
      if (st.cells[i]) key[i] = '1';
    out_.probs[key] += st.weight;
  }

  std::vector<double> gate_angles(const ir::Operation &op, const Env &env) {
    return gate_angles_of(op, env);
  }

  void budget() {
    if (++ops_executed_ > kMaxExecutedOps)
      throw_error(ErrorKind::TooLarge, "execution budget exceeded");
  }

  // -- main dispatch --

  void run_block(const ir::FunctionDef &func, const ir::Block &block,
                 size_t start, MachineState st, Env env, Cont done) {
    for (size_t i = start; i < block.ops.size(); ++i) {
      const ir::Operation &op = block.ops[i];
      budget();
      switch (op.kind) {
      case ir::OpKind::Return:
      case ir::OpKind::Yield: {
        std::vector<RuntimeValue> vals;
        for (ir::ValueId v : op.operands) vals.push_back(env[v.index]);
        done(std::move(st), std::move(env), std::move(vals));
        return;
      }

      case ir::OpKind::Alloc: {
        uint32_t n = op.has_attr("size")
                         ? static_cast<uint32_t>(op.int_attr("size"))
                         : static_cast<uint32_t>(as_int(env, op.operands[0]));
        if (st.sv.num_qubits() + n > kMaxDistributionQubits)
          throw_error(ErrorKind::TooLarge,
                      "distribution simulation capped at " +
                          std::to_string(kMaxDistributionQubits) + " qubits");
        QubitIndices idx(n);
        for (uint32_t k = 0; k < n; ++k) idx[k] = st.sv.num_qubits() + k;
        st.sv.add_qubits(n);
        env[op.results[0].index] = std::move(idx);
        break;
      }

      case ir::OpKind::CNOT: {
        const auto &c = as_qubits(env, op.operands[0]);
        const auto &t = as_qubits(env, op.operands[1]);
        st.sv.apply_cnot(c.at(0), t.at(0));
        env[op.results[0].index] = c;
        env[op.results[1].index] = t;
        break;
      }

      case ir::OpKind::X: case ir::OpKind::Y: case ir::OpKind::Z:
      case ir::OpKind::H: case ir::OpKind::S: case ir::OpKind::Sdg:
      case ir::OpKind::T: case ir::OpKind::Tdg: case ir::OpKind::Rx:
      case ir::OpKind::Ry: case ir::OpKind::Rz: case ir::OpKind::U: {
        const auto &q = as_qubits(env, op.operands[0]);
        apply_gate(st.sv, op.kind, gate_angles(op, env), {q.at(0)});
        env[op.results[0].index] = q;
        break;
      }

      case ir::OpKind::GenericGate: {
        QubitIndices all;
        for (size_t k = 0; k < op.operands.size(); ++k) {
          const auto &q = as_qubits(env, op.operands[k]);
          all.insert(all.end(), q.begin(), q.end());
          env[op.results[k].index] = q;
        }
        st.sv.apply_matrix(op.matrix_attr("matrix"), all);
        break;
      }

      case ir::OpKind::Measure: {
        QubitIndices q = as_qubits(env, op.operands[0]);
        st.measured_bits += static_cast<uint32_t>(q.size());
        if (st.measured_bits > kMaxMeasuredBits)
          throw_error(ErrorKind::TooLarge,
                      "more than " + std::to_string(kMaxMeasuredBits) +
                          " measured bits");
        fork_measure(func, block, i, op, std::move(q), 0, {}, std::move(st),
                     std::move(env), std::move(done));
        return;
      }

      case ir::OpKind::Reset: {
        QubitIndices q = as_qubits(env, op.operands[0]);
        fork_reset(func, block, i, op, q.at(0), std::move(st), std::move(env),
                   std::move(done));
        return;
      }

      case ir::OpKind::Split: {
        const auto &q = as_qubits(env, op.operands[0]);
        size_t a;
        if (op.operands.size() == 3) {
          int64_t ia = as_int(env, op.operands[1]);
          int64_t ib = as_int(env, op.operands[2]);
          if (ia < 0 || ib < 0 || size_t(ia + ib) != q.size())
            throw_error(ErrorKind::Type,
                        "dynamic split sizes do not cover the array");
          a = static_cast<size_t>(ia);
        } else {
          a = func.type_of(op.results[0]).size;
        }
        env[op.results[0].index] = QubitIndices(q.begin(), q.begin() + a);
        env[op.results[1].index] = QubitIndices(q.begin() + a, q.end());
        break;
      }

      case ir::OpKind::Concat: {
        QubitIndices joined = as_qubits(env, op.operands[0]);
        const auto &b = as_qubits(env, op.operands[1]);
        joined.insert(joined.end(), b.begin(), b.end());
        env[op.results[0].index] = std::move(joined);
        break;
      }

      case ir::OpKind::Dim: {
        const auto &q = as_qubits(env, op.operands[0]);
        env[op.results[0].index] = static_cast<int64_t>(q.size());
        env[op.results[1].index] = q;
        break;
      }

      case ir::OpKind::Cast: {
        env[op.results[0].index] = as_qubits(env, op.operands[0]);
        break;
      }

      case ir::OpKind::Barrier: {
        for (size_t k = 0; k < op.operands.size(); ++k)
          env[op.results[k].index] = as_qubits(env, op.operands[k]);
        break;
      }

      case ir::OpKind::Call: {
        const ir::FunctionDef *callee = module_.find(op.callee);
        if (!callee)
          throw_error(ErrorKind::Resolution, "unknown callee @" + op.callee);
        check_structured(*callee);
        Env callee_env(callee->num_values());
        const auto &params = callee->body.entry().args;
        for (size_t k = 0; k < params.size(); ++k)
          callee_env[params[k].index] = env[op.operands[k].index];
        Cont ret = [this, &func, &block, i, &op, caller = std::move(env),
                    done = std::move(done)](MachineState st2, Env,
                                            std::vector<RuntimeValue> rets) {
          Env resumed = caller; // fresh copy per returning branch
          for (size_t k = 0; k < op.results.size(); ++k)
            resumed[op.results[k].index] = std::move(rets[k]);
          run_block(func, block, i + 1, std::move(st2), std::move(resumed),
                    done);
        };
        run_block(*callee, callee->body.entry(), 0, std::move(st),
                  std::move(callee_env), std::move(ret));
        return;
      }

      case ir::OpKind::ScfIf: {
        bool cond = as_bool(env, op.operands[0]);
        const ir::Region &region = op.regions[cond ? 0 : 1];
        Cont after = [this, &func, &block, i, &op,
                      done = std::move(done)](MachineState st2, Env env2,
                                              std::vector<RuntimeValue> ys) {
          for (size_t k = 0; k < op.results.size(); ++k)
            env2[op.results[k].index] = std::move(ys[k]);
          run_block(func, block, i + 1, std::move(st2), std::move(env2),
                    done);
        };
        run_block(func, region.entry(), 0, std::move(st), std::move(env),
                  std::move(after));
        return;
      }

      case ir::OpKind::ScfFor: {
        int64_t lo = as_int(env, op.operands[0]);
        int64_t hi = as_int(env, op.operands[1]);
        int64_t step = as_int(env, op.operands[2]);
        if (step < 1)
          throw_error(ErrorKind::TooLarge, "scf.for step must be >= 1");
        std::vector<RuntimeValue> iters;
        for (size_t k = 3; k < op.operands.size(); ++k)
          iters.push_back(env[op.operands[k].index]);
        run_loop(func, block, i, op, lo, hi, step, std::move(iters),
                 std::move(st), std::move(env), std::move(done));
        return;
      }

      case ir::OpKind::ConstInt:
        env[op.results[0].index] = op.int_attr("value");
        break;
      case ir::OpKind::ConstAngle:
        env[op.results[0].index] = op.float_attr("value");
        break;
      case ir::OpKind::AddI:
        env[op.results[0].index] =
            as_int(env, op.operands[0]) + as_int(env, op.operands[1]);
        break;
      case ir::OpKind::SubI:
        env[op.results[0].index] =
            as_int(env, op.operands[0]) - as_int(env, op.operands[1]);
        break;
      case ir::OpKind::MulI:
        env[op.results[0].index] =
            as_int(env, op.operands[0]) * as_int(env, op.operands[1]);
        break;
      case ir::OpKind::CmpEq:
        env[op.results[0].index] =
            as_int(env, op.operands[0]) == as_int(env, op.operands[1]);
        break;

      case ir::OpKind::MemAllocBit:
        env[op.results[0].index] = static_cast<uint32_t>(st.cells.size());
        st.cells.push_back(0);
        break;
      case ir::OpKind::MemStoreBit: {
        const auto &bits = as_bits(env, op.operands[1]);
        st.cells.at(as_cell(env, op.operands[0])) = bits.at(0);
        break;
      }
      case ir::OpKind::MemLoadBit:
        env[op.results[0].index] =
            static_cast<int64_t>(st.cells.at(as_cell(env, op.operands[0])));
        break;

      case ir::OpKind::Br:
      case ir::OpKind::CondBr:
        throw_error(ErrorKind::Unsupported,
                    "simulation requires structured control flow");
      }
    }
  }

  void fork_measure(const ir::FunctionDef &func, const ir::Block &block,
                    size_t i, const ir::Operation &op, QubitIndices q,
                    size_t j, BitsValue bits, MachineState st, Env env,
                    Cont done) {
    if (j == q.size()) {
      env[op.results[0].index] = std::move(bits);
      env[op.results[1].index] = std::move(q);
      run_block(func, block, i + 1, std::move(st), std::move(env),
                std::move(done));
      return;
    }
    for (int bit = 0; bit <= 1; ++bit) {
      double p = st.sv.outcome_probability(q[j], bit);
      if (p <= kBranchEpsilon) continue;
      MachineState st2 = st;
      st2.sv.collapse(q[j], bit, p);
      st2.weight *= p;
      BitsValue bits2 = bits;
      bits2.push_back(static_cast<uint8_t>(bit));
      fork_measure(func, block, i, op, q, j + 1, std::move(bits2),
                   std::move(st2), env, done);
    }
  }

  void fork_reset(const ir::FunctionDef &func, const ir::Block &block,
                  size_t i, const ir::Operation &op, uint32_t target,
                  MachineState st, Env env, Cont done) {
    const auto &q = as_qubits(env, op.operands[0]);
    for (int bit = 0; bit <= 1; ++bit) {
      double p = st.sv.outcome_probability(target, bit);
      if (p <= kBranchEpsilon) continue;
      MachineState st2 = st;
      st2.sv.collapse(target, bit, p);
      st2.weight *= p;
      if (bit == 1) st2.sv.apply_1q(ir::gate_unitary(ir::OpKind::X, {}), target);
      Env env2 = env;
      env2[op.results[0].index] = q;
      run_block(func, block, i + 1, std::move(st2), std::move(env2), done);
    }
  }

  void run_loop(const ir::FunctionDef &func, const ir::Block &block, size_t i,
                const ir::Operation &op, int64_t k, int64_t hi, int64_t step,
                std::vector<RuntimeValue> iters, MachineState st, Env env,
                Cont done) {
    if (k >= hi) {
      for (size_t r = 0; r < op.results.size(); ++r)
        env[op.results[r].index] = std::move(iters[r]);
      run_block(func, block, i + 1, std::move(st), std::move(env),
                std::move(done));
      return;
    }
    const ir::Block &body = op.regions[0].entry();
    env[body.args[0].index] = k;
    for (size_t r = 0; r < iters.size(); ++r)
      env[body.args[r + 1].index] = iters[r];
    Cont next = [this, &func, &block, i, &op, k, hi, step,
                 done = std::move(done)](MachineState st2, Env env2,
                                         std::vector<RuntimeValue> ys) {
      run_loop(func, block, i, op, k + step, hi, step, std::move(ys),
               std::move(st2), std::move(env2), done);
    };
    run_block(func, body, 0, std::move(st), std::move(env), std::move(next));
  }

  const ir::ModuleIR &module_;
  OutcomeDistribution out_;
  size_t ops_executed_ = 0;
};

} // namespace detail

/// Exact outcome distribution of a module: every Measure branches on both
/// outcomes weighted by |amplitude|^2; Reset branches and re-zeroes;
/// classically controlled scf.if recursion follows stored bits. The key's
/// character k is bit cell k (allocation order). Deterministic; no sampling.
inline OutcomeDistribution run_distribution(const ir::ModuleIR &module) {
  detail::ModuleInterp interp(module);
  return interp.run();
}

// ======================================================================
// QASM AST reference interpreter
// ======================================================================

namespace detail {

class QasmInterp {
public:
  explicit QasmInterp(const qasm::QasmProgram &program) : program_(program) {}

  OutcomeDistribution run() {
    uint32_t qubits = 0, bits = 0;
    for (const auto &st : program_.statements) {
      if (const auto *q = std::get_if<qasm::QregDecl>(&st)) {
        qreg_base_[q->name] = qubits;
        qubits += q->size;
      } else if (const auto *c = std::get_if<qasm::CregDecl>(&st)) {
        creg_base_[c->name] = {bits, c->size};
        bits += c->size;
      }
    }
    if (qubits > kMaxDistributionQubits)
      throw_error(ErrorKind::TooLarge, "program uses too many qubits");
    if (bits > kMaxMeasuredBits)
      throw_error(ErrorKind::TooLarge, "program uses too many classical bits");
    Statevector sv(qubits);
    std::vector<uint8_t> cbits(bits, 0);
    run_stmt(0, std::move(sv), std::move(cbits), 1.0);
    return std::move(out_);
  }

private:
  uint32_t qubit_index(const qasm::QubitRef &ref) const {
    return qreg_base_.at(ref.reg) + ref.index;
  }

  void run_stmt(size_t i, Statevector sv, std::vector<uint8_t> cbits,
                double weight) {
    for (; i < program_.statements.size(); ++i) {
      const auto &st = program_.statements[i];
      if (const auto *g = std::get_if<qasm::GateApply>(&st)) {
        apply(*g, sv);
      } else if (const auto *m = std::get_if<qasm::MeasureStmt>(&st)) {
        fork_measure(i, *m, std::move(sv), std::move(cbits), weight);
        return;
      } else if (const auto *r = std::get_if<qasm::ResetStmt>(&st)) {
        fork_reset(i, *r, std::move(sv), std::move(cbits), weight);
        return;
      } else if (const auto *f = std::get_if<qasm::IfStmt>(&st)) {
        if (creg_value(*f, cbits) == f->value) {
          if (const auto *g2 = std::get_if<qasm::GateApply>(&f->op)) {
            apply(*g2, sv);
          } else if (const auto *m2 = std::get_if<qasm::MeasureStmt>(&f->op)) {
            fork_measure(i, *m2, std::move(sv), std::move(cbits), weight);
            return;
          } else {
            fork_reset(i, std::get<qasm::ResetStmt>(f->op), std::move(sv),
                       std::move(cbits), weight);
            return;
          }
        }
      }
      // declarations, gate defs, barriers: no runtime action
    }
    std::string key(cbits.size(), '0');
    for (size_t k = 0; k < cbits.size(); ++k)
      if (cbits[k]) key[k] = '1';
    out_.probs[key] += weight;
  }

  uint64_t creg_value(const qasm::IfStmt &f,
                      const std::vector<uint8_t> &cbits) const {
    auto [base, size] = creg_base_.at(f.creg);
    uint64_t v = 0;
    for (uint32_t b = 0; b < size; ++b)
      if (cbits[base + b]) v |= uint64_t{1} << b; // c[0] is the LSB
    return v;
  }

  void apply(const qasm::GateApply &g, Statevector &sv) {
    auto prims = qasm::expand_gate(program_, g.name, g.params,
                                   static_cast<uint32_t>(g.qubits.size()));
    for (const auto &p : prims) {
      if (p.barrier) continue;
      std::vector<uint32_t> targets;
      for (uint32_t slot : p.args) targets.push_back(qubit_index(g.qubits[slot]));
      apply_gate(sv, p.kind, p.angles, targets);
    }
  }

  void fork_measure(size_t i, const qasm::MeasureStmt &m, Statevector sv,
                    std::vector<uint8_t> cbits, double weight) {
    uint32_t target = qubit_index(m.qubit);
    auto [base, size] = creg_base_.at(m.bit.reg);
    (void)size;
    for (int bit = 0; bit <= 1; ++bit) {
      double p = sv.outcome_probability(target, bit);
      if (p <= kBranchEpsilon) continue;
      Statevector sv2 = sv;
      sv2.collapse(target, bit, p);
      auto cbits2 = cbits;
      cbits2[base + m.bit.index] = static_cast<uint8_t>(bit);
      run_stmt(i + 1, std::move(sv2), std::move(cbits2), weight * p);
    }
  }

  void fork_reset(size_t i, const qasm::ResetStmt &r, Statevector sv,
                  std::vector<uint8_t> cbits, double weight) {
    uint32_t target = qubit_index(r.qubit);
    for (int bit = 0; bit <= 1; ++bit) {
      double p = sv.outcome_probability(target, bit);
      if (p <= kBranchEpsilon) continue;
      Statevector sv2 = sv;
      sv2.collapse(target, bit, p);
      if (bit == 1) sv2.apply_1q(ir::gate_unitary(ir::OpKind::X, {}), target);
      run_stmt(i + 1, std::move(sv2), cbits, weight * p);
    }
  }

  const qasm::QasmProgram &program_;
  std::map<std::string, uint32_t> qreg_base_;
  std::map<std::string, std::pair<uint32_t, uint32_t>> creg_base_;
  OutcomeDistribution out_;
};

} // namespace detail

/// Reference semantics: drive the AST directly through the same statevector
/// core. Key layout matches run_distribution on raised modules: classical
/// bits in declaration order, c[0] first.
inline OutcomeDistribution run_distribution(const qasm::QasmProgram &program) {
  detail::QasmInterp interp(program);
  return interp.run();
}

// ======================================================================
// Full-circuit unitary
// ======================================================================

namespace detail {

struct TracedGate {
  CMatrix matrix;
  std::vector<uint32_t> targets;
};

/// Deterministic walk of a measurement-free module collecting the gate
/// sequence with physical targets. Control flow must be compile-time
/// constant; Measure and Reset raise HasMeasurement.
class UnitaryTracer {
public:
  explicit UnitaryTracer(const ir::ModuleIR &module) : module_(module) {}

  std::pair<uint32_t, std::vector<TracedGate>> trace() {
    const ir::FunctionDef *main = module_.find("main");
    if (!main)
      throw_error(ErrorKind::Resolution, "module has no @main function");
    if (main->body.blocks.size() != 1)
      throw_error(ErrorKind::Unsupported,
                  "circuit_unitary requires a structured body");
    Env env(main->num_values());
    run(*main, main->body.entry(), env);
    return {qubits_, std::move(gates_)};
  }

private:
  std::vector<RuntimeValue> run(const ir::FunctionDef &func,
                                const ir::Block &block, Env &env) {
    for (const auto &op : block.ops) {
      if (++steps_ > kMaxExecutedOps)
        throw_error(ErrorKind::TooLarge, "trace budget exceeded");
      switch (op.kind) {
      case ir::OpKind::Return:
      case ir::OpKind::Yield: {
        std::vector<RuntimeValue> vals;
        for (ir::ValueId v : op.operands) vals.push_back(env[v.index]);
        return vals;
      }

      case ir::OpKind::Measure:
      case ir::OpKind::Reset:
      case ir::OpKind::MemStoreBit:
        throw_error(ErrorKind::HasMeasurement,
                    "circuit_unitary requires a measurement-free module");

      case ir::OpKind::Alloc: {
        uint32_t n = op.has_attr("size")
                         ? static_cast<uint32_t>(op.int_attr("size"))
                         : static_cast<uint32_t>(as_int(env, op.operands[0]));
        if (qubits_ + n > kMaxUnitaryQubits)
          throw_error(ErrorKind::TooLarge,
                      "circuit_unitary capped at " +
                          std::to_string(kMaxUnitaryQubits) + " qubits");
        QubitIndices idx(n);
        for (uint32_t k = 0; k < n; ++k) idx[k] = qubits_ + k;
        qubits_ += n;
        env[op.results[0].index] = std::move(idx);
        break;
      }

      case ir::OpKind::CNOT: {
        const auto &c = as_qubits(env, op.operands[0]);
        const auto &t = as_qubits(env, op.operands[1]);
        gates_.push_back({ir::gate_unitary(op.kind, {}), {c.at(0), t.at(0)}});
        env[op.results[0].index] = c;
        env[op.results[1].index] = t;
        break;
      }

      case ir::OpKind::X: case ir::OpKind::Y: case ir::OpKind::Z:
      case ir::OpKind::H: case ir::OpKind::S: case ir::OpKind::Sdg:
      case ir::OpKind::T: case ir::OpKind::Tdg: case ir::OpKind::Rx:
      case ir::OpKind::Ry: case ir::OpKind::Rz: case ir::OpKind::U: {
        const auto &q = as_qubits(env, op.operands[0]);
        gates_.push_back(
            {ir::gate_unitary(op.kind, gate_angles_of(op, env)), {q.at(0)}});
        env[op.results[0].index] = q;
        break;
      }

      case ir::OpKind::GenericGate: {
        QubitIndices all;
        for (size_t k = 0; k < op.operands.size(); ++k) {
          const auto &q = as_qubits(env, op.operands[k]);
          all.insert(all.end(), q.begin(), q.end());
          env[op.results[k].index] = q;
        }
        gates_.push_back({op.matrix_attr("matrix"), std::move(all)});
        break;
      }

      case ir::OpKind::Split: {
        const auto &q = as_qubits(env, op.operands[0]);
        size_t a = op.operands.size() == 3
                       ? static_cast<size_t>(as_int(env, op.operands[1]))
                       : func.type_of(op.results[0]).size;
        if (a > q.size())
          throw_error(ErrorKind::Type, "split sizes do not cover the array");
        env[op.results[0].index] = QubitIndices(q.begin(), q.begin() + a);
        env[op.results[1].index] = QubitIndices(q.begin() + a, q.end());
        break;
      }

      case ir::OpKind::Concat: {
        QubitIndices joined = as_qubits(env, op.operands[0]);
        const auto &b = as_qubits(env, op.operands[1]);
        joined.insert(joined.end(), b.begin(), b.end());
        env[op.results[0].index] = std::move(joined);
        break;
      }

      case ir::OpKind::Dim: {
        const auto &q = as_qubits(env, op.operands[0]);
        env[op.results[0].index] = static_cast<int64_t>(q.size());
        env[op.results[1].index] = q;
        break;
      }

      case ir::OpKind::Cast:
        env[op.results[0].index] = as_qubits(env, op.operands[0]);
        break;

      case ir::OpKind::Barrier:
        for (size_t k = 0; k < op.operands.size(); ++k)
          env[op.results[k].index] = as_qubits(env, op.operands[k]);
        break;

      case ir::OpKind::Call: {
        const ir::FunctionDef *callee = module_.find(op.callee);
        if (!callee)
          throw_error(ErrorKind::Resolution, "unknown callee @" + op.callee);
        Env callee_env(callee->num_values());
        const auto &params = callee->body.entry().args;
        for (size_t k = 0; k < params.size(); ++k)
          callee_env[params[k].index] = env[op.operands[k].index];
        auto rets = run(*callee, callee->body.entry(), callee_env);
        for (size_t k = 0; k < op.results.size(); ++k)
          env[op.results[k].index] = std::move(rets[k]);
        break;
      }

      case ir::OpKind::ScfIf: {
        bool cond = as_bool(env, op.operands[0]);
        auto ys = run(func, op.regions[cond ? 0 : 1].entry(), env);
        for (size_t k = 0; k < op.results.size(); ++k)
          env[op.results[k].index] = std::move(ys[k]);
        break;
      }

      case ir::OpKind::ScfFor: {
        int64_t lo = as_int(env, op.operands[0]);
        int64_t hi = as_int(env, op.operands[1]);
        int64_t step = as_int(env, op.operands[2]);
        if (step < 1)
          throw_error(ErrorKind::TooLarge, "scf.for step must be >= 1");
        std::vector<RuntimeValue> iters;
        for (size_t k = 3; k < op.operands.size(); ++k)
          iters.push_back(env[op.operands[k].index]);
        const ir::Block &body = op.regions[0].entry();
        for (int64_t k = lo; k < hi; k += step) {
          env[body.args[0].index] = k;
          for (size_t r = 0; r < iters.size(); ++r)
            env[body.args[r + 1].index] = iters[r];
          iters = run(func, body, env);
        }
        for (size_t r = 0; r < op.results.size(); ++r)
          env[op.results[r].index] = std::move(iters[r]);
        break;
      }

      case ir::OpKind::ConstInt:
        env[op.results[0].index] = op.int_attr("value");
        break;
      case ir::OpKind::ConstAngle:
        env[op.results[0].index] = op.float_attr("value");
        break;
      case ir::OpKind::AddI:
        env[op.results[0].index] =
            as_int(env, op.operands[0]) + as_int(env, op.operands[1]);
        break;
      case ir::OpKind::SubI:
        env[op.results[0].index] =
            as_int(env, op.operands[0]) - as_int(env, op.operands[1]);
        break;
      case ir::OpKind::MulI:
        env[op.results[0].index] =
            as_int(env, op.operands[0]) * as_int(env, op.operands[1]);
        break;
      case ir::OpKind::CmpEq:
        env[op.results[0].index] =
            as_int(env, op.operands[0]) == as_int(env, op.operands[1]);
        break;

      case ir::OpKind::MemAllocBit:
        env[op.results[0].index] = cell_count_++;
        break;
      case ir::OpKind::MemLoadBit:
        env[op.results[0].index] = int64_t{0}; // cells can never be written
        break;

      case ir::OpKind::Br:
      case ir::OpKind::CondBr:
        throw_error(ErrorKind::Unsupported,
                    "circuit_unitary requires structured control flow");
      }
    }
    return {};
  }

  const ir::ModuleIR &module_;
  uint32_t qubits_ = 0;
  uint32_t cell_count_ = 0;
  std::vector<TracedGate> gates_;
  size_t steps_ = 0;
};

} // namespace detail

/// Product of the module's gate unitaries in def-use order, as a 2^n x 2^n
/// matrix: each basis column is pushed through the generic matrix-embedding
/// path. Errors with HasMeasurement on Measure/Reset.
inline CMatrix circuit_unitary(const ir::ModuleIR &module) {
  detail::UnitaryTracer tracer(module);
  auto [n, gates] = tracer.trace();
  size_t dim = size_t{1} << n;
  CMatrix out(dim, dim);
  for (size_t col = 0; col < dim; ++col) {
    Statevector sv(n);
    sv.amplitudes().assign(dim, Complex{});
    sv.amplitudes()[col] = 1.0;
    for (const auto &g : gates) sv.apply_matrix(g.matrix, g.targets);
    for (size_t row = 0; row < dim; ++row) out(row, col) = sv.amplitudes()[row];
  }
  return out;
}

} // namespace qssa::sim

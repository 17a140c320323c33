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
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qssa/ir/build.hpp"
#include "qssa/ir/gates.hpp"
#include "qssa/ir/module.hpp"
#include "qssa/support/numeric.hpp"

namespace qssa::opt {

struct PassReport {
  std::string pass;
  size_t rewrites = 0;
  size_t ops_before = 0;
  size_t ops_after = 0;
  std::vector<std::string> notes;
};

// ======================================================================
// Declarative DAG rewrite table
// ======================================================================

/// One node of a matcher DAG. Wires are small integers; a wire bound to an
/// earlier node's output expresses a def-use edge the match must follow.
/// Wires appearing only as inputs capture incoming values.
struct PatternOp {
  std::vector<ir::OpKind> kinds; // any of these kinds matches
  std::vector<int> ins;          // wire per operand slot
  std::vector<int> outs;         // wire per result slot
};

struct MatchContext {
  std::vector<ir::Operation *> ops;    // per pattern node
  std::map<int, ir::ValueId> wires;    // wire variable -> bound value

  ir::ValueId wire(int w) const { return wires.at(w); }
  const ir::Operation &op(size_t node) const { return *ops[node]; }
};

class RewriteEditor;

/// A rewrite rule: matcher DAG (nodes.back() is the anchor) plus a
/// replacement. The replacement is either fully declarative (erase matched
/// nodes, forward wires) or a build hook for merged operations.
struct RewriteRule {
  std::string name;
  int benefit = 1;
  std::vector<PatternOp> nodes;
  std::function<bool(const ir::FunctionDef &, const MatchContext &)> guard;
  std::vector<size_t> erase_nodes;           // node indices to delete
  std::vector<std::pair<int, int>> forwards; // wire -> wire substitutions
  std::function<void(RewriteEditor &, const MatchContext &)> apply_hook;
};

/// Mutation surface handed to rule applications.
class RewriteEditor {
public:
  RewriteEditor(ir::FunctionDef &func, ir::Block &block, size_t anchor_index,
                PassReport &report)
      : func_(func), block_(block), anchor_index_(anchor_index),
        report_(report) {}

  ir::FunctionDef &func() { return func_; }

  /// Replace every use of `from` in the function with `to`.
  void replace_all_uses(ir::ValueId from, ir::ValueId to) {
    walk_ops(func_, [&](ir::Operation &op) {
      for (auto &operand : op.operands)
        if (operand == from) operand = to;
    });
  }

  /// Insert a fresh single-result op right before the anchor position.
  ir::ValueId insert_before_anchor(ir::OpKind kind,
                                   std::vector<ir::ValueId> operands,
                                   ir::AttrMap attrs, ir::Type result_type) {
    ir::Operation op;
    op.kind = kind;
    op.operands = std::move(operands);
    op.attrs = std::move(attrs);
    op.results.push_back(func_.new_value(result_type));
    block_.ops.insert(block_.ops.begin() + anchor_index_, std::move(op));
    ++anchor_index_;
    return block_.ops[anchor_index_ - 1].results[0];
  }

  /// Remove matched ops. Call before insert_before_anchor: insertion moves
  /// elements and would invalidate the matched pointers.
  void erase(const std::vector<ir::Operation *> &victims) {
    auto is_victim = [&](const ir::Operation &op) {
      return std::find(victims.begin(), victims.end(), &op) != victims.end();
    };
    auto &ops = block_.ops;
    size_t before_anchor = 0;
    for (size_t i = 0; i < ops.size() && i < anchor_index_; ++i)
      if (is_victim(ops[i])) ++before_anchor;
    ops.erase(std::remove_if(ops.begin(), ops.end(), is_victim), ops.end());
    anchor_index_ -= before_anchor;
  }

  void note(std::string text) { report_.notes.push_back(std::move(text)); }

private:
  ir::FunctionDef &func_;
  ir::Block &block_;
  size_t anchor_index_;
  PassReport &report_;
};

namespace detail {

inline bool kind_in(ir::OpKind k, const std::vector<ir::OpKind> &kinds) {
  return std::find(kinds.begin(), kinds.end(), k) != kinds.end();
}

/// Try to match `rule` with `anchor` (at ops[anchor_index] of block). The
/// match walks operand edges backwards; all matched ops must sit in the
/// same block, so rewrites never cross region boundaries or barriers.
inline std::optional<MatchContext>
match_rule(const ir::FunctionDef &func, ir::Block &block, size_t anchor_index,
           const RewriteRule &rule) {
  ir::Operation &anchor = block.ops[anchor_index];
  const PatternOp &anchor_node = rule.nodes.back();
  if (!kind_in(anchor.kind, anchor_node.kinds)) return std::nullopt;
  if (anchor.operands.size() != anchor_node.ins.size() ||
      anchor.results.size() != anchor_node.outs.size())
    return std::nullopt;

  MatchContext ctx;
  ctx.ops.assign(rule.nodes.size(), nullptr);
  ctx.ops.back() = &anchor;

  auto bind = [&](int wire, ir::ValueId v) {
    auto it = ctx.wires.find(wire);
    if (it != ctx.wires.end()) return it->second == v;
    ctx.wires[wire] = v;
    return true;
  };
  for (size_t s = 0; s < anchor.operands.size(); ++s)
    if (!bind(anchor_node.ins[s], anchor.operands[s])) return std::nullopt;
  for (size_t s = 0; s < anchor.results.size(); ++s)
    if (!bind(anchor_node.outs[s], anchor.results[s])) return std::nullopt;

  // Match earlier nodes in reverse order: some output wire is already
  // bound, so find its defining op within the block.
  for (size_t n = rule.nodes.size() - 1; n-- > 0;) {
    const PatternOp &node = rule.nodes[n];
    ir::ValueId needle;
    int needle_slot = -1;
    for (size_t s = 0; s < node.outs.size(); ++s) {
      auto it = ctx.wires.find(node.outs[s]);
      if (it != ctx.wires.end()) {
        needle = it->second;
        needle_slot = static_cast<int>(s);
        break;
      }
    }
    if (needle_slot < 0) return std::nullopt; // disconnected pattern
    ir::Operation *def = nullptr;
    for (size_t i = 0; i < anchor_index; ++i) {
      for (ir::ValueId r : block.ops[i].results)
        if (r == needle) {
          def = &block.ops[i];
          break;
        }
      if (def) break;
    }
    if (!def || !kind_in(def->kind, node.kinds)) return std::nullopt;
    if (def->operands.size() != node.ins.size() ||
        def->results.size() != node.outs.size())
      return std::nullopt;
    if (std::find(ctx.ops.begin(), ctx.ops.end(), def) != ctx.ops.end())
      return std::nullopt;
    if (def->results[needle_slot] != needle) return std::nullopt;
    for (size_t s = 0; s < def->results.size(); ++s)
      if (!bind(node.outs[s], def->results[s])) return std::nullopt;
    for (size_t s = 0; s < def->operands.size(); ++s)
      if (!bind(node.ins[s], def->operands[s])) return std::nullopt;
    ctx.ops[n] = def;
  }

  if (rule.guard && !rule.guard(func, ctx)) return std::nullopt;
  return ctx;
}

inline void apply_rule(ir::FunctionDef &func, ir::Block &block,
                       size_t anchor_index, const RewriteRule &rule,
                       MatchContext &ctx, PassReport &report) {
  RewriteEditor editor(func, block, anchor_index, report);
  if (rule.apply_hook) {
    rule.apply_hook(editor, ctx);
    return;
  }
  for (const auto &[from_wire, to_wire] : rule.forwards)
    editor.replace_all_uses(ctx.wire(from_wire), ctx.wire(to_wire));
  std::vector<ir::Operation *> victims;
  for (size_t n : rule.erase_nodes) victims.push_back(ctx.ops[n]);
  editor.erase(victims);
}

} // namespace detail

// ======================================================================
// The peephole identity table
// ======================================================================

namespace detail {

inline const std::vector<ir::OpKind> &pauli_kinds() {
  static const std::vector<ir::OpKind> k{ir::OpKind::X, ir::OpKind::Y,
                                         ir::OpKind::Z};
  return k;
}

/// Single-qubit gates whose matrix is known from attributes alone; adjoint
/// pairs (S/Sdg, T/Tdg, Rz(a)/Rz(-a)) cancel through the same matrix product
/// used for U merging.
inline const std::vector<ir::OpKind> &mergeable_kinds() {
  static const std::vector<ir::OpKind> k{
      ir::OpKind::U,  ir::OpKind::Rx,  ir::OpKind::Ry, ir::OpKind::Rz,
      ir::OpKind::S,  ir::OpKind::Sdg, ir::OpKind::T,  ir::OpKind::Tdg};
  return k;
}

/// Gates diagonal in the Z basis; safe to drop immediately before measure.
inline const std::vector<ir::OpKind> &z_diagonal_kinds() {
  static const std::vector<ir::OpKind> k{
      ir::OpKind::Rz, ir::OpKind::Z,   ir::OpKind::S,
      ir::OpKind::Sdg, ir::OpKind::T,  ir::OpKind::Tdg, ir::OpKind::U};
  return k;
}

inline bool attr_matrix(const ir::Operation &op, CMatrix &out) {
  std::vector<double> angles;
  if (!ir::gate_attr_angles(op, angles)) return false;
  out = ir::gate_unitary(op.kind, angles);
  return true;
}

inline std::vector<RewriteRule> build_peephole_table() {
  std::vector<RewriteRule> table;

  // (1) CNOT applied to the results of a CNOT on the same wires.
  {
    RewriteRule r;
    r.name = "cnot-cnot";
    r.benefit = 10;
    r.nodes = {
        {{ir::OpKind::CNOT}, {0, 1}, {2, 3}},
        {{ir::OpKind::CNOT}, {2, 3}, {4, 5}},
    };
    r.erase_nodes = {0, 1};
    r.forwards = {{4, 0}, {5, 1}};
    table.push_back(std::move(r));
  }

  // (4) Hadamard self-adjoint.
  {
    RewriteRule r;
    r.name = "h-h";
    r.benefit = 9;
    r.nodes = {
        {{ir::OpKind::H}, {0}, {1}},
        {{ir::OpKind::H}, {1}, {2}},
    };
    r.erase_nodes = {0, 1};
    r.forwards = {{2, 0}};
    table.push_back(std::move(r));
  }

  // (3) Pauli relations: equal pair cancels...
  {
    RewriteRule r;
    r.name = "pauli-pair";
    r.benefit = 8;
    r.nodes = {
        {pauli_kinds(), {0}, {1}},
        {pauli_kinds(), {1}, {2}},
    };
    r.guard = [](const ir::FunctionDef &, const MatchContext &ctx) {
      return ctx.op(0).kind == ctx.op(1).kind;
    };
    r.erase_nodes = {0, 1};
    r.forwards = {{2, 0}};
    table.push_back(std::move(r));
  }

  // ...and any adjacent run of three distinct Paulis is the identity up to
  // the global phase +-i (X^2 = Y^2 = Z^2 = -iXYZ = I).
  {
    RewriteRule r;
    r.name = "pauli-xyz";
    r.benefit = 7;
    r.nodes = {
        {pauli_kinds(), {0}, {1}},
        {pauli_kinds(), {1}, {2}},
        {pauli_kinds(), {2}, {3}},
    };
    r.guard = [](const ir::FunctionDef &, const MatchContext &ctx) {
      ir::OpKind a = ctx.op(0).kind, b = ctx.op(1).kind, c = ctx.op(2).kind;
      return a != b && b != c && a != c;
    };
    r.apply_hook = [](RewriteEditor &editor, const MatchContext &ctx) {
      editor.note("pauli-xyz dropped a +-i global phase");
      editor.replace_all_uses(ctx.wire(3), ctx.wire(0));
      editor.erase({ctx.ops[0], ctx.ops[1], ctx.ops[2]});
    };
    table.push_back(std::move(r));
  }

  // (5) Z-basis-diagonal gate feeding a measure.
  {
    RewriteRule r;
    r.name = "phase-before-measure";
    r.benefit = 6;
    r.nodes = {
        {z_diagonal_kinds(), {0}, {1}},
        {{ir::OpKind::Measure}, {1}, {2, 3}},
    };
    r.guard = [](const ir::FunctionDef &, const MatchContext &ctx) {
      const ir::Operation &gate = ctx.op(0);
      std::vector<double> angles;
      if (!ir::gate_attr_angles(gate, angles)) return false;
      // U is diagonal iff sin(theta/2) == 0.
      if (gate.kind == ir::OpKind::U) return angle_is_zero(angles.at(0));
      return true;
    };
    r.erase_nodes = {0};
    r.forwards = {{1, 0}}; // measure reads the gate's input directly
    table.push_back(std::move(r));
  }

  // (2) U gate merging: adjacent mergeable gates combine into one U whose
  // angles are re-extracted from the 2x2 matrix product; identity products
  // cancel outright.
  {
    RewriteRule r;
    r.name = "u-merge";
    r.benefit = 5;
    r.nodes = {
        {mergeable_kinds(), {0}, {1}},
        {mergeable_kinds(), {1}, {2}},
    };
    r.guard = [](const ir::FunctionDef &, const MatchContext &ctx) {
      CMatrix m;
      return attr_matrix(ctx.op(0), m) && attr_matrix(ctx.op(1), m);
    };
    r.apply_hook = [](RewriteEditor &editor, const MatchContext &ctx) {
      CMatrix first, second;
      attr_matrix(ctx.op(0), first);
      attr_matrix(ctx.op(1), second);
      CMatrix product = second * first;
      if (equiv_up_to_global_phase(product, CMatrix::identity(2), 1e-12)) {
        editor.replace_all_uses(ctx.wire(2), ctx.wire(0));
        editor.erase({ctx.ops[0], ctx.ops[1]});
        return;
      }
      ir::ZYZAngles zyz = ir::zyz_from_matrix(product);
      editor.erase({ctx.ops[0], ctx.ops[1]});
      ir::ValueId merged = editor.insert_before_anchor(
          ir::OpKind::U, {ctx.wire(0)},
          {{"theta", zyz.theta}, {"phi", zyz.phi}, {"lambda", zyz.lambda}},
          ir::Type::qubit(1));
      editor.replace_all_uses(ctx.wire(2), merged);
    };
    table.push_back(std::move(r));
  }

  std::stable_sort(table.begin(), table.end(),
                   [](const RewriteRule &a, const RewriteRule &b) {
                     return a.benefit > b.benefit;
                   });
  return table;
}

inline const std::vector<RewriteRule> &peephole_table() {
  static const std::vector<RewriteRule> table = build_peephole_table();
  return table;
}

/// One fixpoint scan over a block with the rule table; returns rewrites
/// applied. Nested regions are processed independently.
inline size_t rewrite_block(ir::FunctionDef &func, ir::Block &block,
                            const std::vector<RewriteRule> &table,
                            PassReport &report, size_t budget) {
  size_t applied = 0;
  bool changed = true;
  while (changed && applied < budget) {
    changed = false;
    for (size_t i = 0; i < block.ops.size() && !changed; ++i) {
      for (const RewriteRule &rule : table) {
        auto ctx = match_rule(func, block, i, rule);
        if (!ctx) continue;
        apply_rule(func, block, i, rule, *ctx, report);
        ++applied;
        ++report.rewrites;
        changed = true;
        break;
      }
    }
  }
  return applied;
}

inline void rewrite_region(ir::FunctionDef &func, ir::Region &region,
                           const std::vector<RewriteRule> &table,
                           PassReport &report, size_t budget) {
  for (auto &block : region.blocks) {
    rewrite_block(func, block, table, report, budget);
    for (auto &op : block.ops)
      for (auto &nested : op.regions)
        rewrite_region(func, nested, table, report, budget);
  }
}

} // namespace detail

/// Fixpoint application of the five peephole identity families over the
/// def-use DAG (worklist in deterministic program order, iteration cap of
/// 100x the op count). Patterns never match across a barrier or region
/// boundary.
inline PassReport run_peepholes(ir::ModuleIR &module) {
  PassReport report;
  report.pass = "peephole";
  report.ops_before = ir::count_ops(module);
  for (auto &func : module.functions) {
    size_t budget = 100 * (ir::count_ops(func) + 1);
    detail::rewrite_region(func, func.body, detail::peephole_table(), report,
                           budget);
  }
  report.ops_after = ir::count_ops(module);
  return report;
}

} // namespace qssa::opt

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
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qssa/ir/module.hpp"
#include "qssa/opt/rewrite.hpp"
#include "qssa/support/numeric.hpp"

namespace qssa::opt {

namespace detail {

// ---- cloning with value remapping (inlining, unrolling) ----

using ValueMap = std::map<uint32_t, ir::ValueId>;

inline ir::ValueId remap(const ValueMap &vmap, ir::ValueId v) {
  auto it = vmap.find(v.index);
  return it == vmap.end() ? v : it->second;
}

inline ir::Region clone_region(const ir::Region &src,
                               const ir::FunctionDef &src_func,
                               ir::FunctionDef &dst_func, ValueMap &vmap);

inline ir::Operation clone_op(const ir::Operation &src,
                              const ir::FunctionDef &src_func,
                              ir::FunctionDef &dst_func, ValueMap &vmap) {
  ir::Operation out;
  out.kind = src.kind;
  out.attrs = src.attrs;
  out.callee = src.callee;
  out.successors = src.successors;
  out.loc = src.loc;
  for (ir::ValueId v : src.operands) out.operands.push_back(remap(vmap, v));
  for (const auto &region : src.regions)
    out.regions.push_back(clone_region(region, src_func, dst_func, vmap));
  for (ir::ValueId r : src.results) {
    ir::ValueId fresh = dst_func.new_value(src_func.type_of(r));
    vmap[r.index] = fresh;
    out.results.push_back(fresh);
  }
  return out;
}

inline ir::Region clone_region(const ir::Region &src,
                               const ir::FunctionDef &src_func,
                               ir::FunctionDef &dst_func, ValueMap &vmap) {
  ir::Region out;
  for (const auto &block : src.blocks) {
    ir::Block cloned;
    for (ir::ValueId a : block.args) {
      ir::ValueId fresh = dst_func.new_value(src_func.type_of(a));
      vmap[a.index] = fresh;
      cloned.args.push_back(fresh);
    }
    for (const auto &op : block.ops)
      cloned.ops.push_back(clone_op(op, src_func, dst_func, vmap));
    out.blocks.push_back(std::move(cloned));
  }
  return out;
}

inline void replace_uses(ir::FunctionDef &func, ir::ValueId from,
                         ir::ValueId to) {
  walk_ops(func, [&](ir::Operation &op) {
    for (auto &operand : op.operands)
      if (operand == from) operand = to;
  });
}

// ---- attribute comparison for rewriting (angle tolerance 1e-12) ----

inline bool attrs_equivalent(const ir::AttrMap &a, const ir::AttrMap &b) {
  if (a.size() != b.size()) return false;
  for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib) {
    if (ia->first != ib->first) return false;
    if (ia->second.index() != ib->second.index()) return false;
    if (const auto *x = std::get_if<int64_t>(&ia->second)) {
      if (*x != std::get<int64_t>(ib->second)) return false;
    } else if (const auto *d = std::get_if<double>(&ia->second)) {
      if (!angles_equal(*d, std::get<double>(ib->second))) return false;
    } else {
      if (!(std::get<CMatrix>(ia->second) == std::get<CMatrix>(ib->second)))
        return false;
    }
  }
  return true;
}

} // namespace detail

// ======================================================================
// CSE / GVN (classical dedup + Fig 9 branch hoisting)
// ======================================================================

namespace detail {

inline bool is_pure_classical(ir::OpKind k) {
  switch (k) {
  case ir::OpKind::ConstInt: case ir::OpKind::ConstAngle:
  case ir::OpKind::AddI: case ir::OpKind::SubI: case ir::OpKind::MulI:
  case ir::OpKind::CmpEq:
    return true;
  default:
    return false;
  }
}

inline std::string value_number_key(const ir::Operation &op) {
  std::ostringstream key;
  key << ir::op_mnemonic(op.kind);
  for (const auto &[name, attr] : op.attrs) {
    key << '|' << name << '=';
    if (const auto *i = std::get_if<int64_t>(&attr))
      key << *i;
    else if (const auto *d = std::get_if<double>(&attr))
      key << format_double_exact(*d);
  }
  for (ir::ValueId v : op.operands) key << '%' << v.index;
  return key.str();
}

class GvnPass {
public:
  GvnPass(ir::FunctionDef &func, PassReport &report)
      : func_(func), report_(report) {}

  void run() {
    std::vector<std::map<std::string, ir::ValueId>> scopes;
    number_block(func_.body.entry(), scopes);
    hoist_region(func_.body);
  }

private:
  // Scoped value numbering over pure classical ops.
  void number_block(ir::Block &block,
                    std::vector<std::map<std::string, ir::ValueId>> &scopes) {
    scopes.emplace_back();
    for (size_t i = 0; i < block.ops.size();) {
      ir::Operation &op = block.ops[i];
      if (is_pure_classical(op.kind)) {
        std::string key = value_number_key(op);
        ir::ValueId existing;
        for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
          auto hit = it->find(key);
          if (hit != it->end()) {
            existing = hit->second;
            break;
          }
        }
        if (existing.valid()) {
          replace_uses(func_, op.results[0], existing);
          block.ops.erase(block.ops.begin() + i);
          ++report_.rewrites;
          continue;
        }
        scopes.back()[key] = op.results[0];
      }
      for (auto &region : op.regions)
        for (auto &nested : region.blocks) number_block(nested, scopes);
      ++i;
    }
    scopes.pop_back();
  }

  // Fig 9 shape: the same single-qubit gate applied in both branches of an
  // scf.if hoists before it (same incoming wire) or sinks after it (same
  // yield position).
  void hoist_region(ir::Region &region) {
    for (auto &block : region.blocks) {
      for (size_t i = 0; i < block.ops.size(); ++i) {
        for (auto &nested : block.ops[i].regions) hoist_region(nested);
        if (block.ops[i].kind != ir::OpKind::ScfIf) continue;
        for (;;) {
          if (hoist_before(block, i)) {
            ++i; // the scf.if shifted right past the hoisted gate
            continue;
          }
          if (sink_after(block, i)) continue; // inserted after; index holds
          break;
        }
      }
    }
  }

  static bool defined_in(const ir::Block &block, ir::ValueId v) {
    for (const auto &op : block.ops)
      for (ir::ValueId r : op.results)
        if (r == v) return true;
    return false;
  }

  static bool hoistable_gate(const ir::Operation &op) {
    std::vector<double> angles;
    return ir::is_single_qubit_gate(op.kind) &&
           ir::gate_attr_angles(op, angles);
  }

  bool hoist_before(ir::Block &parent, size_t if_index) {
    ir::Operation &ifop = parent.ops[if_index];
    ir::Block &then_block = ifop.regions[0].entry();
    ir::Block &else_block = ifop.regions[1].entry();
    for (size_t a = 0; a < then_block.ops.size(); ++a) {
      ir::Operation &ta = then_block.ops[a];
      if (!hoistable_gate(ta)) continue;
      ir::ValueId wire = ta.operands[0];
      if (defined_in(then_block, wire)) continue; // not an incoming wire
      for (size_t b = 0; b < else_block.ops.size(); ++b) {
        ir::Operation &eb = else_block.ops[b];
        if (eb.kind != ta.kind || eb.operands.empty() ||
            eb.operands[0] != wire)
          continue;
        if (!hoistable_gate(eb) ||
            !detail::attrs_equivalent(ta.attrs, eb.attrs))
          continue;
        // hoist: g(wire) before the if; both branches use its result
        ir::Operation hoisted;
        hoisted.kind = ta.kind;
        hoisted.attrs = ta.attrs;
        hoisted.operands = {wire};
        ir::ValueId fresh = func_.new_value(ir::Type::qubit(1));
        hoisted.results = {fresh};
        replace_uses(func_, ta.results[0], fresh);
        replace_uses(func_, eb.results[0], fresh);
        then_block.ops.erase(then_block.ops.begin() + a);
        else_block.ops.erase(else_block.ops.begin() + b);
        parent.ops.insert(parent.ops.begin() + if_index, std::move(hoisted));
        ++report_.rewrites;
        return true;
      }
    }
    return false;
  }

  bool sink_after(ir::Block &parent, size_t if_index) {
    ir::Operation &ifop = parent.ops[if_index];
    ir::Block &then_block = ifop.regions[0].entry();
    ir::Block &else_block = ifop.regions[1].entry();
    ir::Operation &then_yield = then_block.terminator();
    ir::Operation &else_yield = else_block.terminator();
    for (size_t k = 0; k < ifop.results.size(); ++k) {
      if (func_.type_of(ifop.results[k]) != ir::Type::qubit(1)) continue;
      auto find_def = [](ir::Block &blk, ir::ValueId v) -> ir::Operation * {
        for (auto &op : blk.ops)
          for (ir::ValueId r : op.results)
            if (r == v) return &op;
        return nullptr;
      };
      ir::Operation *ta = find_def(then_block, then_yield.operands[k]);
      ir::Operation *eb = find_def(else_block, else_yield.operands[k]);
      if (!ta || !eb || ta->kind != eb->kind) continue;
      if (!hoistable_gate(*ta) || !hoistable_gate(*eb)) continue;
      if (!detail::attrs_equivalent(ta->attrs, eb->attrs)) continue;
      if (ta->results[0] != then_yield.operands[k] ||
          eb->results[0] != else_yield.operands[k])
        continue;
      // sink: branches yield the gate inputs; one gate runs after the if
      then_yield.operands[k] = ta->operands[0];
      else_yield.operands[k] = eb->operands[0];
      ir::Operation sunk;
      sunk.kind = ta->kind;
      sunk.attrs = ta->attrs;
      ir::ValueId fresh = func_.new_value(ir::Type::qubit(1));
      sunk.results = {fresh};
      replace_uses(func_, ifop.results[k], fresh);
      sunk.operands = {ifop.results[k]};
      auto erase_op = [](ir::Block &blk, ir::Operation *victim) {
        for (auto it = blk.ops.begin(); it != blk.ops.end(); ++it)
          if (&*it == victim) {
            blk.ops.erase(it);
            return;
          }
      };
      erase_op(then_block, ta);
      erase_op(else_block, eb);
      parent.ops.insert(parent.ops.begin() + if_index + 1, std::move(sunk));
      ++report_.rewrites;
      return true;
    }
    return false;
  }

  ir::FunctionDef &func_;
  PassReport &report_;
};

} // namespace detail

/// Classical common-subexpression elimination (scoped value numbering) plus
/// global-value-numbering hoists of gates duplicated across scf.if branches.
inline PassReport run_cse_gvn(ir::ModuleIR &module) {
  PassReport report;
  report.pass = "gvn";
  report.ops_before = ir::count_ops(module);
  for (auto &func : module.functions) {
    detail::GvnPass pass(func, report);
    pass.run();
  }
  report.ops_after = ir::count_ops(module);
  return report;
}

// ======================================================================
// Dead code elimination
// ======================================================================

namespace detail {

inline bool function_is_pure(const ir::ModuleIR &module,
                             const ir::FunctionDef &func,
                             std::set<std::string> &visiting);

inline bool op_removable_when_dead(const ir::ModuleIR &module,
                                   const ir::Operation &op, bool aggressive,
                                   std::set<std::string> &visiting) {
  switch (op.kind) {
  case ir::OpKind::Return: case ir::OpKind::Yield: case ir::OpKind::Br:
  case ir::OpKind::CondBr:
    return false;
  case ir::OpKind::Measure:
    return aggressive;
  case ir::OpKind::Reset:
  case ir::OpKind::Barrier:
  case ir::OpKind::MemAllocBit:
  case ir::OpKind::MemStoreBit:
    return false;
  case ir::OpKind::MemLoadBit:
    return true; // reads are droppable when unread
  case ir::OpKind::Call: {
    const ir::FunctionDef *callee = module.find(op.callee);
    return callee && function_is_pure(module, *callee, visiting);
  }
  case ir::OpKind::ScfIf:
  case ir::OpKind::ScfFor: {
    bool ok = true;
    for (const auto &region : op.regions)
      walk_ops(region, [&](const ir::Operation &nested) {
        if (!ir::is_terminator(nested.kind) &&
            !op_removable_when_dead(module, nested, aggressive, visiting))
          ok = false;
      });
    return ok;
  }
  default:
    return true; // pure ops and qubit alloc (dead resource acquisition)
  }
}

inline bool function_is_pure(const ir::ModuleIR &module,
                             const ir::FunctionDef &func,
                             std::set<std::string> &visiting) {
  if (visiting.count(func.name)) return false; // recursion: assume impure
  visiting.insert(func.name);
  bool pure = true;
  walk_ops(func, [&](const ir::Operation &op) {
    if (ir::is_terminator(op.kind)) return;
    if (!op_removable_when_dead(module, op, /*aggressive=*/false, visiting))
      pure = false;
  });
  visiting.erase(func.name);
  return pure;
}

inline size_t dce_function(ir::ModuleIR &module, ir::FunctionDef &func,
                           bool aggressive) {
  size_t removed_total = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<uint32_t> uses(func.num_values(), 0);
    walk_ops(func, [&](const ir::Operation &op) {
      for (ir::ValueId v : op.operands) ++uses[v.index];
    });
    auto all_dead = [&](const ir::Operation &op) {
      for (ir::ValueId r : op.results)
        if (uses[r.index] > 0) return false;
      return true;
    };
    std::function<void(ir::Region &)> sweep = [&](ir::Region &region) {
      for (auto &block : region.blocks) {
        for (size_t i = 0; i < block.ops.size();) {
          ir::Operation &op = block.ops[i];
          for (auto &nested : op.regions) sweep(nested);
          std::set<std::string> visiting;
          bool removable =
              !ir::is_terminator(op.kind) && all_dead(op) &&
              detail::op_removable_when_dead(module, op, aggressive, visiting);
          if (removable) {
            block.ops.erase(block.ops.begin() + i);
            ++removed_total;
            changed = true;
          } else {
            ++i;
          }
        }
      }
    };
    sweep(func.body);
  }
  return removed_total;
}

} // namespace detail

/// Transitive removal of side-effect-free operations with no remaining
/// uses. Dead qubit allocations fall with their cones; measures go only
/// under --aggressive-dce; bit cells, stores, barriers, and resets stay.
inline PassReport run_dce(ir::ModuleIR &module, bool aggressive = false) {
  PassReport report;
  report.pass = "dce";
  report.ops_before = ir::count_ops(module);
  for (auto &func : module.functions)
    report.rewrites += detail::dce_function(module, func, aggressive);
  report.ops_after = ir::count_ops(module);
  return report;
}

// ======================================================================
// Inlining
// ======================================================================

namespace detail {

inline constexpr size_t kInlineBodyLimit = 64;

inline bool reaches(const ir::ModuleIR &module, const std::string &from,
                    const std::string &target,
                    std::set<std::string> &visited) {
  if (!visited.insert(from).second) return false;
  const ir::FunctionDef *f = module.find(from);
  if (!f) return false;
  bool found = false;
  walk_ops(*f, [&](const ir::Operation &op) {
    if (op.kind != ir::OpKind::Call || found) return;
    if (op.callee == target || reaches(module, op.callee, target, visited))
      found = true;
  });
  return found;
}

inline bool inlinable(const ir::ModuleIR &module,
                      const ir::FunctionDef &callee) {
  if (callee.body.blocks.size() != 1) return false;
  if (ir::count_ops(callee) > kInlineBodyLimit) return false;
  std::set<std::string> visited;
  return !reaches(module, callee.name, callee.name, visited);
}

/// Splice the callee body at one call site. Returns false when the call is
/// not inlinable.
inline bool inline_site(ir::ModuleIR &module, ir::FunctionDef &caller,
                        ir::Block &block, size_t index) {
  const ir::Operation &call = block.ops[index];
  const ir::FunctionDef *callee = module.find(call.callee);
  if (!callee || !inlinable(module, *callee)) return false;

  ValueMap vmap;
  const ir::Block &body = callee->body.entry();
  for (size_t i = 0; i < body.args.size(); ++i)
    vmap[body.args[i].index] = call.operands[i];
  std::vector<ir::Operation> cloned;
  for (size_t i = 0; i + 1 < body.ops.size(); ++i)
    cloned.push_back(clone_op(body.ops[i], *callee, caller, vmap));
  const ir::Operation &ret = body.terminator();
  std::vector<ir::ValueId> results;
  for (ir::ValueId v : ret.operands) results.push_back(remap(vmap, v));

  for (size_t i = 0; i < call.results.size(); ++i)
    replace_uses(caller, call.results[i], results[i]);
  block.ops.erase(block.ops.begin() + index);
  block.ops.insert(block.ops.begin() + index,
                   std::make_move_iterator(cloned.begin()),
                   std::make_move_iterator(cloned.end()));
  return true;
}

inline bool inline_one(ir::ModuleIR &module, ir::FunctionDef &func,
                       ir::Region &region) {
  for (auto &block : region.blocks) {
    for (size_t i = 0; i < block.ops.size(); ++i) {
      ir::Operation &op = block.ops[i];
      for (auto &nested : op.regions)
        if (inline_one(module, func, nested)) return true;
      if (op.kind == ir::OpKind::Call &&
          inline_site(module, func, block, i))
        return true;
    }
  }
  return false;
}

} // namespace detail

/// Inline every call to a non-recursive, single-block callee of at most 64
/// ops; uncalled non-entry functions are dropped afterwards.
inline PassReport run_inline(ir::ModuleIR &module) {
  PassReport report;
  report.pass = "inline";
  report.ops_before = ir::count_ops(module);
  for (auto &func : module.functions)
    while (detail::inline_one(module, func, func.body)) ++report.rewrites;
  // drop functions that no longer have call sites
  std::set<std::string> called;
  walk_ops(module, [&](const ir::Operation &op) {
    if (op.kind == ir::OpKind::Call) called.insert(op.callee);
  });
  std::erase_if(module.functions, [&](const ir::FunctionDef &f) {
    return f.name != "main" && !called.count(f.name);
  });
  report.ops_after = ir::count_ops(module);
  return report;
}

// ======================================================================
// Loop unrolling
// ======================================================================

namespace detail {

inline constexpr int64_t kUnrollTripLimit = 32;

inline const ir::Operation *const_def(const ir::FunctionDef &func,
                                      ir::ValueId v) {
  const ir::Operation *found = nullptr;
  walk_ops(func, [&](const ir::Operation &op) {
    if (op.kind != ir::OpKind::ConstInt) return;
    for (ir::ValueId r : op.results)
      if (r == v) found = &op;
  });
  return found;
}

inline bool unroll_site(ir::FunctionDef &func, ir::Block &block,
                        size_t index) {
  ir::Operation &forop = block.ops[index];
  const ir::Operation *lo_def = const_def(func, forop.operands[0]);
  const ir::Operation *hi_def = const_def(func, forop.operands[1]);
  const ir::Operation *step_def = const_def(func, forop.operands[2]);
  if (!lo_def || !hi_def || !step_def) return false;
  int64_t lo = lo_def->int_attr("value");
  int64_t hi = hi_def->int_attr("value");
  int64_t step = step_def->int_attr("value");
  if (step < 1) return false;
  int64_t trip = hi > lo ? (hi - lo + step - 1) / step : 0;
  if (trip > kUnrollTripLimit) return false;

  const ir::Block &body = forop.regions[0].entry();
  bool uses_induction = false;
  walk_ops(forop.regions[0], [&](const ir::Operation &op) {
    for (ir::ValueId v : op.operands)
      if (v == body.args[0]) uses_induction = true;
  });

  std::vector<ir::ValueId> iters(forop.operands.begin() + 3,
                                 forop.operands.end());
  std::vector<ir::Operation> cloned;
  for (int64_t k = 0; k < trip; ++k) {
    ValueMap vmap;
    if (uses_induction) {
      ir::Operation c;
      c.kind = ir::OpKind::ConstInt;
      c.attrs["value"] = lo + k * step;
      c.results.push_back(func.new_value(ir::Type::integer()));
      vmap[body.args[0].index] = c.results[0];
      cloned.push_back(std::move(c));
    }
    for (size_t j = 0; j < iters.size(); ++j)
      vmap[body.args[j + 1].index] = iters[j];
    for (size_t i = 0; i + 1 < body.ops.size(); ++i)
      cloned.push_back(clone_op(body.ops[i], func, func, vmap));
    const ir::Operation &yield = body.terminator();
    std::vector<ir::ValueId> next;
    for (ir::ValueId v : yield.operands) next.push_back(remap(vmap, v));
    iters = std::move(next);
  }

  for (size_t r = 0; r < forop.results.size(); ++r)
    replace_uses(func, forop.results[r], iters[r]);
  block.ops.erase(block.ops.begin() + index);
  block.ops.insert(block.ops.begin() + index,
                   std::make_move_iterator(cloned.begin()),
                   std::make_move_iterator(cloned.end()));
  return true;
}

inline bool unroll_one(ir::FunctionDef &func, ir::Region &region) {
  for (auto &block : region.blocks) {
    for (size_t i = 0; i < block.ops.size(); ++i) {
      ir::Operation &op = block.ops[i];
      for (auto &nested : op.regions)
        if (unroll_one(func, nested)) return true;
      if (op.kind == ir::OpKind::ScfFor && unroll_site(func, block, i))
        return true;
    }
  }
  return false;
}

} // namespace detail

/// Fully unroll scf.for loops with constant bounds and trip count <= 32,
/// threading iter_args through per-iteration clones with fresh values.
inline PassReport run_unroll(ir::ModuleIR &module) {
  PassReport report;
  report.pass = "unroll";
  report.ops_before = ir::count_ops(module);
  for (auto &func : module.functions)
    while (detail::unroll_one(func, func.body)) ++report.rewrites;
  report.ops_after = ir::count_ops(module);
  return report;
}

} // namespace qssa::opt

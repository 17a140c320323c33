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
#include <string>
#include <vector>

#include "qssa/ir/build.hpp"
#include "qssa/ir/module.hpp"
#include "qssa/verify/diagnostics.hpp"

namespace qssa::verify {

using ir::FunctionDef;
using ir::ModuleIR;
using ir::OpKind;
using ir::Operation;
using ir::Region;
using ir::ValueId;

// ======================================================================
// Well-typedness
// ======================================================================

namespace detail {

struct TypeChecker {
  const ModuleIR &module;
  const FunctionDef &func;
  std::vector<Diagnostic> &out;
  std::vector<uint8_t> defined; // single-assignment bookkeeping

  void fail(const Operation &op, const std::string &msg) {
    Diagnostic d;
    d.kind = DiagKind::TypeError;
    d.message = msg;
    d.sites.push_back(op.loc);
    out.push_back(std::move(d));
  }

  void define(const Operation *at, ValueId v) {
    if (v.index >= func.num_values()) {
      Diagnostic d;
      d.kind = DiagKind::TypeError;
      d.message = "value id out of range";
      if (at) d.sites.push_back(at->loc);
      out.push_back(std::move(d));
      return;
    }
    if (defined[v.index]) {
      Diagnostic d;
      d.kind = DiagKind::TypeError;
      d.value = v;
      d.message = "value defined more than once (SSA violation)";
      if (at) d.sites.push_back(at->loc);
      out.push_back(std::move(d));
      return;
    }
    defined[v.index] = 1;
  }

  void run() {
    defined.assign(func.num_values(), 0);
    if (func.body.blocks.empty()) {
      Diagnostic d;
      d.kind = DiagKind::TypeError;
      d.message = "function @" + func.name + " has no entry block";
      out.push_back(std::move(d));
      return;
    }
    for (ValueId a : func.body.entry().args) define(nullptr, a);
    check_region(func.body, /*is_function_body=*/true,
                 visible_from_args());
  }

  std::vector<uint8_t> visible_from_args() {
    std::vector<uint8_t> visible(func.num_values(), 0);
    for (ValueId a : func.body.entry().args) visible[a.index] = 1;
    return visible;
  }

  /// Dominator computation over a flat CFG (intersection over predecessors,
  /// iterated to fixpoint; the graphs here are small).
  static std::vector<std::vector<uint8_t>>
  block_dominators(const Region &region) {
    size_t n = region.blocks.size();
    std::vector<std::vector<uint32_t>> preds(n);
    for (uint32_t b = 0; b < n; ++b) {
      if (region.blocks[b].ops.empty()) continue;
      for (uint32_t s : region.blocks[b].terminator().successors)
        if (s < n) preds[s].push_back(b);
    }
    std::vector<std::vector<uint8_t>> dom(n, std::vector<uint8_t>(n, 1));
    for (size_t i = 0; i < n; ++i) dom[0][i] = (i == 0);
    bool changed = true;
    while (changed) {
      changed = false;
      for (uint32_t b = 1; b < n; ++b) {
        std::vector<uint8_t> next(n, preds[b].empty() ? 0 : 1);
        for (uint32_t p : preds[b])
          for (size_t i = 0; i < n; ++i) next[i] &= dom[p][i];
        next[b] = 1;
        if (next != dom[b]) {
          dom[b] = std::move(next);
          changed = true;
        }
      }
    }
    return dom;
  }

  void check_region(const Region &region, bool is_function_body,
                    std::vector<uint8_t> visible) {
    if (region.blocks.size() == 1) {
      check_block(region.blocks[0], is_function_body, visible);
      return;
    }
    // Multi-block: defs in strict dominator blocks are visible.
    auto dom = block_dominators(region);
    std::vector<std::vector<ValueId>> defs(region.blocks.size());
    for (size_t b = 0; b < region.blocks.size(); ++b)
      for (const auto &op : region.blocks[b].ops)
        for (ValueId r : op.results) defs[b].push_back(r);
    for (size_t b = 0; b < region.blocks.size(); ++b) {
      std::vector<uint8_t> vis = visible;
      for (size_t d = 0; d < region.blocks.size(); ++d)
        if (d != b && dom[b][d])
          for (ValueId v : defs[d])
            if (v.index < vis.size()) vis[v.index] = 1;
      check_block(region.blocks[b], is_function_body, vis);
    }
  }

  void check_block(const ir::Block &block, bool is_function_body,
                   std::vector<uint8_t> &visible) {
    if (block.ops.empty()) {
      Diagnostic d;
      d.kind = DiagKind::TypeError;
      d.message = "block has no terminator";
      out.push_back(std::move(d));
      return;
    }
    for (size_t i = 0; i < block.ops.size(); ++i) {
      const Operation &op = block.ops[i];
      bool is_last = i + 1 == block.ops.size();
      if (ir::is_terminator(op.kind) && !is_last)
        fail(op, "terminator before end of block");
      if (is_last && !ir::is_terminator(op.kind))
        fail(op, "block must end in a terminator");
      if (op.kind == OpKind::Yield && is_function_body)
        fail(op, "scf.yield outside an scf region");
      if (op.kind == OpKind::Return && !is_function_body)
        fail(op, "return inside an scf region");

      for (ValueId use : op.operands) {
        if (use.index >= visible.size() || !visible[use.index]) {
          Diagnostic d;
          d.kind = DiagKind::TypeError;
          d.value = use;
          d.message = "operand used before definition (dominance violation)";
          d.sites.push_back(op.loc);
          out.push_back(std::move(d));
        }
      }

      if (auto err = ir::check_operation(&module, func, op)) fail(op, *err);

      // nested regions see the current scope plus their block args
      for (const auto &nested : op.regions) {
        std::vector<uint8_t> inner = visible;
        if (!nested.blocks.empty())
          for (ValueId a : nested.entry().args) {
            define(&op, a);
            if (a.index < inner.size()) inner[a.index] = 1;
          }
        check_region(nested, /*is_function_body=*/false, std::move(inner));
      }

      for (ValueId r : op.results) {
        define(&op, r);
        if (r.index < visible.size()) visible[r.index] = 1;
      }
    }
  }
};

} // namespace detail

/// Type and structure verification: signatures per kind, split/concat size
/// arithmetic, dominance, single assignment, terminator placement, region
/// shapes. Returns diagnostics; never throws.
inline std::vector<Diagnostic> verify_types(const ModuleIR &module) {
  std::vector<Diagnostic> out;
  for (const auto &func : module.functions) {
    detail::TypeChecker checker{module, func, out, {}};
    checker.run();
  }
  return out;
}

// ======================================================================
// Single-use (no-cloning) analysis over structured regions
// ======================================================================

namespace detail {

/// Region-tree walk with defined/used sets, rollback per region, and fresh
/// scopes for loop bodies. Linear in the number of operations.
class RegionSingleUse {
public:
  RegionSingleUse(const FunctionDef &func, bool include_warnings)
      : func_(func), include_warnings_(include_warnings),
        state_(func.num_values(), State::Untracked),
        scope_(func.num_values(), 0), ever_used_(func.num_values(), 0),
        first_site_(func.num_values()) {}

  std::vector<Diagnostic> run() {
    if (func_.body.blocks.size() != 1)
      throw_error(ErrorKind::MalformedRegion,
                  "region-based single-use needs a single-block body "
                  "(structured control flow only)");
    for (ValueId a : func_.body.entry().args)
      if (is_qubit(a)) define(a);
    walk_block(func_.body.entry());
    if (include_warnings_) report_leaks();
    return std::move(diags_);
  }

private:
  enum class State : uint8_t { Untracked, Defined, Used };

  bool is_qubit(ValueId v) const {
    return func_.type_of(v).kind == ir::TypeKind::Qubit;
  }

  void define(ValueId v) {
    state_[v.index] = State::Defined;
    scope_[v.index] = current_scope_;
    defined_anywhere_.push_back(v);
  }

  void use(ValueId v, const Operation &op) {
    if (scope_[v.index] != current_scope_ ||
        state_[v.index] == State::Untracked) {
      Diagnostic d;
      d.kind = DiagKind::EscapedLoopQubit;
      d.value = v;
      d.message = "qubit %" + std::to_string(v.index) +
                  " crosses an scf.for boundary without being an iter_arg";
      d.sites.push_back(op.loc);
      diags_.push_back(std::move(d));
      return;
    }
    if (state_[v.index] == State::Used) {
      Diagnostic d;
      d.kind = DiagKind::DoubleUse;
      d.value = v;
      d.message = "qubit %" + std::to_string(v.index) + " used twice (first use at " +
                  first_site_[v.index].str() + ", second use at " +
                  op.loc.str() + ")";
      d.sites.push_back(first_site_[v.index]);
      d.sites.push_back(op.loc);
      diags_.push_back(std::move(d));
      return;
    }
    state_[v.index] = State::Used;
    first_site_[v.index] = op.loc;
    ever_used_[v.index] = 1;
    rollback_.push_back(v);
  }

  /// Walks a block collecting into the current rollback frame; callers mark
  /// the frame start and roll back or commit.
  void walk_block(const ir::Block &block) {
    for (const Operation &op : block.ops) {
      switch (op.kind) {
      case OpKind::Br:
      case OpKind::CondBr:
        throw_error(ErrorKind::MalformedRegion,
                    "unsupported control-flow op in structured verifier");
      default:
        break;
      }

      for (ValueId v : op.operands)
        if (is_qubit(v)) use(v, op);

      if (op.kind == OpKind::ScfIf) {
        // Branches are siblings: verify each against the same D/U, rolling
        // back between them, then commit the union as consumed by the if.
        size_t mark = rollback_.size();
        walk_block(op.regions[0].entry());
        std::vector<ValueId> then_used(rollback_.begin() + mark,
                                       rollback_.end());
        roll_back_to(mark);
        walk_block(op.regions[1].entry());
        std::vector<ValueId> else_used(rollback_.begin() + mark,
                                       rollback_.end());
        roll_back_to(mark);
        for (ValueId v : then_used) reuse(v);
        for (ValueId v : else_used) reuse(v);
      } else if (op.kind == OpKind::ScfFor) {
        uint32_t saved_scope = current_scope_;
        current_scope_ = ++scope_counter_;
        const ir::Block &body = op.regions[0].entry();
        for (ValueId a : body.args)
          if (is_qubit(a)) define(a);
        size_t mark = rollback_.size();
        walk_block(body);
        // the loop scope dies here; its rollback entries stay consumed
        rollback_.resize(mark);
        current_scope_ = saved_scope;
      }

      for (ValueId r : op.results)
        if (is_qubit(r)) define(r);
    }
  }

  void roll_back_to(size_t mark) {
    for (size_t i = rollback_.size(); i-- > mark;)
      state_[rollback_[i].index] = State::Defined;
    rollback_.resize(mark);
  }

  void reuse(ValueId v) {
    if (state_[v.index] == State::Defined) {
      state_[v.index] = State::Used;
      rollback_.push_back(v);
    }
  }

  void report_leaks() {
    for (ValueId v : defined_anywhere_)
      if (!ever_used_[v.index]) {
        Diagnostic d;
        d.kind = DiagKind::UnusedQubitLeak;
        d.severity = Severity::Warning;
        d.value = v;
        d.message =
            "qubit %" + std::to_string(v.index) + " is defined but never used";
        diags_.push_back(std::move(d));
      }
  }

  const FunctionDef &func_;
  bool include_warnings_;
  std::vector<State> state_;
  std::vector<uint32_t> scope_;
  std::vector<uint8_t> ever_used_;
  std::vector<SourceLoc> first_site_;
  std::vector<ValueId> rollback_;
  std::vector<ValueId> defined_anywhere_;
  std::vector<Diagnostic> diags_;
  uint32_t current_scope_ = 0;
  uint32_t scope_counter_ = 0;
};

} // namespace detail

/// Single-use verification for structured (region) control flow. Error
/// diagnostics only by default; pass include_warnings for leak reports.
inline std::vector<Diagnostic>
verify_single_use_regions(const FunctionDef &func,
                          bool include_warnings = false) {
  detail::RegionSingleUse analysis(func, include_warnings);
  return analysis.run();
}

// ======================================================================
// Single-use analysis over a flat acyclic CFG
// ======================================================================

namespace detail {

inline std::vector<uint32_t> topo_order(const Region &region) {
  size_t n = region.blocks.size();
  std::vector<uint32_t> indegree(n, 0);
  for (const auto &b : region.blocks) {
    if (b.ops.empty()) continue;
    for (uint32_t s : b.terminator().successors) ++indegree[s];
  }
  std::vector<uint32_t> order;
  std::vector<uint32_t> ready;
  for (uint32_t b = 0; b < n; ++b)
    if (indegree[b] == 0) ready.push_back(b);
  while (!ready.empty()) {
    uint32_t b = ready.back();
    ready.pop_back();
    order.push_back(b);
    if (region.blocks[b].ops.empty()) continue;
    for (uint32_t s : region.blocks[b].terminator().successors)
      if (--indegree[s] == 0) ready.push_back(s);
  }
  if (order.size() != n)
    throw_error(ErrorKind::CyclicCFG, "control-flow graph has a cycle");
  return order;
}

} // namespace detail

/// Single-use verification on a flat, acyclic multi-block CFG: per qubit,
/// dynamic programming over the block DAG in reverse topological order
/// rejects any pair of uses connected by a path.
inline std::vector<Diagnostic>
verify_single_use_cfg(const FunctionDef &func) {
  std::vector<Diagnostic> diags;
  const Region &region = func.body;
  walk_ops(func, [&](const Operation &op) {
    if (!op.regions.empty())
      throw_error(ErrorKind::MalformedRegion,
                  "flat-CFG single-use cannot handle nested regions");
  });
  auto order = detail::topo_order(region);
  size_t nblocks = region.blocks.size();

  // use sites per value per block, in program order
  struct Site {
    uint32_t block;
    SourceLoc loc;
  };
  std::vector<std::vector<Site>> sites(func.num_values());
  for (uint32_t b = 0; b < nblocks; ++b)
    for (const auto &op : region.blocks[b].ops)
      for (ValueId v : op.operands)
        if (func.type_of(v).kind == ir::TypeKind::Qubit)
          sites[v.index].push_back({b, op.loc});

  for (uint32_t vi = 0; vi < sites.size(); ++vi) {
    const auto &uses = sites[vi];
    if (uses.size() < 2) continue;
    std::vector<uint32_t> cnt(nblocks, 0);
    std::vector<SourceLoc> block_site(nblocks);
    bool same_block_double = false;
    Diagnostic d;
    d.kind = DiagKind::DoubleUse;
    d.value = {vi};
    for (const auto &u : uses) {
      if (cnt[u.block]++ == 0)
        block_site[u.block] = u.loc;
      else if (!same_block_double) {
        same_block_double = true;
        d.sites = {block_site[u.block], u.loc};
      }
    }
    if (same_block_double) {
      d.message = "qubit %" + std::to_string(vi) + " used twice in one block";
      diags.push_back(std::move(d));
      continue;
    }
    // f[b] = uses at b plus the largest use count on any path below b
    std::vector<uint32_t> best_below(nblocks, 0);
    bool flagged = false;
    for (size_t i = order.size(); i-- > 0 && !flagged;) {
      uint32_t b = order[i];
      uint32_t below = 0;
      uint32_t witness = UINT32_MAX;
      if (!region.blocks[b].ops.empty())
        for (uint32_t s : region.blocks[b].terminator().successors)
          if (best_below[s] > below) {
            below = best_below[s];
            witness = s;
          }
      if (cnt[b] > 0 && below > 0) {
        // a use here and another somewhere down the path through `witness`
        uint32_t w = witness;
        while (cnt[w] == 0) {
          uint32_t next = UINT32_MAX;
          uint32_t best = 0;
          for (uint32_t s : region.blocks[w].terminator().successors)
            if (best_below[s] >= best && best_below[s] > 0) {
              best = best_below[s];
              next = s;
            }
          if (next == UINT32_MAX) break;
          w = next;
        }
        d.message = "qubit %" + std::to_string(vi) +
                    " used twice along one path (first use at " +
                    block_site[b].str() + ", second use at " +
                    block_site[w].str() + ")";
        d.sites = {block_site[b], block_site[w]};
        diags.push_back(d);
        flagged = true;
        break;
      }
      best_below[b] = cnt[b] + below;
    }
  }
  return diags;
}

// ======================================================================
// Whole-module convenience
// ======================================================================

/// verify_types plus the appropriate single-use analysis per function
/// (region-based for structured bodies, CFG-based for flat multi-block).
inline std::vector<Diagnostic> verify_module(const ModuleIR &module,
                                             bool include_warnings = false) {
  auto diags = verify_types(module);
  if (has_errors(diags)) return diags; // single-use assumes well-typed input
  for (const auto &func : module.functions) {
    std::vector<Diagnostic> more;
    if (func.body.blocks.size() == 1)
      more = verify_single_use_regions(func, include_warnings);
    else
      more = verify_single_use_cfg(func);
    diags.insert(diags.end(), more.begin(), more.end());
  }
  return diags;
}

} // namespace qssa::verify

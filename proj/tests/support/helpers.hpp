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

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qssa/qssa.hpp"

namespace qssa::test {

// ---------------------------------------------------------------------
// construction helpers
// ---------------------------------------------------------------------

struct ModuleBuilder {
  ir::ModuleIR module;
  ir::OpBuilder builder;

  ModuleBuilder() : builder(make_main()) {}

  ir::OpBuilder &b() { return builder; }
  ir::FunctionDef &main() { return module.functions.front(); }

private:
  ir::OpBuilder make_main() {
    module.functions.emplace_back();
    auto &f = module.functions.back();
    f.name = "main";
    f.body.blocks.emplace_back();
    ir::OpBuilder ob(module, f);
    ob.set_insertion_block(&f.body.entry());
    return ob;
  }
};

inline ir::ModuleIR qasm_to_module(const std::string &src) {
  return raising::raise(qasm::parse_qasm(src));
}

inline std::string read_text(const std::filesystem::path &path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline std::vector<std::filesystem::path> corpus_files() {
  std::vector<std::filesystem::path> files;
  for (const auto &entry :
       std::filesystem::directory_iterator(QSSA_CORPUS_DIR))
    if (entry.path().extension() == ".qasm") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  return files;
}

inline size_t count_gates(const ir::ModuleIR &module) {
  size_t n = 0;
  walk_ops(module, [&](const ir::Operation &op) {
    if (ir::is_gate(op.kind)) ++n;
  });
  return n;
}

inline size_t count_kind(const ir::ModuleIR &module, ir::OpKind kind) {
  size_t n = 0;
  walk_ops(module, [&](const ir::Operation &op) {
    if (op.kind == kind) ++n;
  });
  return n;
}

// ---------------------------------------------------------------------
// random well-typed circuit modules (single-use clean by construction)
// ---------------------------------------------------------------------

struct CircuitGenOptions {
  uint32_t max_qubits = 6;
  uint32_t max_gates = 24;
  bool allow_measure = true;
  bool allow_barrier = true;
  bool return_qubits = false; // main returns the final wires (keeps cones live)
};

/// Threads every qubit through a latest-value map exactly like the raiser,
/// so the result always verifies cleanly.
inline ir::ModuleIR random_circuit(std::mt19937 &rng,
                                   const CircuitGenOptions &opts = {}) {
  ModuleBuilder mb;
  auto &b = mb.b();
  std::uniform_int_distribution<uint32_t> nq(1, opts.max_qubits);
  uint32_t n = nq(rng);
  std::vector<ir::ValueId> latest;
  for (uint32_t i = 0; i < n; ++i) latest.push_back(b.alloc(1));

  std::uniform_int_distribution<uint32_t> ngates(0, opts.max_gates);
  std::uniform_int_distribution<uint32_t> pick(0, n - 1);
  std::uniform_real_distribution<double> angle(-6.5, 6.5);
  uint32_t m = ngates(rng);
  for (uint32_t g = 0; g < m; ++g) {
    int which = std::uniform_int_distribution<int>(0, 14)(rng);
    uint32_t a = pick(rng);
    switch (which) {
    case 0: latest[a] = b.gate1(ir::OpKind::X, latest[a]); break;
    case 1: latest[a] = b.gate1(ir::OpKind::Y, latest[a]); break;
    case 2: latest[a] = b.gate1(ir::OpKind::Z, latest[a]); break;
    case 3: latest[a] = b.gate1(ir::OpKind::H, latest[a]); break;
    case 4: latest[a] = b.gate1(ir::OpKind::S, latest[a]); break;
    case 5: latest[a] = b.gate1(ir::OpKind::Sdg, latest[a]); break;
    case 6: latest[a] = b.gate1(ir::OpKind::T, latest[a]); break;
    case 7: latest[a] = b.gate1(ir::OpKind::Tdg, latest[a]); break;
    case 8: latest[a] = b.rotation(ir::OpKind::Rx, latest[a], angle(rng)); break;
    case 9: latest[a] = b.rotation(ir::OpKind::Ry, latest[a], angle(rng)); break;
    case 10: latest[a] = b.rotation(ir::OpKind::Rz, latest[a], angle(rng)); break;
    case 11:
      latest[a] = b.u3(latest[a], angle(rng), angle(rng), angle(rng));
      break;
    case 12:
    case 13: {
      if (n < 2) break;
      uint32_t c = pick(rng), t = pick(rng);
      if (c == t) t = (t + 1) % n;
      auto [rc, rt] = b.cnot(latest[c], latest[t]);
      latest[c] = rc;
      latest[t] = rt;
      break;
    }
    case 14: {
      if (!opts.allow_barrier) break;
      uint32_t a2 = pick(rng);
      if (a2 == a) {
        auto &op = b.create(ir::OpKind::Barrier, {latest[a]});
        latest[a] = op.results[0];
      } else {
        auto &op = b.create(ir::OpKind::Barrier, {latest[a], latest[a2]});
        latest[a] = op.results[0];
        latest[a2] = op.results[1];
      }
      break;
    }
    }
  }

  if (opts.allow_measure) {
    std::uniform_int_distribution<uint32_t> nmeas(0, std::min(n, 4u));
    uint32_t k = nmeas(rng);
    for (uint32_t i = 0; i < k; ++i) {
      auto cell = b.create(ir::OpKind::MemAllocBit).results[0];
      auto [bits, qubit] = b.measure(latest[i]);
      latest[i] = qubit;
      b.create(ir::OpKind::MemStoreBit, {cell, bits});
    }
  }
  if (opts.return_qubits) {
    mb.main().result_types.assign(n, ir::Type::qubit(1));
    b.ret(latest);
  } else {
    b.ret();
  }
  return std::move(mb.module);
}

// ---------------------------------------------------------------------
// random structured programs (may violate single-use) + path oracle
// ---------------------------------------------------------------------

struct StructuredGenOptions {
  uint32_t max_ops = 30;
  uint32_t max_depth = 4;
  double violation_rate = 0.35; // chance to pick a consumed/forbidden value
};

/// Generates structured programs over qubit values where uses may pick
/// already-consumed values or values from enclosing scopes, yielding a mix
/// of clean and violating programs. Ground truth comes from the path
/// enumeration oracle, not from this generator.
class StructuredGen {
public:
  StructuredGen(std::mt19937 &rng, const StructuredGenOptions &opts)
      : rng_(rng), opts_(opts) {}

  ir::ModuleIR generate() {
    mb_ = std::make_unique<ModuleBuilder>();
    ops_left_ = static_cast<int>(opts_.max_ops);
    Scope top;
    for (int i = 0; i < 3; ++i) top.live.push_back(mb_->b().alloc(1));
    fill_block(top, 0);
    mb_->b().ret();
    return std::move(mb_->module);
  }

private:
  struct Scope {
    std::vector<ir::ValueId> live;
    std::vector<ir::ValueId> consumed;
    Scope *outer = nullptr;
  };

  int rand_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }
  bool chance(double p) {
    return std::uniform_real_distribution<double>(0, 1)(rng_) < p;
  }

  /// Normally consumes from the scope's live list; with violation_rate it
  /// re-picks a consumed value or grabs one from an enclosing scope.
  ir::ValueId pick_operand(Scope &scope) {
    if (chance(opts_.violation_rate)) {
      std::vector<ir::ValueId> stale;
      for (Scope *s = &scope; s; s = s->outer) {
        stale.insert(stale.end(), s->consumed.begin(), s->consumed.end());
        if (s != &scope)
          stale.insert(stale.end(), s->live.begin(), s->live.end());
      }
      if (!stale.empty())
        return stale[rand_int(0, static_cast<int>(stale.size()) - 1)];
    }
    if (scope.live.empty()) {
      if (scope.outer) {
        // capture from the enclosing scope (legal for if, escape for for)
        Scope *s = scope.outer;
        while (s && s->live.empty()) s = s->outer;
        if (s) {
          int i = rand_int(0, static_cast<int>(s->live.size()) - 1);
          ir::ValueId v = s->live[i];
          s->live.erase(s->live.begin() + i);
          s->consumed.push_back(v);
          return v;
        }
      }
      scope.live.push_back(mb_->b().alloc(1));
      --ops_left_;
    }
    int i = rand_int(0, static_cast<int>(scope.live.size()) - 1);
    ir::ValueId v = scope.live[i];
    scope.live.erase(scope.live.begin() + i);
    scope.consumed.push_back(v);
    return v;
  }

  void fill_block(Scope &scope, uint32_t depth) {
    int steps = rand_int(1, 5);
    for (int s = 0; s < steps && ops_left_ > 0; ++s) {
      int kind = rand_int(0, 9);
      if (kind <= 5 || depth >= opts_.max_depth) {
        --ops_left_;
        scope.live.push_back(mb_->b().gate1(ir::OpKind::H, pick_operand(scope)));
      } else if (kind <= 7) {
        --ops_left_;
        emit_if(scope, depth);
      } else {
        --ops_left_;
        emit_for(scope, depth);
      }
    }
  }

  ir::ValueId yield_value(Scope &scope) {
    if (scope.live.empty())
      return mb_->b().gate1(ir::OpKind::H, pick_operand(scope));
    ir::ValueId v = scope.live.back();
    scope.live.pop_back();
    scope.consumed.push_back(v);
    return v;
  }

  void emit_if(Scope &scope, uint32_t depth) {
    auto &b = mb_->b();
    ir::ValueId c0 = b.const_int(rand_int(0, 1));
    ir::ValueId c1 = b.const_int(1);
    ir::ValueId cond = b.create(ir::OpKind::CmpEq, {c0, c1}).results[0];

    ir::Block *saved = b.insertion_block();
    ir::Region then_region, else_region;
    then_region.blocks.emplace_back();
    else_region.blocks.emplace_back();

    // Branches are siblings: both get the same view of the parent scope, so
    // they may legally consume the same parent value. Whatever either branch
    // consumed stays visible in the parent (ancestor-reuse violations arise
    // naturally and the oracle decides).
    Scope snapshot = scope;
    b.set_insertion_block(&then_region.entry());
    Scope then_scope;
    then_scope.outer = &snapshot;
    fill_block(then_scope, depth + 1);
    b.yield({yield_value(then_scope)});

    Scope snapshot2 = scope;
    b.set_insertion_block(&else_region.entry());
    Scope else_scope;
    else_scope.outer = &snapshot2;
    fill_block(else_scope, depth + 1);
    b.yield({yield_value(else_scope)});

    b.set_insertion_block(saved);
    std::vector<ir::Region> regions;
    regions.push_back(std::move(then_region));
    regions.push_back(std::move(else_region));
    auto &ifop = b.create(ir::OpKind::ScfIf, {cond}, {}, std::move(regions));
    scope.live.push_back(ifop.results[0]);
  }

  void emit_for(Scope &scope, uint32_t depth) {
    auto &b = mb_->b();
    ir::ValueId lo = b.const_int(0);
    ir::ValueId hi = b.const_int(rand_int(1, 3));
    ir::ValueId st = b.const_int(1);
    ir::ValueId init = pick_operand(scope);

    ir::FunctionDef &f = mb_->main();
    ir::Region body;
    body.blocks.emplace_back();
    ir::Block &blk = body.entry();
    blk.args.push_back(f.new_value(ir::Type::integer()));
    blk.args.push_back(f.new_value(ir::Type::qubit(1)));

    ir::Block *saved = b.insertion_block();
    b.set_insertion_block(&blk);
    Scope body_scope;
    body_scope.outer = &scope; // outer picks here are loop escapes
    body_scope.live.push_back(blk.args[1]);
    fill_block(body_scope, depth + 1);
    b.yield({yield_value(body_scope)});
    b.set_insertion_block(saved);

    std::vector<ir::Region> regions;
    regions.push_back(std::move(body));
    auto &forop = b.create(ir::OpKind::ScfFor, {lo, hi, st, init}, {},
                           std::move(regions));
    scope.live.push_back(forop.results[0]);
  }

  std::mt19937 &rng_;
  StructuredGenOptions opts_;
  std::unique_ptr<ModuleBuilder> mb_;
  int ops_left_ = 0;
};

// ---------------------------------------------------------------------
// oracle: exhaustive path enumeration for structured single-use
// ---------------------------------------------------------------------

/// Enumerates every static control-flow path (scf.if both ways, scf.for
/// unrolled twice) and checks per-path qubit use counts. A value defined
/// under loops is renamed per iteration of EVERY enclosing loop, so nested
/// unrollings never alias.
class PathEnumerationOracle {
public:
  explicit PathEnumerationOracle(const ir::FunctionDef &func) : func_(func) {
    index_region(func.body, {});
  }

  bool has_violation() {
    using Key = std::pair<uint32_t, std::vector<uint64_t>>;
    using UseSet = std::map<Key, int>;
    std::vector<UseSet> paths{{}};
    bool violated = false;
    enumerate(func_.body.entry(), paths, violated, {});
    return violated;
  }

private:
  using Instance = std::map<const ir::Region *, uint64_t>;

  void index_region(const ir::Region &region,
                    std::vector<const ir::Region *> loops) {
    region_loops_[&region] = loops;
    for (const auto &block : region.blocks) {
      for (ir::ValueId a : block.args) def_region_[a.index] = &region;
      for (const auto &op : block.ops) {
        for (ir::ValueId r : op.results) def_region_[r.index] = &region;
        for (const auto &nested : op.regions) {
          auto next = loops;
          if (op.kind == ir::OpKind::ScfFor) next.push_back(&nested);
          index_region(nested, next);
        }
      }
    }
  }

  std::pair<uint32_t, std::vector<uint64_t>>
  key_of(ir::ValueId v, const Instance &instance) const {
    std::vector<uint64_t> tag;
    auto it = def_region_.find(v.index);
    if (it != def_region_.end()) {
      for (const ir::Region *loop : region_loops_.at(it->second)) {
        auto inst = instance.find(loop);
        tag.push_back(inst == instance.end() ? 0 : inst->second);
      }
    }
    return {v.index, std::move(tag)};
  }

  template <typename Paths>
  void record_use(Paths &paths, bool &violated, ir::ValueId v,
                  const Instance &instance) const {
    auto key = key_of(v, instance);
    for (auto &p : paths)
      if (++p[key] > 1) violated = true;
  }

  /// The verdict only asks, per key, whether some path reaches count two;
  /// folding paths by per-key max preserves exactly that, so an oversize
  /// path set can be compacted without changing the answer.
  template <typename Paths> static void compact(Paths &paths) {
    constexpr size_t kMaxPaths = 2048;
    if (paths.size() <= kMaxPaths) return;
    auto folded = paths.front();
    for (size_t i = 1; i < paths.size(); ++i)
      for (const auto &[key, count] : paths[i]) {
        auto &slot = folded[key];
        slot = std::max(slot, count);
      }
    paths.assign(1, std::move(folded));
  }

  template <typename Paths>
  void enumerate(const ir::Block &block, Paths &paths, bool &violated,
                 Instance instance) const {
    if (violated) return;
    for (const auto &op : block.ops) {
      if (violated) return;
      for (ir::ValueId v : op.operands)
        if (func_.type_of(v).kind == ir::TypeKind::Qubit)
          record_use(paths, violated, v, instance);
      if (op.kind == ir::OpKind::ScfIf) {
        Paths then_paths = paths, else_paths = paths;
        enumerate(op.regions[0].entry(), then_paths, violated, instance);
        enumerate(op.regions[1].entry(), else_paths, violated, instance);
        paths.clear();
        paths.insert(paths.end(), then_paths.begin(), then_paths.end());
        paths.insert(paths.end(), else_paths.begin(), else_paths.end());
        compact(paths);
      } else if (op.kind == ir::OpKind::ScfFor) {
        for (uint64_t iteration = 1; iteration <= 2; ++iteration) {
          Instance inner = instance;
          inner[&op.regions[0]] = iteration;
          enumerate(op.regions[0].entry(), paths, violated, inner);
        }
      }
    }
  }

  const ir::FunctionDef &func_;
  std::map<uint32_t, const ir::Region *> def_region_;
  std::map<const ir::Region *, std::vector<const ir::Region *>> region_loops_;
};

// ---------------------------------------------------------------------
// hand-labeled adversarial single-use programs
// ---------------------------------------------------------------------

struct AdversarialCase {
  std::string name;
  ir::ModuleIR module;
  bool clean; // expected verdict: no error diagnostics
};

namespace detail {

struct IfParts {
  ir::Region then_region, else_region;
};

/// Emits `ops` into each branch and yields the produced values.
template <typename ThenFn, typename ElseFn>
ir::ValueId emit_if(ModuleBuilder &mb, ThenFn &&then_fn, ElseFn &&else_fn) {
  auto &b = mb.b();
  auto c0 = b.const_int(1);
  auto c1 = b.const_int(1);
  auto cond = b.create(ir::OpKind::CmpEq, {c0, c1}).results[0];
  ir::Block *saved = b.insertion_block();
  ir::Region then_region, else_region;
  then_region.blocks.emplace_back();
  else_region.blocks.emplace_back();
  b.set_insertion_block(&then_region.entry());
  ir::ValueId t = then_fn(b);
  b.yield({t});
  b.set_insertion_block(&else_region.entry());
  ir::ValueId e = else_fn(b);
  b.yield({e});
  b.set_insertion_block(saved);
  std::vector<ir::Region> regions;
  regions.push_back(std::move(then_region));
  regions.push_back(std::move(else_region));
  return b.create(ir::OpKind::ScfIf, {cond}, {}, std::move(regions))
      .results[0];
}

/// One-iter-arg scf.for running `body_fn(b, iter)` and yielding its result.
template <typename BodyFn>
ir::ValueId emit_for(ModuleBuilder &mb, int trip, ir::ValueId init,
                     BodyFn &&body_fn) {
  auto &b = mb.b();
  auto lo = b.const_int(0);
  auto hi = b.const_int(trip);
  auto st = b.const_int(1);
  ir::FunctionDef &f = mb.main();
  ir::Region body;
  body.blocks.emplace_back();
  ir::Block &blk = body.entry();
  blk.args.push_back(f.new_value(ir::Type::integer()));
  blk.args.push_back(f.new_value(ir::Type::qubit(1)));
  ir::Block *saved = b.insertion_block();
  b.set_insertion_block(&blk);
  ir::ValueId y = body_fn(b, blk.args[1]);
  b.yield({y});
  b.set_insertion_block(saved);
  std::vector<ir::Region> regions;
  regions.push_back(std::move(body));
  return b
      .create(ir::OpKind::ScfFor, {lo, hi, st, init}, {}, std::move(regions))
      .results[0];
}

} // namespace detail

/// Twelve hand-labeled programs covering same-region double use, ancestor
/// violations, loop escapes, sibling legality, and yielded-value reuse.
inline std::vector<AdversarialCase> adversarial_cases() {
  using ir::OpKind;
  std::vector<AdversarialCase> cases;

  auto make = [&](const std::string &name, bool clean, auto &&build) {
    ModuleBuilder mb;
    build(mb);
    mb.b().ret();
    cases.push_back({name, std::move(mb.module), clean});
  };

  // 1. same-region double use
  make("same-region double use", false, [](ModuleBuilder &mb) {
    auto a = mb.b().alloc(1);
    mb.b().gate1(OpKind::H, a);
    mb.b().gate1(OpKind::H, a);
  });

  // 2. straight chain is clean
  make("straight chain", true, [](ModuleBuilder &mb) {
    auto a = mb.b().alloc(1);
    auto b1 = mb.b().gate1(OpKind::H, a);
    mb.b().gate1(OpKind::H, b1);
  });

  // 3. sibling branches may both use one parent qubit
  make("sibling-branch legal double use", true, [](ModuleBuilder &mb) {
    auto a = mb.b().alloc(1);
    detail::emit_if(
        mb, [&](ir::OpBuilder &b) { return b.gate1(OpKind::H, a); },
        [&](ir::OpBuilder &b) { return b.gate1(OpKind::X, a); });
  });

  // 4. used in a branch, then again in the parent afterwards
  make("branch use then parent use", false, [](ModuleBuilder &mb) {
    auto a = mb.b().alloc(1);
    detail::emit_if(
        mb, [&](ir::OpBuilder &b) { return b.gate1(OpKind::H, a); },
        [&](ir::OpBuilder &b) { return b.alloc(1); });
    mb.b().gate1(OpKind::H, a);
  });

  // 5. used in the parent, then again inside a branch
  make("parent use then branch use", false, [](ModuleBuilder &mb) {
    auto a = mb.b().alloc(1);
    mb.b().gate1(OpKind::H, a);
    detail::emit_if(
        mb, [&](ir::OpBuilder &b) { return b.gate1(OpKind::X, a); },
        [&](ir::OpBuilder &b) { return b.alloc(1); });
  });

  // 6. loop body touches a qubit defined outside without iter_args
  make("loop escape without iter_args", false, [](ModuleBuilder &mb) {
    auto outside = mb.b().alloc(1);
    auto init = mb.b().alloc(1);
    detail::emit_for(mb, 3, init, [&](ir::OpBuilder &b, ir::ValueId) {
      return b.gate1(OpKind::H, outside);
    });
  });

  // 7. the same shape through iter_args is clean
  make("loop via iter_args", true, [](ModuleBuilder &mb) {
    auto init = mb.b().alloc(1);
    detail::emit_for(mb, 3, init, [&](ir::OpBuilder &b, ir::ValueId iter) {
      return b.gate1(OpKind::H, iter);
    });
  });

  // 8. iter arg consumed twice inside one iteration
  make("iter arg double use", false, [](ModuleBuilder &mb) {
    auto init = mb.b().alloc(1);
    detail::emit_for(mb, 2, init, [&](ir::OpBuilder &b, ir::ValueId iter) {
      b.gate1(OpKind::H, iter);
      return b.gate1(OpKind::X, iter);
    });
  });

  // 9. an scf.if result is a fresh definition; reusing it twice fails
  make("yielded value reused twice", false, [](ModuleBuilder &mb) {
    auto a = mb.b().alloc(1);
    auto r = detail::emit_if(
        mb, [&](ir::OpBuilder &b) { return b.gate1(OpKind::H, a); },
        [&](ir::OpBuilder &b) { (void)b; return a; });
    mb.b().gate1(OpKind::H, r);
    mb.b().gate1(OpKind::X, r);
  });

  // 10. a branch gates a value and also yields the pre-gate name
  make("yield plus gate in one branch", false, [](ModuleBuilder &mb) {
    auto a = mb.b().alloc(1);
    detail::emit_if(
        mb,
        [&](ir::OpBuilder &b) {
          b.gate1(OpKind::H, a);
          return a; // second use of %a on the then path
        },
        [&](ir::OpBuilder &b) { return b.gate1(OpKind::X, a); });
  });

  // 11. clean nesting: if inside for, all through iter values
  make("nested if in for", true, [](ModuleBuilder &mb) {
    auto init = mb.b().alloc(1);
    detail::emit_for(mb, 2, init, [&](ir::OpBuilder &, ir::ValueId iter) {
      auto &mb2 = mb;
      return detail::emit_if(
          mb2, [&](ir::OpBuilder &b) { return b.gate1(OpKind::H, iter); },
          [&](ir::OpBuilder &b) { return b.gate1(OpKind::X, iter); });
    });
  });

  // 12. loop init operand reused after the loop
  make("loop init reused after loop", false, [](ModuleBuilder &mb) {
    auto init = mb.b().alloc(1);
    detail::emit_for(mb, 2, init, [&](ir::OpBuilder &b, ir::ValueId iter) {
      return b.gate1(OpKind::H, iter);
    });
    mb.b().gate1(OpKind::H, init);
  });

  return cases;
}

// ---------------------------------------------------------------------
// oracle: all-pairs reachability over a flat CFG DAG
// ---------------------------------------------------------------------

/// Per qubit: violation iff two uses are connected by a path (block-level
/// transitive closure; two uses in one block always conflict).
inline std::set<uint32_t> cfg_double_use_oracle(const ir::FunctionDef &func) {
  const auto &blocks = func.body.blocks;
  size_t n = blocks.size();
  std::vector<std::vector<uint8_t>> reach(n, std::vector<uint8_t>(n, 0));
  for (size_t b = 0; b < n; ++b)
    if (!blocks[b].ops.empty())
      for (uint32_t s : blocks[b].terminator().successors) reach[b][s] = 1;
  for (size_t k = 0; k < n; ++k)
    for (size_t i = 0; i < n; ++i)
      if (reach[i][k])
        for (size_t j = 0; j < n; ++j)
          if (reach[k][j]) reach[i][j] = 1;

  std::map<uint32_t, std::vector<uint32_t>> use_blocks;
  for (uint32_t b = 0; b < n; ++b)
    for (const auto &op : blocks[b].ops)
      for (ir::ValueId v : op.operands)
        if (func.type_of(v).kind == ir::TypeKind::Qubit)
          use_blocks[v.index].push_back(b);

  std::set<uint32_t> offenders;
  for (const auto &[value, ubs] : use_blocks) {
    for (size_t i = 0; i < ubs.size() && !offenders.count(value); ++i)
      for (size_t j = 0; j < ubs.size(); ++j) {
        if (i == j) continue;
        if (ubs[i] == ubs[j] || reach[ubs[i]][ubs[j]]) {
          offenders.insert(value);
          break;
        }
      }
  }
  return offenders;
}

} // namespace qssa::test

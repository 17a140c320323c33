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

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qssa/ir/ops.hpp"
#include "qssa/ir/types.hpp"

namespace qssa::ir {

struct FunctionDef {
  std::string name;
  std::vector<Type> result_types;
  Region body;
  std::vector<Type> value_types; // indexed by ValueId::index

  ValueId new_value(Type t) {
    value_types.push_back(t);
    return {static_cast<uint32_t>(value_types.size() - 1)};
  }

  Type type_of(ValueId v) const { return value_types.at(v.index); }

  uint32_t num_values() const {
    return static_cast<uint32_t>(value_types.size());
  }

  std::vector<Type> arg_types() const {
    std::vector<Type> out;
    if (body.blocks.empty()) return out;
    for (ValueId a : body.entry().args) out.push_back(type_of(a));
    return out;
  }
};

/// A module: global functions with unique names; `main` is the entry.
struct ModuleIR {
  std::vector<FunctionDef> functions;

  FunctionDef *find(std::string_view name) {
    for (auto &f : functions)
      if (f.name == name) return &f;
    return nullptr;
  }
  const FunctionDef *find(std::string_view name) const {
    for (const auto &f : functions)
      if (f.name == name) return &f;
    return nullptr;
  }
};

// ---- traversal -------------------------------------------------------

/// Visit every operation in program order: blocks in order, operations in
/// order, nested regions immediately after their owning operation.
template <typename F> void walk_ops(Region &region, F &&fn) {
  for (auto &block : region.blocks)
    for (auto &op : block.ops) {
      fn(op);
      for (auto &nested : op.regions) walk_ops(nested, fn);
    }
}

template <typename F> void walk_ops(const Region &region, F &&fn) {
  for (const auto &block : region.blocks)
    for (const auto &op : block.ops) {
      fn(op);
      for (const auto &nested : op.regions) walk_ops(nested, fn);
    }
}

template <typename F> void walk_ops(FunctionDef &func, F &&fn) {
  walk_ops(func.body, fn);
}
template <typename F> void walk_ops(const FunctionDef &func, F &&fn) {
  walk_ops(func.body, fn);
}
template <typename F> void walk_ops(ModuleIR &module, F &&fn) {
  for (auto &f : module.functions) walk_ops(f.body, fn);
}
template <typename F> void walk_ops(const ModuleIR &module, F &&fn) {
  for (const auto &f : module.functions) walk_ops(f.body, fn);
}

inline size_t count_ops(const Region &region) {
  size_t n = 0;
  walk_ops(region, [&](const Operation &) { ++n; });
  return n;
}

inline size_t count_ops(const FunctionDef &func) {
  return count_ops(func.body);
}

inline size_t count_ops(const ModuleIR &module) {
  size_t n = 0;
  for (const auto &f : module.functions) n += count_ops(f);
  return n;
}

// ---- def-use ---------------------------------------------------------

struct Use {
  const Operation *op = nullptr;
  uint32_t slot = 0;
  bool operator==(const Use &) const = default;
};

/// Complete use lists for one function, in program order. Pointers stay
/// valid as long as the function is not mutated.
struct DefUseIndex {
  std::vector<std::vector<Use>> uses; // indexed by ValueId::index

  const std::vector<Use> &uses_of(ValueId v) const {
    static const std::vector<Use> kEmpty;
    if (v.index >= uses.size()) return kEmpty;
    return uses[v.index];
  }
  size_t num_uses(ValueId v) const { return uses_of(v).size(); }
};

inline DefUseIndex def_use_index(const FunctionDef &func) {
  DefUseIndex index;
  index.uses.resize(func.num_values());
  walk_ops(func, [&](const Operation &op) {
    for (uint32_t slot = 0; slot < op.operands.size(); ++slot) {
      ValueId v = op.operands[slot];
      if (v.index < index.uses.size()) index.uses[v.index].push_back({&op, slot});
    }
  });
  return index;
}

inline std::map<std::string, DefUseIndex> def_use_index(const ModuleIR &m) {
  std::map<std::string, DefUseIndex> out;
  for (const auto &f : m.functions) out[f.name] = def_use_index(f);
  return out;
}

} // namespace qssa::ir

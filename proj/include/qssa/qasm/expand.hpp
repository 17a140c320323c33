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

#include <string>
#include <vector>

#include "qssa/ir/ops.hpp"
#include "qssa/qasm/ast.hpp"
#include "qssa/qasm/parser.hpp"
#include "qssa/support/numeric.hpp"

namespace qssa::qasm {

/// One primitive application produced by syntactic gate expansion. `args`
/// index into the original application's qubit argument list.
struct PrimApp {
  ir::OpKind kind = ir::OpKind::X;
  std::vector<double> angles;  // 1 for Rx/Ry/Rz, 3 for U
  std::vector<uint32_t> args;  // argument slots, in operand order
  bool barrier = false;        // barrier over `args` instead of a gate
};

namespace detail {

/// Gate names that map straight onto primitive OpKinds. u1/u2/u3 and id
/// reduce to U; everything else expands through its qelib1 body.
inline bool direct_primitive(const std::string &name,
                             const std::vector<double> &params,
                             std::vector<PrimApp> &out) {
  using ir::OpKind;
  auto emit = [&](OpKind k, std::vector<double> angles,
                  std::vector<uint32_t> args) {
    out.push_back({k, std::move(angles), std::move(args), false});
  };
  if (name == "U" || name == "u3") {
    emit(OpKind::U, {params.at(0), params.at(1), params.at(2)}, {0});
    return true;
  }
  if (name == "u2") {
    emit(OpKind::U, {kPi / 2, params.at(0), params.at(1)}, {0});
    return true;
  }
  if (name == "u1") {
    emit(OpKind::U, {0.0, 0.0, params.at(0)}, {0});
    return true;
  }
  if (name == "id" || name == "u0") {
    emit(OpKind::U, {0.0, 0.0, 0.0}, {0});
    return true;
  }
  if (name == "CX" || name == "cx") {
    emit(OpKind::CNOT, {}, {0, 1});
    return true;
  }
  static const std::pair<const char *, OpKind> plain[] = {
      {"x", OpKind::X},     {"y", OpKind::Y},   {"z", OpKind::Z},
      {"h", OpKind::H},     {"s", OpKind::S},   {"sdg", OpKind::Sdg},
      {"t", OpKind::T},     {"tdg", OpKind::Tdg}};
  for (auto [n, k] : plain)
    if (name == n) {
      emit(k, {}, {0});
      return true;
    }
  static const std::pair<const char *, OpKind> rots[] = {
      {"rx", OpKind::Rx}, {"ry", OpKind::Ry}, {"rz", OpKind::Rz}};
  for (auto [n, k] : rots)
    if (name == n) {
      emit(k, {params.at(0)}, {0});
      return true;
    }
  return false;
}

inline void expand_rec(const QasmProgram &program, const std::string &name,
                       const std::vector<double> &params,
                       const std::vector<uint32_t> &arg_map,
                       std::vector<PrimApp> &out) {
  std::vector<PrimApp> direct;
  if (direct_primitive(name, params, direct)) {
    for (auto &p : direct) {
      for (auto &a : p.args) a = arg_map.at(a);
      out.push_back(std::move(p));
    }
    return;
  }
  auto sig = resolve_gate_in(program, name);
  if (!sig)
    throw_error(ErrorKind::UnknownGate, "gate '" + name + "' undeclared");
  if (sig->kind == GateSignature::Kind::Opaque)
    throw_error(ErrorKind::Unsupported,
                "opaque gate '" + name + "' has no definition");
  const GateDef *def = sig->def;
  for (const auto &st : def->body) {
    std::vector<uint32_t> mapped;
    for (uint32_t slot : st.args) mapped.push_back(arg_map.at(slot));
    if (st.is_barrier) {
      PrimApp b;
      b.barrier = true;
      b.args = std::move(mapped);
      out.push_back(std::move(b));
      continue;
    }
    std::vector<double> sub_params;
    for (const auto &e : st.params) sub_params.push_back(e->eval(params));
    expand_rec(program, st.gate, sub_params, mapped, out);
  }
}

} // namespace detail

/// Syntactic expansion of a gate application into primitive gate kinds.
/// Parameter expressions are evaluated to radians; the result references the
/// application's qubit arguments by slot. Throws UnknownGate for undeclared
/// names and Unsupported for opaque gates.
inline std::vector<PrimApp> expand_gate(const QasmProgram &program,
                                        const std::string &name,
                                        const std::vector<double> &params,
                                        uint32_t num_args) {
  std::vector<uint32_t> identity(num_args);
  for (uint32_t i = 0; i < num_args; ++i) identity[i] = i;
  std::vector<PrimApp> out;
  detail::expand_rec(program, name, params, identity, out);
  return out;
}

} // namespace qssa::qasm

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
#include <string>
#include <variant>
#include <vector>

#include "qssa/ir/types.hpp"
#include "qssa/support/complex_matrix.hpp"
#include "qssa/support/error.hpp"

namespace qssa::ir {

enum class OpKind : uint8_t {
  // quantum
  Alloc, CNOT, X, Y, Z, H, Rx, Ry, Rz, S, Sdg, T, Tdg, U, GenericGate,
  Measure, Split, Concat, Dim, Cast, Barrier, Reset,
  // structure
  Call, Return, ScfIf, ScfFor, Yield, Br, CondBr,
  // classical
  ConstInt, ConstAngle, AddI, SubI, MulI, CmpEq,
  MemAllocBit, MemStoreBit, MemLoadBit,
};

inline const char *op_mnemonic(OpKind k) {
  switch (k) {
  case OpKind::Alloc: return "qssa.alloc";
  case OpKind::CNOT: return "qssa.CNOT";
  case OpKind::X: return "qssa.X";
  case OpKind::Y: return "qssa.Y";
  case OpKind::Z: return "qssa.Z";
  case OpKind::H: return "qssa.H";
  case OpKind::Rx: return "qssa.Rx";
  case OpKind::Ry: return "qssa.Ry";
  case OpKind::Rz: return "qssa.Rz";
  case OpKind::S: return "qssa.S";
  case OpKind::Sdg: return "qssa.Sdg";
  case OpKind::T: return "qssa.T";
  case OpKind::Tdg: return "qssa.Tdg";
  case OpKind::U: return "qssa.U";
  case OpKind::GenericGate: return "qssa.gate";
  case OpKind::Measure: return "qssa.measure";
  case OpKind::Split: return "qssa.split";
  case OpKind::Concat: return "qssa.concat";
  case OpKind::Dim: return "qssa.dim";
  case OpKind::Cast: return "qssa.cast";
  case OpKind::Barrier: return "qssa.barrier";
  case OpKind::Reset: return "qssa.reset";
  case OpKind::Call: return "call";
  case OpKind::Return: return "return";
  case OpKind::ScfIf: return "scf.if";
  case OpKind::ScfFor: return "scf.for";
  case OpKind::Yield: return "scf.yield";
  case OpKind::Br: return "br";
  case OpKind::CondBr: return "cond_br";
  case OpKind::ConstInt: return "const.int";
  case OpKind::ConstAngle: return "const.angle";
  case OpKind::AddI: return "arith.addi";
  case OpKind::SubI: return "arith.subi";
  case OpKind::MulI: return "arith.muli";
  case OpKind::CmpEq: return "arith.cmpeq";
  case OpKind::MemAllocBit: return "memref.alloc_bit";
  case OpKind::MemStoreBit: return "memref.store_bit";
  case OpKind::MemLoadBit: return "memref.load_bit";
  }
  return "?";
}

/// True for operations that apply a unitary to qubits. These all satisfy the
/// width conservation rule: qubit widths in == qubit widths out.
inline bool is_gate(OpKind k) {
  switch (k) {
  case OpKind::CNOT:
  case OpKind::X: case OpKind::Y: case OpKind::Z: case OpKind::H:
  case OpKind::Rx: case OpKind::Ry: case OpKind::Rz:
  case OpKind::S: case OpKind::Sdg: case OpKind::T: case OpKind::Tdg:
  case OpKind::U: case OpKind::GenericGate:
    return true;
  default:
    return false;
  }
}

inline bool is_single_qubit_gate(OpKind k) {
  switch (k) {
  case OpKind::X: case OpKind::Y: case OpKind::Z: case OpKind::H:
  case OpKind::Rx: case OpKind::Ry: case OpKind::Rz:
  case OpKind::S: case OpKind::Sdg: case OpKind::T: case OpKind::Tdg:
  case OpKind::U:
    return true;
  default:
    return false;
  }
}

inline bool is_rotation(OpKind k) {
  return k == OpKind::Rx || k == OpKind::Ry || k == OpKind::Rz;
}

inline bool is_terminator(OpKind k) {
  return k == OpKind::Return || k == OpKind::Yield || k == OpKind::Br ||
         k == OpKind::CondBr;
}

/// Effect taxonomy. Every kind except the six below is side-effect free;
/// gates in particular are pure value transformers.
enum class Effect : uint8_t {
  None,            // pure
  ResourceAcquire, // alloc-like: acquires but does not mutate state
  Observable,      // measurement/reset: probabilistic, collapses state
  MemoryWrite,     // classical bit store
  MemoryRead,      // classical bit load
  Fence,           // barrier: optimization fence over its operands
};

inline Effect effect_of(OpKind k) {
  switch (k) {
  case OpKind::Alloc: return Effect::ResourceAcquire;
  // Bit cells declare program output width, so they follow alloc.
  case OpKind::MemAllocBit: return Effect::ResourceAcquire;
  case OpKind::Measure:
  case OpKind::Reset: return Effect::Observable;
  case OpKind::MemStoreBit: return Effect::MemoryWrite;
  case OpKind::MemLoadBit: return Effect::MemoryRead;
  case OpKind::Barrier: return Effect::Fence;
  default: return Effect::None;
  }
}

inline bool is_pure(OpKind k) { return effect_of(k) == Effect::None; }

/// Attribute payload: integers, radians, or a gate matrix.
using Attr = std::variant<int64_t, double, CMatrix>;
using AttrMap = std::map<std::string, Attr>;

struct Region;

/// One SSA operation. Gate attributes hold angles (`theta`, `phi`,
/// `lambda`, `angle`); Alloc holds `size`; constants hold `value`;
/// GenericGate holds `matrix`. Regions are nonempty only for scf.if and
/// scf.for; successors only for br and cond_br.
struct Operation {
  OpKind kind = OpKind::Return;
  std::vector<ValueId> operands;
  std::vector<ValueId> results;
  AttrMap attrs;
  std::vector<Region> regions;
  std::vector<uint32_t> successors;
  std::string callee;
  SourceLoc loc;

  int64_t int_attr(const std::string &name) const {
    return std::get<int64_t>(attrs.at(name));
  }
  double float_attr(const std::string &name) const {
    return std::get<double>(attrs.at(name));
  }
  const CMatrix &matrix_attr(const std::string &name) const {
    return std::get<CMatrix>(attrs.at(name));
  }
  bool has_attr(const std::string &name) const { return attrs.count(name); }
};

/// Basic block: typed arguments, operations, one trailing terminator.
struct Block {
  std::vector<ValueId> args;
  std::vector<Operation> ops;

  Operation &terminator() { return ops.back(); }
  const Operation &terminator() const { return ops.back(); }
};

/// Single-entry nested sub-CFG. Entry block is blocks[0].
struct Region {
  std::vector<Block> blocks;

  Block &entry() { return blocks.front(); }
  const Block &entry() const { return blocks.front(); }
};

} // namespace qssa::ir

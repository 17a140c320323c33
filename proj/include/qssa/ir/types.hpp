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
#include <string>

#include "qssa/support/error.hpp"

namespace qssa::ir {

/// SSA value handle, local to one function. Every valid ValueId has exactly
/// one defining site (block argument or operation result) and one type.
struct ValueId {
  static constexpr uint32_t kInvalid = UINT32_MAX;
  uint32_t index = kInvalid;

  bool valid() const { return index != kInvalid; }
  bool operator==(const ValueId &) const = default;
  auto operator<=>(const ValueId &) const = default;
};

enum class TypeKind : uint8_t {
  Qubit,   // qubit<n> or qubit<?>
  Int,     // 64-bit signed
  Bool,    // i1
  Angle,   // f64 radians
  Bits,    // bits<n> or bits<?>, measurement results
  BitCell, // 1-bit memory cell handle (classical register storage)
};

/// Semantic value type. Qubit and Bits carry a size that is either static
/// (size >= 1) or dynamic (`?`).
struct Type {
  TypeKind kind = TypeKind::Int;
  uint32_t size = 0;
  bool dynamic = false;

  static Type qubit(uint32_t n) { return {TypeKind::Qubit, n, false}; }
  static Type qubit_dyn() { return {TypeKind::Qubit, 0, true}; }
  static Type integer() { return {TypeKind::Int, 0, false}; }
  static Type boolean() { return {TypeKind::Bool, 0, false}; }
  static Type angle() { return {TypeKind::Angle, 0, false}; }
  static Type bits(uint32_t n) { return {TypeKind::Bits, n, false}; }
  static Type bits_dyn() { return {TypeKind::Bits, 0, true}; }
  static Type bitcell() { return {TypeKind::BitCell, 0, false}; }

  bool operator==(const Type &) const = default;

  bool is_qubit() const { return kind == TypeKind::Qubit; }
  bool is_static_qubit() const { return is_qubit() && !dynamic; }

  std::string str() const {
    switch (kind) {
    case TypeKind::Qubit:
      return dynamic ? "qubit<?>" : "qubit<" + std::to_string(size) + ">";
    case TypeKind::Int: return "int";
    case TypeKind::Bool: return "bool";
    case TypeKind::Angle: return "angle";
    case TypeKind::Bits:
      return dynamic ? "bits<?>" : "bits<" + std::to_string(size) + ">";
    case TypeKind::BitCell: return "bitcell";
    }
    return "?";
  }
};

} // namespace qssa::ir

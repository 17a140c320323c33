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

#include <optional>
#include <string>
#include <vector>

#include "qssa/ir/module.hpp"
#include "qssa/ir/ops.hpp"
#include "qssa/ir/types.hpp"
#include "qssa/support/error.hpp"

namespace qssa::ir {

inline constexpr double kUnitaryTol = 1e-9;

namespace detail {

[[noreturn]] inline void type_fail(OpKind kind, const std::string &why) {
  throw_error(ErrorKind::Type,
              std::string(op_mnemonic(kind)) + ": " + why);
}

inline void require(bool cond, OpKind kind, const std::string &why) {
  if (!cond) type_fail(kind, why);
}

inline bool is_valid_type(const Type &t) {
  if ((t.kind == TypeKind::Qubit || t.kind == TypeKind::Bits) && !t.dynamic)
    return t.size >= 1;
  return true;
}

} // namespace detail

/// Compute the result types the type rules dictate for an operation, given
/// its operands, attributes, and regions. `requested` supplies result types
/// that cannot be inferred (static split sizes, cast target). Throws
/// Error(Type) naming the violated rule.
inline std::vector<Type>
infer_result_types(const ModuleIR *module, const FunctionDef &func,
                   OpKind kind, const std::vector<ValueId> &operands,
                   const AttrMap &attrs, const std::vector<Region> &regions,
                   const std::vector<Type> &requested,
                   const std::string &callee) {
  using detail::require;
  auto ty = [&](size_t i) { return func.type_of(operands.at(i)); };
  auto all_requested_valid = [&] {
    for (const auto &t : requested)
      require(detail::is_valid_type(t), kind,
              "result type " + t.str() + " is malformed (size must be >= 1)");
  };
  all_requested_valid();

  auto require_region_shape = [&](const Region &r, size_t nargs,
                                  const char *what) {
    require(r.blocks.size() == 1, kind,
            std::string(what) + " must hold exactly one block");
    require(r.entry().args.size() == nargs, kind,
            std::string(what) + " has wrong block-argument count");
    require(!r.entry().ops.empty() &&
                r.entry().terminator().kind == OpKind::Yield,
            kind, std::string(what) + " must end in scf.yield");
  };
  auto yield_types = [&](const Region &r) {
    std::vector<Type> out;
    for (ValueId v : r.entry().terminator().operands)
      out.push_back(func.type_of(v));
    return out;
  };

  switch (kind) {
  case OpKind::Alloc: {
    if (attrs.count("size")) {
      require(operands.empty(), kind, "static alloc takes no operands");
      int64_t n = std::get<int64_t>(attrs.at("size"));
      require(n >= 1, kind, "size must be >= 1, got " + std::to_string(n));
      return {Type::qubit(static_cast<uint32_t>(n))};
    }
    if (operands.empty()) {
      // static form with the size carried by the result type alone
      require(requested.size() == 1 && requested[0].is_static_qubit(), kind,
              "alloc needs a size attribute, an int operand, or a static "
              "qubit result type");
      return {requested[0]};
    }
    require(operands.size() == 1 && ty(0) == Type::integer(), kind,
            "dynamic alloc takes one int size operand");
    return {Type::qubit_dyn()};
  }

  case OpKind::X: case OpKind::Y: case OpKind::Z: case OpKind::H:
  case OpKind::S: case OpKind::Sdg: case OpKind::T: case OpKind::Tdg: {
    require(operands.size() == 1, kind, "takes exactly one qubit operand");
    require(ty(0) == Type::qubit(1), kind,
            "operand must be qubit<1>, got " + ty(0).str());
    return {Type::qubit(1)};
  }

  case OpKind::Rx: case OpKind::Ry: case OpKind::Rz: {
    bool has_attr = attrs.count("angle") > 0;
    require(!operands.empty() && ty(0) == Type::qubit(1), kind,
            "first operand must be qubit<1>");
    if (has_attr) {
      require(operands.size() == 1, kind,
              "angle attribute and angle operand are exclusive");
    } else {
      require(operands.size() == 2 && ty(1) == Type::angle(), kind,
              "needs an angle attribute or one angle operand");
    }
    return {Type::qubit(1)};
  }

  case OpKind::U: {
    bool has_attrs =
        attrs.count("theta") && attrs.count("phi") && attrs.count("lambda");
    require(!operands.empty() && ty(0) == Type::qubit(1), kind,
            "first operand must be qubit<1>");
    if (has_attrs) {
      require(operands.size() == 1, kind,
              "angle attributes and angle operands are exclusive");
    } else {
      require(operands.size() == 4, kind,
              "needs theta/phi/lambda attributes or three angle operands");
      for (size_t i = 1; i < 4; ++i)
        require(ty(i) == Type::angle(), kind, "angle operands must be angle");
    }
    return {Type::qubit(1)};
  }

  case OpKind::CNOT: {
    require(operands.size() == 2, kind, "takes (control, target)");
    require(ty(0) == Type::qubit(1) && ty(1) == Type::qubit(1), kind,
            "control and target must be qubit<1>");
    return {Type::qubit(1), Type::qubit(1)};
  }

  case OpKind::GenericGate: {
    require(attrs.count("matrix") > 0, kind, "needs a matrix attribute");
    require(!operands.empty(), kind, "needs at least one qubit operand");
    uint32_t total = 0;
    std::vector<Type> out;
    for (size_t i = 0; i < operands.size(); ++i) {
      Type t = ty(i);
      require(t.is_static_qubit(), kind,
              "operands must be static qubit arrays, got " + t.str());
      total += t.size;
      out.push_back(t);
    }
    const auto &m = std::get<CMatrix>(attrs.at("matrix"));
    size_t dim = size_t{1} << total;
    require(m.rows() == dim && m.cols() == dim, kind,
            "matrix must be 2^" + std::to_string(total) + " square");
    require(unitarity_defect(m) <= kUnitaryTol, kind,
            "matrix is not unitary within 1e-9");
    return out;
  }

  case OpKind::Measure: {
    require(operands.size() == 1 && ty(0).is_qubit(), kind,
            "takes one qubit array");
    Type q = ty(0);
    Type b = q.dynamic ? Type::bits_dyn() : Type::bits(q.size);
    return {b, q};
  }

  case OpKind::Split: {
    require(!operands.empty() && ty(0).is_qubit(), kind,
            "first operand must be a qubit array");
    Type in = ty(0);
    if (!in.dynamic) {
      require(operands.size() == 1, kind,
              "static split takes only the array operand");
      require(requested.size() == 2, kind,
              "static split needs two requested result types");
      require(requested[0].is_static_qubit() && requested[1].is_static_qubit(),
              kind, "static split results must be static qubit arrays");
      require(requested[0].size + requested[1].size == in.size, kind,
              "split sizes " + std::to_string(requested[0].size) + "+" +
                  std::to_string(requested[1].size) + " != " +
                  std::to_string(in.size));
      return {requested[0], requested[1]};
    }
    require(operands.size() == 3 && ty(1) == Type::integer() &&
                ty(2) == Type::integer(),
            kind, "dynamic split takes (array, int, int)");
    return {Type::qubit_dyn(), Type::qubit_dyn()};
  }

  case OpKind::Concat: {
    require(operands.size() == 2 && ty(0).is_qubit() && ty(1).is_qubit(),
            kind, "takes two qubit arrays");
    if (ty(0).dynamic || ty(1).dynamic) return {Type::qubit_dyn()};
    return {Type::qubit(ty(0).size + ty(1).size)};
  }

  case OpKind::Dim: {
    require(operands.size() == 1 && ty(0) == Type::qubit_dyn(), kind,
            "takes one dynamic qubit array");
    return {Type::integer(), Type::qubit_dyn()};
  }

  case OpKind::Cast: {
    require(operands.size() == 1 && ty(0).is_qubit(), kind,
            "takes one qubit array");
    require(requested.size() == 1 && requested[0].is_qubit(), kind,
            "needs the target qubit type");
    Type from = ty(0), to = requested[0];
    bool ok = (from.dynamic != to.dynamic) ||
              (!from.dynamic && !to.dynamic && from.size == to.size);
    require(ok, kind, "cast must change exactly one side to dynamic or keep "
                      "equal static sizes (" +
                          from.str() + " -> " + to.str() + ")");
    return {to};
  }

  case OpKind::Barrier: {
    require(!operands.empty(), kind, "takes at least one qubit operand");
    std::vector<Type> out;
    for (size_t i = 0; i < operands.size(); ++i) {
      require(ty(i).is_qubit(), kind, "operands must be qubit arrays");
      out.push_back(ty(i));
    }
    return out;
  }

  case OpKind::Reset: {
    require(operands.size() == 1 && ty(0) == Type::qubit(1), kind,
            "takes one qubit<1>");
    return {Type::qubit(1)};
  }

  case OpKind::Call: {
    require(module != nullptr, kind, "call requires module context");
    const FunctionDef *target = module->find(callee);
    require(target != nullptr, kind, "unknown callee @" + callee);
    auto params = target->arg_types();
    require(params.size() == operands.size(), kind,
            "@" + callee + " expects " + std::to_string(params.size()) +
                " argument(s)");
    for (size_t i = 0; i < params.size(); ++i)
      require(ty(i) == params[i], kind,
              "argument " + std::to_string(i) + " must be " + params[i].str() +
                  ", got " + ty(i).str());
    return target->result_types;
  }

  case OpKind::Return: {
    require(operands.size() == func.result_types.size(), kind,
            "operand count must match function result count");
    for (size_t i = 0; i < operands.size(); ++i)
      require(ty(i) == func.result_types[i], kind,
              "result " + std::to_string(i) + " must be " +
                  func.result_types[i].str());
    return {};
  }

  case OpKind::ScfIf: {
    require(operands.size() == 1 && ty(0) == Type::boolean(), kind,
            "takes one bool condition");
    require(regions.size() == 2, kind, "needs then and else regions");
    require_region_shape(regions[0], 0, "then region");
    require_region_shape(regions[1], 0, "else region");
    auto then_types = yield_types(regions[0]);
    auto else_types = yield_types(regions[1]);
    require(then_types == else_types, kind,
            "then and else regions yield different types");
    return then_types;
  }

  case OpKind::ScfFor: {
    require(operands.size() >= 3, kind, "takes (lo, hi, step, inits...)");
    for (size_t i = 0; i < 3; ++i)
      require(ty(i) == Type::integer(), kind, "bounds must be int");
    std::vector<Type> iter_types;
    for (size_t i = 3; i < operands.size(); ++i) iter_types.push_back(ty(i));
    require(regions.size() == 1, kind, "needs exactly one body region");
    require_region_shape(regions[0], 1 + iter_types.size(), "body region");
    const Block &body = regions[0].entry();
    require(func.type_of(body.args[0]) == Type::integer(), kind,
            "first body argument must be the int induction variable");
    for (size_t i = 0; i < iter_types.size(); ++i)
      require(func.type_of(body.args[i + 1]) == iter_types[i], kind,
              "iter_arg " + std::to_string(i) + " type mismatch");
    auto ytypes = yield_types(regions[0]);
    require(ytypes == iter_types, kind,
            "body yield types must match iter_args");
    return iter_types;
  }

  case OpKind::Yield:
    return {}; // operand types validated by the enclosing scf op

  case OpKind::Br: {
    require(operands.empty(), kind, "takes no operands");
    require(regions.empty(), kind, "takes no regions");
    return {};
  }

  case OpKind::CondBr: {
    require(operands.size() == 1 && ty(0) == Type::boolean(), kind,
            "takes one bool condition");
    return {};
  }

  case OpKind::ConstInt: {
    require(operands.empty() && attrs.count("value") &&
                std::holds_alternative<int64_t>(attrs.at("value")),
            kind, "needs an integer value attribute");
    return {Type::integer()};
  }

  case OpKind::ConstAngle: {
    require(operands.empty() && attrs.count("value") &&
                std::holds_alternative<double>(attrs.at("value")),
            kind, "needs a float value attribute");
    return {Type::angle()};
  }

  case OpKind::AddI: case OpKind::SubI: case OpKind::MulI: {
    require(operands.size() == 2 && ty(0) == Type::integer() &&
                ty(1) == Type::integer(),
            kind, "takes (int, int)");
    return {Type::integer()};
  }

  case OpKind::CmpEq: {
    require(operands.size() == 2 && ty(0) == Type::integer() &&
                ty(1) == Type::integer(),
            kind, "takes (int, int)");
    return {Type::boolean()};
  }

  case OpKind::MemAllocBit: {
    require(operands.empty(), kind, "takes no operands");
    return {Type::bitcell()};
  }

  case OpKind::MemStoreBit: {
    require(operands.size() == 2 && ty(0) == Type::bitcell() &&
                ty(1) == Type::bits(1),
            kind, "takes (bitcell, bits<1>)");
    return {};
  }

  case OpKind::MemLoadBit: {
    require(operands.size() == 1 && ty(0) == Type::bitcell(), kind,
            "takes one bitcell");
    return {Type::integer()};
  }
  }
  detail::type_fail(kind, "unknown operation kind");
}

/// Validate one operation against the type rules. Returns the violation
/// message, or nullopt when the op is well-typed. Successor-count rules for
/// branches are included; dominance/SSA structure is the verifier's job.
inline std::optional<std::string>
check_operation(const ModuleIR *module, const FunctionDef &func,
                const Operation &op) {
  try {
    std::vector<Type> requested;
    for (ValueId r : op.results) requested.push_back(func.type_of(r));
    auto expected = infer_result_types(module, func, op.kind, op.operands,
                                       op.attrs, op.regions, requested,
                                       op.callee);
    if (expected.size() != op.results.size())
      return std::string(op_mnemonic(op.kind)) + ": expected " +
             std::to_string(expected.size()) + " result(s), has " +
             std::to_string(op.results.size());
    for (size_t i = 0; i < expected.size(); ++i)
      if (func.type_of(op.results[i]) != expected[i])
        return std::string(op_mnemonic(op.kind)) + ": result " +
               std::to_string(i) + " must be " + expected[i].str() +
               ", got " + func.type_of(op.results[i]).str();
    if (op.kind == OpKind::Br && op.successors.size() != 1)
      return "br: needs exactly one successor";
    if (op.kind == OpKind::CondBr && op.successors.size() != 2)
      return "cond_br: needs exactly two successors";
    if (op.kind != OpKind::Br && op.kind != OpKind::CondBr &&
        !op.successors.empty())
      return std::string(op_mnemonic(op.kind)) + ": takes no successors";
  } catch (const Error &e) {
    return e.message();
  }
  return std::nullopt;
}

/// Builds well-typed operations into a block, minting fresh result values.
class OpBuilder {
public:
  OpBuilder(ModuleIR &module, FunctionDef &func)
      : module_(&module), func_(&func) {}

  explicit OpBuilder(FunctionDef &func) : module_(nullptr), func_(&func) {}

  void set_insertion_block(Block *block) { block_ = block; }
  Block *insertion_block() const { return block_; }
  FunctionDef &func() { return *func_; }

  /// The spec's build_op: checks the type rules, mints result ValueIds.
  Operation &create(OpKind kind, std::vector<ValueId> operands = {},
                    AttrMap attrs = {}, std::vector<Region> regions = {},
                    std::vector<Type> requested = {},
                    std::string callee = {}) {
    auto result_types =
        infer_result_types(module_, *func_, kind, operands, attrs, regions,
                           requested, callee);
    Operation op;
    op.kind = kind;
    op.operands = std::move(operands);
    op.attrs = std::move(attrs);
    op.regions = std::move(regions);
    op.callee = std::move(callee);
    for (const Type &t : result_types) op.results.push_back(func_->new_value(t));
    block_->ops.push_back(std::move(op));
    return block_->ops.back();
  }

  // Convenience wrappers used throughout raising, tests, and generators.

  ValueId alloc(uint32_t n) {
    return create(OpKind::Alloc, {}, {{"size", int64_t(n)}}).results[0];
  }
  ValueId gate1(OpKind kind, ValueId q) {
    return create(kind, {q}).results[0];
  }
  ValueId rotation(OpKind kind, ValueId q, double angle) {
    return create(kind, {q}, {{"angle", angle}}).results[0];
  }
  ValueId u3(ValueId q, double theta, double phi, double lambda) {
    return create(OpKind::U, {q},
                  {{"theta", theta}, {"phi", phi}, {"lambda", lambda}})
        .results[0];
  }
  std::pair<ValueId, ValueId> cnot(ValueId control, ValueId target) {
    auto &op = create(OpKind::CNOT, {control, target});
    return {op.results[0], op.results[1]};
  }
  std::pair<ValueId, ValueId> measure(ValueId q) {
    auto &op = create(OpKind::Measure, {q});
    return {op.results[0], op.results[1]};
  }
  std::pair<ValueId, ValueId> split(ValueId q, uint32_t a, uint32_t b) {
    auto &op = create(OpKind::Split, {q}, {}, {},
                      {Type::qubit(a), Type::qubit(b)});
    return {op.results[0], op.results[1]};
  }
  ValueId concat(ValueId a, ValueId b) {
    return create(OpKind::Concat, {a, b}).results[0];
  }
  ValueId const_int(int64_t v) {
    return create(OpKind::ConstInt, {}, {{"value", v}}).results[0];
  }
  ValueId const_angle(double v) {
    return create(OpKind::ConstAngle, {}, {{"value", v}}).results[0];
  }
  void ret(std::vector<ValueId> values = {}) {
    create(OpKind::Return, std::move(values));
  }
  void yield(std::vector<ValueId> values = {}) {
    create(OpKind::Yield, std::move(values));
  }

private:
  ModuleIR *module_;
  FunctionDef *func_;
  Block *block_ = nullptr;
};

/// Free-standing build_op matching the spec surface: construct a checked
/// operation (not yet inserted into a block).
inline Operation build_op(const ModuleIR *module, FunctionDef &func,
                          OpKind kind, std::vector<ValueId> operands,
                          AttrMap attrs = {}, std::vector<Region> regions = {},
                          std::vector<Type> requested = {},
                          std::string callee = {}) {
  auto result_types = infer_result_types(module, func, kind, operands, attrs,
                                         regions, requested, callee);
  Operation op;
  op.kind = kind;
  op.operands = std::move(operands);
  op.attrs = std::move(attrs);
  op.regions = std::move(regions);
  op.callee = std::move(callee);
  for (const Type &t : result_types) op.results.push_back(func.new_value(t));
  return op;
}

} // namespace qssa::ir

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

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "qssa/ir/module.hpp"
#include "qssa/support/numeric.hpp"

namespace qssa::ir {

namespace detail {

/// Prints one function with values renumbered densely in program order, so
/// the output is canonical: two structurally equal functions print the same
/// text regardless of internal ValueId history.
class FunctionPrinter {
public:
  FunctionPrinter(std::ostream &os, const FunctionDef &func)
      : os_(os), func_(func), names_(func.num_values(), UINT32_MAX) {}

  void print(int indent) {
    assign_block(func_.body.entry());
    assign_region(func_.body);

    pad(indent);
    os_ << "func @" << func_.name << "(";
    const Block &entry = func_.body.entry();
    for (size_t i = 0; i < entry.args.size(); ++i) {
      if (i) os_ << ", ";
      os_ << name(entry.args[i]) << ": " << func_.type_of(entry.args[i]).str();
    }
    os_ << ")";
    if (!func_.result_types.empty()) {
      os_ << " -> (";
      for (size_t i = 0; i < func_.result_types.size(); ++i) {
        if (i) os_ << ", ";
        os_ << func_.result_types[i].str();
      }
      os_ << ")";
    }
    os_ << " {\n";
    print_region_body(func_.body, indent + 1, /*labels=*/
                      func_.body.blocks.size() > 1);
    pad(indent);
    os_ << "}\n";
  }

private:
  void pad(int indent) {
    for (int i = 0; i < indent; ++i) os_ << "  ";
  }

  void assign(ValueId v) {
    if (v.index < names_.size() && names_[v.index] == UINT32_MAX)
      names_[v.index] = next_++;
  }

  void assign_block(const Block &b) {
    for (ValueId a : b.args) assign(a);
  }

  void assign_region(const Region &r) {
    for (size_t bi = 0; bi < r.blocks.size(); ++bi) {
      const Block &b = r.blocks[bi];
      if (&r != &func_.body || bi != 0) assign_block(b);
      for (const auto &op : b.ops) {
        for (ValueId res : op.results) assign(res);
        for (const auto &nested : op.regions) {
          if (!nested.blocks.empty()) assign_block(nested.entry());
          assign_region(nested);
        }
      }
    }
  }

  std::string name(ValueId v) const {
    if (v.index >= names_.size() || names_[v.index] == UINT32_MAX)
      return "%?" + std::to_string(v.index);
    return "%" + std::to_string(names_[v.index]);
  }

  static std::string attr_str(const Attr &a) {
    if (const auto *i = std::get_if<int64_t>(&a)) return std::to_string(*i);
    if (const auto *d = std::get_if<double>(&a)) return format_double_exact(*d);
    const auto &m = std::get<CMatrix>(a);
    std::string out = "[";
    for (size_t r = 0; r < m.rows(); ++r) {
      if (r) out += ", ";
      out += "[";
      for (size_t c = 0; c < m.cols(); ++c) {
        if (c) out += ", ";
        double re = m(r, c).real(), im = m(r, c).imag();
        out += format_double_exact(re);
        out += (im < 0 || (im == 0 && std::signbit(im))) ? "-" : "+";
        out += format_double_exact(std::fabs(im));
        out += "i";
      }
      out += "]";
    }
    out += "]";
    return out;
  }

  void print_attrs(const Operation &op) {
    if (op.attrs.empty()) return;
    os_ << " {";
    bool first = true;
    for (const auto &[key, val] : op.attrs) {
      if (!first) os_ << ", ";
      first = false;
      os_ << key << " = " << attr_str(val);
    }
    os_ << "}";
  }

  void print_result_types(const Operation &op) {
    if (op.results.empty()) return;
    os_ << " : ";
    if (op.results.size() == 1) {
      os_ << func_.type_of(op.results[0]).str();
      return;
    }
    os_ << "(";
    for (size_t i = 0; i < op.results.size(); ++i) {
      if (i) os_ << ", ";
      os_ << func_.type_of(op.results[i]).str();
    }
    os_ << ")";
  }

  void print_region_body(const Region &r, int indent, bool labels) {
    for (size_t bi = 0; bi < r.blocks.size(); ++bi) {
      if (labels) {
        pad(indent - 1);
        os_ << " ^bb" << bi << ":\n";
      }
      for (const auto &op : r.blocks[bi].ops) print_op(op, indent);
    }
  }

  void print_op(const Operation &op, int indent) {
    pad(indent);
    if (!op.results.empty()) {
      for (size_t i = 0; i < op.results.size(); ++i) {
        if (i) os_ << ", ";
        os_ << name(op.results[i]);
      }
      os_ << " = ";
    }
    switch (op.kind) {
    case OpKind::Call: {
      os_ << "call @" << op.callee << "(";
      for (size_t i = 0; i < op.operands.size(); ++i) {
        if (i) os_ << ", ";
        os_ << name(op.operands[i]);
      }
      os_ << ")";
      print_result_types(op);
      os_ << "\n";
      return;
    }
    case OpKind::ScfIf: {
      os_ << "scf.if " << name(op.operands[0]);
      print_result_types(op);
      os_ << " {\n";
      print_region_body(op.regions[0], indent + 1, false);
      pad(indent);
      os_ << "} else {\n";
      print_region_body(op.regions[1], indent + 1, false);
      pad(indent);
      os_ << "}\n";
      return;
    }
    case OpKind::ScfFor: {
      const Block &body = op.regions[0].entry();
      os_ << "scf.for " << name(body.args[0]) << " = "
          << name(op.operands[0]) << " to " << name(op.operands[1])
          << " step " << name(op.operands[2]);
      if (op.operands.size() > 3) {
        os_ << " iter_args(";
        for (size_t i = 3; i < op.operands.size(); ++i) {
          if (i > 3) os_ << ", ";
          os_ << name(body.args[i - 2]) << " = " << name(op.operands[i]);
        }
        os_ << ")";
      }
      print_result_types(op);
      os_ << " {\n";
      print_region_body(op.regions[0], indent + 1, false);
      pad(indent);
      os_ << "}\n";
      return;
    }
    case OpKind::Br: {
      os_ << "br ^bb" << op.successors[0] << "\n";
      return;
    }
    case OpKind::CondBr: {
      os_ << "cond_br " << name(op.operands[0]) << ", ^bb"
          << op.successors[0] << ", ^bb" << op.successors[1] << "\n";
      return;
    }
    default:
      break;
    }
    os_ << op_mnemonic(op.kind);
    for (size_t i = 0; i < op.operands.size(); ++i) {
      os_ << (i ? ", " : " ") << name(op.operands[i]);
    }
    print_attrs(op);
    print_result_types(op);
    os_ << "\n";
  }

  std::ostream &os_;
  const FunctionDef &func_;
  std::vector<uint32_t> names_;
  uint32_t next_ = 0;
};

} // namespace detail

/// Deterministic, canonical textual form. parse_ir(print_ir(m)) == m
/// structurally for every well-formed module.
inline std::string print_ir(const ModuleIR &module) {
  std::ostringstream os;
  if (module.functions.empty()) {
    os << "module { }\n";
    return os.str();
  }
  os << "module {\n";
  for (const auto &f : module.functions) {
    detail::FunctionPrinter printer(os, f);
    printer.print(1);
  }
  os << "}\n";
  return os.str();
}

/// Structural equality modulo value numbering: compare canonical prints.
inline bool structurally_equal(const ModuleIR &a, const ModuleIR &b) {
  return print_ir(a) == print_ir(b);
}

} // namespace qssa::ir

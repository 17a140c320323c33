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

#include <cctype>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qssa/ir/build.hpp"
#include "qssa/ir/module.hpp"
#include "qssa/support/error.hpp"

namespace qssa::ir {

namespace detail {

enum class ITok {
  Ident, ValueRef, FuncRef, BlockRef, Int, Float,
  LParen, RParen, LBrace, RBrace, LBracket, RBracket,
  Less, Greater, Question, Comma, Equal, Colon, Arrow, Plus, Minus,
  End,
};

struct IToken {
  ITok kind = ITok::End;
  std::string text;
  double real = 0.0;
  int64_t integer = 0;
  SourceLoc loc;
};

class IrLexer {
public:
  explicit IrLexer(std::string_view src) : src_(src) {}

  IToken next() {
    skip_trivia();
    IToken tok;
    tok.loc = {line_, static_cast<uint32_t>(pos_ - line_start_ + 1)};
    if (pos_ >= src_.size()) return tok;
    char c = src_[pos_];
    if (c == '%' || c == '@' || c == '^') {
      advance();
      size_t start = pos_;
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(
                                        src_[pos_])) ||
                                    src_[pos_] == '_'))
        advance();
      if (pos_ == start)
        throw_error(ErrorKind::Syntax, "empty name after sigil", tok.loc);
      tok.text = std::string(src_.substr(start, pos_ - start));
      tok.kind = c == '%' ? ITok::ValueRef
                          : c == '@' ? ITok::FuncRef : ITok::BlockRef;
      return tok;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_' || src_[pos_] == '.'))
        advance();
      tok.kind = ITok::Ident;
      tok.text = std::string(src_.substr(start, pos_ - start));
      return tok;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return lex_number(tok);
    advance();
    switch (c) {
    case '(': tok.kind = ITok::LParen; return tok;
    case ')': tok.kind = ITok::RParen; return tok;
    case '{': tok.kind = ITok::LBrace; return tok;
    case '}': tok.kind = ITok::RBrace; return tok;
    case '[': tok.kind = ITok::LBracket; return tok;
    case ']': tok.kind = ITok::RBracket; return tok;
    case '<': tok.kind = ITok::Less; return tok;
    case '>': tok.kind = ITok::Greater; return tok;
    case '?': tok.kind = ITok::Question; return tok;
    case ',': tok.kind = ITok::Comma; return tok;
    case '=': tok.kind = ITok::Equal; return tok;
    case ':': tok.kind = ITok::Colon; return tok;
    case '+': tok.kind = ITok::Plus; return tok;
    case '-':
      if (pos_ < src_.size() && src_[pos_] == '>') {
        advance();
        tok.kind = ITok::Arrow;
      } else {
        tok.kind = ITok::Minus;
      }
      return tok;
    default:
      throw_error(ErrorKind::Syntax,
                  std::string("unexpected character '") + c + "'", tok.loc);
    }
  }

private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      line_start_ = pos_ + 1;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  IToken lex_number(IToken tok) {
    size_t start = pos_;
    bool is_float = false;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '.') {
        is_float = true;
        advance();
      } else if (c == 'e' || c == 'E') {
        is_float = true;
        advance();
        if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-'))
          advance();
      } else {
        break;
      }
    }
    tok.text = std::string(src_.substr(start, pos_ - start));
    if (is_float) {
      tok.kind = ITok::Float;
      tok.real = std::strtod(tok.text.c_str(), nullptr);
    } else {
      tok.kind = ITok::Int;
      tok.integer = std::strtoll(tok.text.c_str(), nullptr, 10);
      tok.real = static_cast<double>(tok.integer);
    }
    return tok;
  }

  std::string_view src_;
  size_t pos_ = 0;
  uint32_t line_ = 1;
  size_t line_start_ = 0;
};

inline std::optional<OpKind> mnemonic_to_kind(const std::string &name) {
  static const std::map<std::string, OpKind> table = [] {
    std::map<std::string, OpKind> t;
    for (int k = 0; k <= static_cast<int>(OpKind::MemLoadBit); ++k)
      t[op_mnemonic(static_cast<OpKind>(k))] = static_cast<OpKind>(k);
    return t;
  }();
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

class IrParser {
public:
  explicit IrParser(std::string_view src) : lexer_(src) { bump(); }

  ModuleIR parse_module() {
    expect_ident("module");
    expect(ITok::LBrace);
    ModuleIR module;
    // Phase 1: collect function signatures so calls resolve in any order.
    collect_signatures(module);
    // Phase 2: parse bodies.
    while (!accept(ITok::RBrace)) parse_function(module);
    if (cur_.kind != ITok::End)
      throw_error(ErrorKind::Syntax, "trailing tokens after module",
                  cur_.loc);
    return module;
  }

private:
  // ---- plumbing ----

  void bump() { cur_ = lexer_.next(); }

  bool accept(ITok k) {
    if (cur_.kind != k) return false;
    bump();
    return true;
  }

  void expect(ITok k) {
    if (cur_.kind != k)
      throw_error(ErrorKind::Syntax, "unexpected token '" + cur_.text + "'",
                  cur_.loc);
    bump();
  }

  bool peek_ident(const char *kw) const {
    return cur_.kind == ITok::Ident && cur_.text == kw;
  }

  void expect_ident(const char *kw) {
    if (!peek_ident(kw))
      throw_error(ErrorKind::Syntax,
                  std::string("expected '") + kw + "'", cur_.loc);
    bump();
  }

  // ---- signature pre-scan ----

  void collect_signatures(ModuleIR &module) {
    IrLexer saved_lexer = lexer_;
    IToken saved_cur = cur_;
    while (cur_.kind == ITok::Ident && cur_.text == "func") {
      bump();
      if (cur_.kind != ITok::FuncRef)
        throw_error(ErrorKind::Syntax, "expected @name after func", cur_.loc);
      FunctionDef f;
      f.name = cur_.text;
      bump();
      expect(ITok::LParen);
      Block entry;
      while (cur_.kind != ITok::RParen) {
        if (!entry.args.empty()) expect(ITok::Comma);
        if (cur_.kind != ITok::ValueRef)
          throw_error(ErrorKind::Syntax, "expected %name parameter", cur_.loc);
        bump();
        expect(ITok::Colon);
        entry.args.push_back(f.new_value(parse_type()));
      }
      expect(ITok::RParen);
      if (accept(ITok::Arrow)) {
        expect(ITok::LParen);
        while (cur_.kind != ITok::RParen) {
          if (!f.result_types.empty()) expect(ITok::Comma);
          f.result_types.push_back(parse_type());
        }
        expect(ITok::RParen);
      }
      f.body.blocks.push_back(std::move(entry));
      if (module.find(f.name))
        throw_error(ErrorKind::Syntax,
                    "function @" + f.name + " defined twice", cur_.loc);
      module.functions.push_back(std::move(f));
      skip_balanced_braces();
    }
    lexer_ = saved_lexer;
    cur_ = saved_cur;
  }

  void skip_balanced_braces() {
    expect(ITok::LBrace);
    int depth = 1;
    while (depth > 0) {
      if (cur_.kind == ITok::End)
        throw_error(ErrorKind::Syntax, "unbalanced braces", cur_.loc);
      if (cur_.kind == ITok::LBrace) ++depth;
      if (cur_.kind == ITok::RBrace) --depth;
      bump();
    }
  }

  // ---- types ----

  Type parse_type() {
    SourceLoc loc = cur_.loc;
    if (cur_.kind != ITok::Ident)
      throw_error(ErrorKind::Syntax, "expected type name", loc);
    std::string name = cur_.text;
    bump();
    if (name == "int") return Type::integer();
    if (name == "bool") return Type::boolean();
    if (name == "angle") return Type::angle();
    if (name == "bitcell") return Type::bitcell();
    if (name == "qubit" || name == "bits") {
      expect(ITok::Less);
      bool dynamic = false;
      uint32_t size = 0;
      if (accept(ITok::Question)) {
        dynamic = true;
      } else if (cur_.kind == ITok::Int) {
        size = static_cast<uint32_t>(cur_.integer);
        bump();
      } else {
        throw_error(ErrorKind::Syntax, "expected size or '?'", cur_.loc);
      }
      expect(ITok::Greater);
      if (!dynamic && size < 1)
        throw_error(ErrorKind::Type, name + "<0> is malformed (size >= 1)",
                    loc);
      if (name == "qubit")
        return dynamic ? Type::qubit_dyn() : Type::qubit(size);
      return dynamic ? Type::bits_dyn() : Type::bits(size);
    }
    throw_error(ErrorKind::Syntax, "unknown type '" + name + "'", loc);
  }

  // ---- functions and bodies ----

  struct SuccFixup {
    Region *region;
    size_t block;
    size_t op;
    std::vector<std::string> labels;
  };

  void parse_function(ModuleIR &module) {
    expect_ident("func");
    if (cur_.kind != ITok::FuncRef)
      throw_error(ErrorKind::Syntax, "expected @name", cur_.loc);
    FunctionDef *func = module.find(cur_.text);
    bump();
    values_.clear();
    block_labels_.clear();
    fixups_.clear();
    // Re-walk the parameter list, binding names to the pre-created args.
    expect(ITok::LParen);
    size_t arg_idx = 0;
    while (cur_.kind != ITok::RParen) {
      if (arg_idx) expect(ITok::Comma);
      std::string name = cur_.text;
      expect(ITok::ValueRef);
      expect(ITok::Colon);
      parse_type();
      define_value(name, func->body.entry().args.at(arg_idx++), cur_.loc);
    }
    expect(ITok::RParen);
    if (accept(ITok::Arrow)) {
      expect(ITok::LParen);
      while (!accept(ITok::RParen))
        if (cur_.kind == ITok::Comma) bump(); else parse_type();
    }
    expect(ITok::LBrace);
    parse_region_body(module, *func, func->body, /*allow_blocks=*/true);
    resolve_fixups();
  }

  void define_value(const std::string &name, ValueId v, SourceLoc loc) {
    if (values_.count(name))
      throw_error(ErrorKind::Syntax, "value %" + name + " redefined", loc);
    values_[name] = v;
  }

  ValueId lookup_value(const std::string &name, SourceLoc loc) {
    auto it = values_.find(name);
    if (it == values_.end())
      throw_error(ErrorKind::Syntax, "use of undefined value %" + name, loc);
    return it->second;
  }

  /// Parses ops until the closing '}'. When allow_blocks is set, ^label:
  /// lines start new blocks (flat CFG form).
  void parse_region_body(ModuleIR &module, FunctionDef &func, Region &region,
                         bool allow_blocks) {
    size_t current = 0;
    while (!accept(ITok::RBrace)) {
      if (cur_.kind == ITok::BlockRef) {
        if (!allow_blocks)
          throw_error(ErrorKind::Syntax, "block label inside scf region",
                      cur_.loc);
        std::string label = cur_.text;
        bump();
        expect(ITok::Colon);
        if (block_labels_.empty() && region.blocks.size() == 1 &&
            region.entry().ops.empty()) {
          block_labels_[label] = 0; // label on the entry block
          continue;
        }
        if (block_labels_.count(label))
          throw_error(ErrorKind::Syntax, "duplicate block ^" + label,
                      cur_.loc);
        region.blocks.emplace_back();
        current = region.blocks.size() - 1;
        block_labels_[label] = current;
        continue;
      }
      parse_op(module, func, region, current, allow_blocks);
    }
  }

  void parse_op(ModuleIR &module, FunctionDef &func, Region &region,
                size_t block_idx, bool in_function_body) {
    SourceLoc loc = cur_.loc;
    std::vector<std::string> result_names;
    if (cur_.kind == ITok::ValueRef) {
      result_names.push_back(cur_.text);
      bump();
      while (accept(ITok::Comma)) {
        if (cur_.kind != ITok::ValueRef)
          throw_error(ErrorKind::Syntax, "expected %name", cur_.loc);
        result_names.push_back(cur_.text);
        bump();
      }
      expect(ITok::Equal);
    }
    if (cur_.kind != ITok::Ident)
      throw_error(ErrorKind::Syntax, "expected operation mnemonic", cur_.loc);
    std::string mnemonic = cur_.text;
    auto kind = mnemonic_to_kind(mnemonic);
    if (!kind)
      throw_error(ErrorKind::Syntax, "unknown operation '" + mnemonic + "'",
                  loc);
    bump();

    Operation op;
    op.kind = *kind;
    op.loc = loc;

    switch (*kind) {
    case OpKind::Call: {
      if (cur_.kind != ITok::FuncRef)
        throw_error(ErrorKind::Syntax, "expected @callee", cur_.loc);
      op.callee = cur_.text;
      bump();
      expect(ITok::LParen);
      while (cur_.kind != ITok::RParen) {
        if (!op.operands.empty()) expect(ITok::Comma);
        op.operands.push_back(parse_operand());
      }
      expect(ITok::RParen);
      finish_plain_op(module, func, region, block_idx, op, result_names, loc);
      return;
    }
    case OpKind::ScfIf: {
      op.operands.push_back(parse_operand());
      auto result_types = parse_result_sig();
      expect(ITok::LBrace);
      Region then_region, else_region;
      then_region.blocks.emplace_back();
      parse_region_body(module, func, then_region, false);
      expect_ident("else");
      expect(ITok::LBrace);
      else_region.blocks.emplace_back();
      parse_region_body(module, func, else_region, false);
      op.regions.push_back(std::move(then_region));
      op.regions.push_back(std::move(else_region));
      attach_results(module, func, region, block_idx, op, result_names,
                     result_types, loc);
      return;
    }
    case OpKind::ScfFor: {
      if (cur_.kind != ITok::ValueRef)
        throw_error(ErrorKind::Syntax, "expected induction %name", cur_.loc);
      std::string iv_name = cur_.text;
      bump();
      expect(ITok::Equal);
      op.operands.push_back(parse_operand()); // lo
      expect_ident("to");
      op.operands.push_back(parse_operand()); // hi
      expect_ident("step");
      op.operands.push_back(parse_operand()); // step
      std::vector<std::string> iter_names;
      if (peek_ident("iter_args")) {
        bump();
        expect(ITok::LParen);
        while (cur_.kind != ITok::RParen) {
          if (!iter_names.empty()) expect(ITok::Comma);
          if (cur_.kind != ITok::ValueRef)
            throw_error(ErrorKind::Syntax, "expected iter %name", cur_.loc);
          iter_names.push_back(cur_.text);
          bump();
          expect(ITok::Equal);
          op.operands.push_back(parse_operand());
        }
        expect(ITok::RParen);
      }
      auto iter_types = parse_result_sig();
      if (iter_types.size() != iter_names.size())
        throw_error(ErrorKind::Type,
                    "scf.for: iter_args count does not match result types",
                    loc);
      Region body;
      body.blocks.emplace_back();
      Block &block = body.entry();
      block.args.push_back(func.new_value(Type::integer()));
      define_value(iv_name, block.args[0], loc);
      for (size_t i = 0; i < iter_names.size(); ++i) {
        block.args.push_back(func.new_value(iter_types[i]));
        define_value(iter_names[i], block.args[i + 1], loc);
      }
      expect(ITok::LBrace);
      parse_region_body(module, func, body, false);
      op.regions.push_back(std::move(body));
      attach_results(module, func, region, block_idx, op, result_names,
                     iter_types, loc);
      return;
    }
    case OpKind::Br: {
      if (!in_function_body)
        throw_error(ErrorKind::Syntax, "branch inside an scf region", loc);
      fixups_.push_back({&region, block_idx, 0, {parse_block_label()}});
      op.successors = {0};
      finish_terminatorish(module, func, region, block_idx, op, result_names,
                           loc);
      return;
    }
    case OpKind::CondBr: {
      if (!in_function_body)
        throw_error(ErrorKind::Syntax, "branch inside an scf region", loc);
      op.operands.push_back(parse_operand());
      expect(ITok::Comma);
      std::string l1 = parse_block_label();
      expect(ITok::Comma);
      std::string l2 = parse_block_label();
      fixups_.push_back({&region, block_idx, 0, {l1, l2}});
      op.successors = {0, 0};
      finish_terminatorish(module, func, region, block_idx, op, result_names,
                           loc);
      return;
    }
    default:
      break;
    }

    // Plain form: operands, attrs, result signature.
    while (cur_.kind == ITok::ValueRef) {
      op.operands.push_back(parse_operand());
      if (!accept(ITok::Comma)) break;
    }
    if (cur_.kind == ITok::LBrace) parse_attrs(op);
    finish_plain_op(module, func, region, block_idx, op, result_names, loc);
  }

  std::string parse_block_label() {
    if (cur_.kind != ITok::BlockRef)
      throw_error(ErrorKind::Syntax, "expected ^block label", cur_.loc);
    std::string label = cur_.text;
    bump();
    return label;
  }

  ValueId parse_operand() {
    if (cur_.kind != ITok::ValueRef)
      throw_error(ErrorKind::Syntax, "expected %value operand", cur_.loc);
    ValueId v = lookup_value(cur_.text, cur_.loc);
    bump();
    return v;
  }

  void parse_attrs(Operation &op) {
    expect(ITok::LBrace);
    while (cur_.kind != ITok::RBrace) {
      if (!op.attrs.empty()) expect(ITok::Comma);
      if (cur_.kind != ITok::Ident)
        throw_error(ErrorKind::Syntax, "expected attribute name", cur_.loc);
      std::string key = cur_.text;
      bump();
      expect(ITok::Equal);
      op.attrs[key] = parse_attr_value();
    }
    expect(ITok::RBrace);
  }

  Attr parse_attr_value() {
    if (cur_.kind == ITok::LBracket) return parse_matrix();
    bool negate = accept(ITok::Minus);
    if (cur_.kind == ITok::Int) {
      int64_t v = cur_.integer;
      bump();
      return negate ? -v : v;
    }
    if (cur_.kind == ITok::Float) {
      double v = cur_.real;
      bump();
      return negate ? -v : v;
    }
    throw_error(ErrorKind::Syntax, "expected attribute value", cur_.loc);
  }

  CMatrix parse_matrix() {
    expect(ITok::LBracket);
    std::vector<std::vector<Complex>> rows;
    while (cur_.kind != ITok::RBracket) {
      if (!rows.empty()) expect(ITok::Comma);
      expect(ITok::LBracket);
      std::vector<Complex> row;
      while (cur_.kind != ITok::RBracket) {
        if (!row.empty()) expect(ITok::Comma);
        row.push_back(parse_complex());
      }
      expect(ITok::RBracket);
      rows.push_back(std::move(row));
    }
    expect(ITok::RBracket);
    size_t nr = rows.size(), nc = nr ? rows[0].size() : 0;
    CMatrix m(nr, nc);
    for (size_t r = 0; r < nr; ++r) {
      if (rows[r].size() != nc)
        throw_error(ErrorKind::Syntax, "ragged matrix rows", cur_.loc);
      for (size_t c = 0; c < nc; ++c) m(r, c) = rows[r][c];
    }
    return m;
  }

  Complex parse_complex() {
    double re = parse_signed_number();
    if (cur_.kind == ITok::Plus || cur_.kind == ITok::Minus) {
      bool neg = cur_.kind == ITok::Minus;
      bump();
      double im = parse_unsigned_number();
      if (!(cur_.kind == ITok::Ident && cur_.text == "i"))
        throw_error(ErrorKind::Syntax, "expected 'i' after imaginary part",
                    cur_.loc);
      bump();
      return {re, neg ? -im : im};
    }
    return {re, 0.0};
  }

  double parse_signed_number() {
    bool neg = accept(ITok::Minus);
    double v = parse_unsigned_number();
    return neg ? -v : v;
  }

  double parse_unsigned_number() {
    if (cur_.kind != ITok::Int && cur_.kind != ITok::Float)
      throw_error(ErrorKind::Syntax, "expected number", cur_.loc);
    double v = cur_.real;
    bump();
    return v;
  }

  std::vector<Type> parse_result_sig() {
    std::vector<Type> types;
    if (!accept(ITok::Colon)) return types;
    if (accept(ITok::LParen)) {
      while (cur_.kind != ITok::RParen) {
        if (!types.empty()) expect(ITok::Comma);
        types.push_back(parse_type());
      }
      expect(ITok::RParen);
      return types;
    }
    types.push_back(parse_type());
    return types;
  }

  void finish_plain_op(ModuleIR &module, FunctionDef &func, Region &region,
                       size_t block_idx, Operation &op,
                       const std::vector<std::string> &result_names,
                       SourceLoc loc) {
    auto result_types = parse_result_sig();
    attach_results(module, func, region, block_idx, op, result_names,
                   result_types, loc);
  }

  void finish_terminatorish(ModuleIR &module, FunctionDef &func,
                            Region &region, size_t block_idx, Operation &op,
                            const std::vector<std::string> &result_names,
                            SourceLoc loc) {
    attach_results(module, func, region, block_idx, op, result_names, {},
                   loc);
    // point the pending fixup at the op just inserted
    fixups_.back().block = block_idx;
    fixups_.back().op = region.blocks[block_idx].ops.size() - 1;
  }

  void attach_results(ModuleIR &module, FunctionDef &func, Region &region,
                      size_t block_idx, Operation &op,
                      const std::vector<std::string> &result_names,
                      const std::vector<Type> &result_types, SourceLoc loc) {
    if (result_names.size() != result_types.size())
      throw_error(ErrorKind::Type,
                  std::string(op_mnemonic(op.kind)) + ": " +
                      std::to_string(result_names.size()) +
                      " result name(s) but " +
                      std::to_string(result_types.size()) +
                      " result type(s)",
                  loc);
    for (size_t i = 0; i < result_names.size(); ++i) {
      ValueId v = func.new_value(result_types[i]);
      define_value(result_names[i], v, loc);
      op.results.push_back(v);
    }
    // Successor counts are fixed up later; skip signature check for branches.
    if (op.kind != OpKind::Br && op.kind != OpKind::CondBr) {
      if (auto err = check_operation(&module, func, op))
        throw_error(ErrorKind::Type, *err, loc);
    }
    region.blocks[block_idx].ops.push_back(std::move(op));
  }

  void resolve_fixups() {
    for (auto &fx : fixups_) {
      Operation &op = fx.region->blocks[fx.block].ops[fx.op];
      for (size_t i = 0; i < fx.labels.size(); ++i) {
        auto it = block_labels_.find(fx.labels[i]);
        if (it == block_labels_.end())
          throw_error(ErrorKind::Syntax,
                      "branch to unknown block ^" + fx.labels[i], op.loc);
        op.successors[i] = static_cast<uint32_t>(it->second);
      }
    }
  }

  IrLexer lexer_;
  IToken cur_;
  std::map<std::string, ValueId> values_;
  std::map<std::string, size_t> block_labels_;
  std::vector<SuccFixup> fixups_;
};

} // namespace detail

/// Parse the textual IR produced by print_ir. Throws Error(Syntax) with a
/// position on grammar violations and Error(Type) on signature mismatches.
inline ModuleIR parse_ir(std::string_view text) {
  detail::IrParser parser(text);
  return parser.parse_module();
}

} // namespace qssa::ir

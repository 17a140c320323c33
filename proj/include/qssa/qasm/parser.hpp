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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qssa/qasm/ast.hpp"
#include "qssa/qasm/stdgates.hpp"
#include "qssa/support/error.hpp"

namespace qssa::qasm {

namespace detail {

enum class Tok {
  Ident, Int, Real, Str,
  LParen, RParen, LBracket, RBracket, LBrace, RBrace,
  Semi, Comma, Arrow, EqEq, Plus, Minus, Star, Slash,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double real = 0.0;
  uint64_t integer = 0;
  SourceLoc loc;
};

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_trivia();
    Token tok;
    tok.loc = loc();
    if (pos_ >= src_.size()) return tok;
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return lex_ident(tok);
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < src_.size() &&
         std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))))
      return lex_number(tok);
    if (c == '"') return lex_string(tok);
    return lex_symbol(tok);
  }

private:
  SourceLoc loc() const { return {line_, static_cast<uint32_t>(pos_ - line_start_ + 1)}; }

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

  Token lex_ident(Token tok) {
    size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
            src_[pos_] == '_'))
      advance();
    tok.kind = Tok::Ident;
    tok.text = std::string(src_.substr(start, pos_ - start));
    return tok;
  }

  Token lex_number(Token tok) {
    size_t start = pos_;
    bool is_real = false;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '.') {
        is_real = true;
        advance();
      } else if (c == 'e' || c == 'E') {
        is_real = true;
        advance();
        if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-'))
          advance();
      } else {
        break;
      }
    }
    tok.text = std::string(src_.substr(start, pos_ - start));
    if (is_real) {
      tok.kind = Tok::Real;
      tok.real = std::strtod(tok.text.c_str(), nullptr);
    } else {
      tok.kind = Tok::Int;
      tok.integer = std::strtoull(tok.text.c_str(), nullptr, 10);
      tok.real = static_cast<double>(tok.integer);
    }
    return tok;
  }

  Token lex_string(Token tok) {
    advance(); // opening quote
    size_t start = pos_;
    while (pos_ < src_.size() && src_[pos_] != '"') advance();
    if (pos_ >= src_.size())
      throw_error(ErrorKind::Syntax, "unterminated string literal", tok.loc);
    tok.kind = Tok::Str;
    tok.text = std::string(src_.substr(start, pos_ - start));
    advance(); // closing quote
    return tok;
  }

  Token lex_symbol(Token tok) {
    char c = src_[pos_];
    advance();
    switch (c) {
    case '(': tok.kind = Tok::LParen; return tok;
    case ')': tok.kind = Tok::RParen; return tok;
    case '[': tok.kind = Tok::LBracket; return tok;
    case ']': tok.kind = Tok::RBracket; return tok;
    case '{': tok.kind = Tok::LBrace; return tok;
    case '}': tok.kind = Tok::RBrace; return tok;
    case ';': tok.kind = Tok::Semi; return tok;
    case ',': tok.kind = Tok::Comma; return tok;
    case '+': tok.kind = Tok::Plus; return tok;
    case '*': tok.kind = Tok::Star; return tok;
    case '/': tok.kind = Tok::Slash; return tok;
    case '-':
      if (pos_ < src_.size() && src_[pos_] == '>') {
        advance();
        tok.kind = Tok::Arrow;
      } else {
        tok.kind = Tok::Minus;
      }
      return tok;
    case '=':
      if (pos_ < src_.size() && src_[pos_] == '=') {
        advance();
        tok.kind = Tok::EqEq;
        return tok;
      }
      break;
    default:
      break;
    }
    throw_error(ErrorKind::Syntax,
                std::string("unexpected character '") + c + "'", tok.loc);
  }

  std::string_view src_;
  size_t pos_ = 0;
  uint32_t line_ = 1;
  size_t line_start_ = 0;
};

} // namespace detail

/// How a gate name resolves at an application site.
struct GateSignature {
  enum class Kind { PrimitiveU, PrimitiveCX, Library, User, Opaque };
  Kind kind;
  uint32_t num_params = 0;
  uint32_t num_qubits = 0;
  const GateDef *def = nullptr; // Library/User
};

namespace detail {

class QasmParser {
public:
  QasmParser(std::string_view src, bool library_mode)
      : lexer_(src), library_mode_(library_mode) {
    cur_ = lexer_.next();
  }

  QasmProgram parse_program() {
    expect_ident("OPENQASM");
    Token version = cur_;
    if (version.kind != Tok::Real || version.text != "2.0") {
      if (version.kind == Tok::Real || version.kind == Tok::Int)
        throw_error(ErrorKind::Unsupported,
                    "unsupported OpenQASM version " + version.text +
                        " (only 2.0)",
                    version.loc);
      throw_error(ErrorKind::Syntax, "expected version number after OPENQASM",
                  version.loc);
    }
    bump();
    expect(Tok::Semi);
    QasmProgram prog;
    prog.version = version.text;
    while (cur_.kind != Tok::End) parse_statement(prog);
    return prog;
  }

  /// Library mode: a bare sequence of gate definitions.
  std::vector<GateDef> parse_gate_library() {
    QasmProgram scratch;
    while (cur_.kind != Tok::End) {
      expect_peek_ident("gate");
      parse_gate_def(scratch);
    }
    std::vector<GateDef> defs;
    for (auto &st : scratch.statements) defs.push_back(std::get<GateDef>(st));
    return defs;
  }

  static const std::vector<GateDef> &builtin_library() {
    static const std::vector<GateDef> lib = [] {
      QasmParser p(qelib1_source(), /*library_mode=*/true);
      return p.parse_gate_library();
    }();
    return lib;
  }

private:
  struct RegInfo {
    bool quantum = true;
    uint32_t size = 0;
  };

  // ---- token plumbing ----

  void bump() { cur_ = lexer_.next(); }

  void expect(Tok kind) {
    if (cur_.kind != kind)
      throw_error(ErrorKind::Syntax,
                  "unexpected token '" + describe(cur_) + "'", cur_.loc);
    bump();
  }

  bool accept(Tok kind) {
    if (cur_.kind != kind) return false;
    bump();
    return true;
  }

  bool peek_ident(const char *kw) const {
    return cur_.kind == Tok::Ident && cur_.text == kw;
  }

  void expect_peek_ident(const char *kw) {
    if (!peek_ident(kw))
      throw_error(ErrorKind::Syntax,
                  std::string("expected '") + kw + "', got '" +
                      describe(cur_) + "'",
                  cur_.loc);
  }

  void expect_ident(const char *kw) {
    expect_peek_ident(kw);
    bump();
  }

  std::string expect_name() {
    if (cur_.kind != Tok::Ident)
      throw_error(ErrorKind::Syntax,
                  "expected identifier, got '" + describe(cur_) + "'",
                  cur_.loc);
    std::string name = cur_.text;
    bump();
    return name;
  }

  uint32_t expect_size() {
    if (cur_.kind != Tok::Int)
      throw_error(ErrorKind::Syntax, "expected integer", cur_.loc);
    uint64_t v = cur_.integer;
    bump();
    return static_cast<uint32_t>(v);
  }

  static std::string describe(const Token &t) {
    switch (t.kind) {
    case Tok::End: return "<end of input>";
    case Tok::Str: return "\"" + t.text + "\"";
    case Tok::Ident:
    case Tok::Int:
    case Tok::Real: return t.text;
    case Tok::LParen: return "(";
    case Tok::RParen: return ")";
    case Tok::LBracket: return "[";
    case Tok::RBracket: return "]";
    case Tok::LBrace: return "{";
    case Tok::RBrace: return "}";
    case Tok::Semi: return ";";
    case Tok::Comma: return ",";
    case Tok::Arrow: return "->";
    case Tok::EqEq: return "==";
    case Tok::Plus: return "+";
    case Tok::Minus: return "-";
    case Tok::Star: return "*";
    case Tok::Slash: return "/";
    }
    return "?";
  }

  // ---- statements ----

  void parse_statement(QasmProgram &prog) {
    SourceLoc loc = cur_.loc;
    if (peek_ident("include")) {
      bump();
      if (cur_.kind != Tok::Str)
        throw_error(ErrorKind::Syntax, "expected include path string",
                    cur_.loc);
      if (cur_.text != "qelib1.inc")
        throw_error(ErrorKind::Unsupported,
                    "only \"qelib1.inc\" can be included, got \"" + cur_.text +
                        "\"",
                    cur_.loc);
      bump();
      expect(Tok::Semi);
      return; // the standard library is always available; nothing to record
    }
    if (peek_ident("qreg") || peek_ident("creg")) {
      bool quantum = cur_.text == "qreg";
      bump();
      std::string name = expect_name();
      expect(Tok::LBracket);
      uint32_t size = expect_size();
      expect(Tok::RBracket);
      expect(Tok::Semi);
      if (size < 1)
        throw_error(ErrorKind::Resolution,
                    "register '" + name + "' must have size >= 1", loc);
      if (regs_.count(name))
        throw_error(ErrorKind::Resolution,
                    "register '" + name + "' already declared", loc);
      regs_[name] = {quantum, size};
      if (quantum)
        prog.statements.push_back(QregDecl{name, size});
      else
        prog.statements.push_back(CregDecl{name, size});
      return;
    }
    if (peek_ident("gate")) {
      parse_gate_def(prog);
      return;
    }
    if (peek_ident("opaque")) {
      bump();
      OpaqueDecl decl;
      decl.name = expect_name();
      if (accept(Tok::LParen)) {
        if (cur_.kind != Tok::RParen)
          do decl.params.push_back(expect_name());
          while (accept(Tok::Comma));
        expect(Tok::RParen);
      }
      do decl.qargs.push_back(expect_name());
      while (accept(Tok::Comma));
      expect(Tok::Semi);
      declare_gate(decl.name,
                   {GateSignature::Kind::Opaque,
                    static_cast<uint32_t>(decl.params.size()),
                    static_cast<uint32_t>(decl.qargs.size()), nullptr},
                   loc);
      prog.statements.push_back(std::move(decl));
      return;
    }
    if (peek_ident("if")) {
      bump();
      expect(Tok::LParen);
      std::string creg = expect_name();
      const RegInfo &info = lookup_reg(creg, /*quantum=*/false, loc);
      if (info.size > 62)
        throw_error(ErrorKind::Unsupported,
                    "creg '" + creg + "' too wide for if-comparison (" +
                        std::to_string(info.size) + " > 62 bits)",
                    loc);
      expect(Tok::EqEq);
      if (cur_.kind != Tok::Int)
        throw_error(ErrorKind::Syntax, "expected integer after '=='",
                    cur_.loc);
      uint64_t value = cur_.integer;
      bump();
      expect(Tok::RParen);
      std::vector<QasmStmt> inner;
      parse_quantum_op(inner, /*allow_barrier=*/false);
      for (auto &st : inner) {
        IfStmt out;
        out.creg = creg;
        out.value = value;
        out.loc = loc;
        if (auto *g = std::get_if<GateApply>(&st))
          out.op = std::move(*g);
        else if (auto *m = std::get_if<MeasureStmt>(&st))
          out.op = std::move(*m);
        else if (auto *r = std::get_if<ResetStmt>(&st))
          out.op = std::move(*r);
        else
          throw_error(ErrorKind::Syntax, "unsupported statement under 'if'",
                      loc);
        prog.statements.push_back(std::move(out));
      }
      return;
    }
    parse_quantum_op(prog.statements, /*allow_barrier=*/true);
  }

  void parse_quantum_op(std::vector<QasmStmt> &out, bool allow_barrier) {
    SourceLoc loc = cur_.loc;
    if (peek_ident("measure")) {
      bump();
      auto q = parse_ref();
      expect(Tok::Arrow);
      auto c = parse_ref();
      expect(Tok::Semi);
      emit_measure(out, q, c, loc);
      return;
    }
    if (peek_ident("reset")) {
      bump();
      auto q = parse_ref();
      expect(Tok::Semi);
      for (auto &ref : expand_qubit_ref(q, loc))
        out.push_back(ResetStmt{ref, loc});
      return;
    }
    if (peek_ident("barrier")) {
      if (!allow_barrier)
        throw_error(ErrorKind::Syntax, "barrier not allowed here", loc);
      bump();
      BarrierStmt st;
      st.loc = loc;
      do {
        auto r = parse_ref();
        for (auto &ref : expand_qubit_ref(r, loc)) st.qubits.push_back(ref);
      } while (accept(Tok::Comma));
      expect(Tok::Semi);
      check_distinct(st.qubits, loc);
      out.push_back(std::move(st));
      return;
    }
    parse_gate_apply(out, loc);
  }

  // ---- gate definitions ----

  void parse_gate_def(QasmProgram &prog) {
    SourceLoc loc = cur_.loc;
    expect_ident("gate");
    GateDef def;
    def.name = expect_name();
    if (accept(Tok::LParen)) {
      if (cur_.kind != Tok::RParen)
        do def.params.push_back(expect_name());
        while (accept(Tok::Comma));
      expect(Tok::RParen);
    }
    do def.qargs.push_back(expect_name());
    while (accept(Tok::Comma));
    expect(Tok::LBrace);
    while (!accept(Tok::RBrace)) parse_gate_body_stmt(def);
    declare_gate(def.name,
                 {GateSignature::Kind::User,
                  static_cast<uint32_t>(def.params.size()),
                  static_cast<uint32_t>(def.qargs.size()), nullptr},
                 loc);
    prog.statements.push_back(std::move(def));
  }

  void parse_gate_body_stmt(GateDef &def) {
    SourceLoc loc = cur_.loc;
    GateBodyStmt st;
    if (peek_ident("barrier")) {
      bump();
      st.is_barrier = true;
      do st.args.push_back(resolve_formal(def, expect_name(), loc));
      while (accept(Tok::Comma));
      expect(Tok::Semi);
      def.body.push_back(std::move(st));
      return;
    }
    st.gate = expect_name();
    GateSignature sig = resolve_gate(st.gate, loc);
    if (accept(Tok::LParen)) {
      if (cur_.kind != Tok::RParen)
        do st.params.push_back(parse_expr(&def));
        while (accept(Tok::Comma));
      expect(Tok::RParen);
    }
    do st.args.push_back(resolve_formal(def, expect_name(), loc));
    while (accept(Tok::Comma));
    expect(Tok::Semi);
    if (st.params.size() != sig.num_params ||
        st.args.size() != sig.num_qubits)
      throw_error(ErrorKind::Resolution,
                  "gate '" + st.gate + "' expects " +
                      std::to_string(sig.num_params) + " parameter(s) and " +
                      std::to_string(sig.num_qubits) + " qubit(s)",
                  loc);
    check_distinct_ints(st.args, st.gate, loc);
    def.body.push_back(std::move(st));
  }

  uint32_t resolve_formal(const GateDef &def, const std::string &name,
                          SourceLoc loc) {
    for (uint32_t i = 0; i < def.qargs.size(); ++i)
      if (def.qargs[i] == name) return i;
    throw_error(ErrorKind::Resolution,
                "unknown qubit argument '" + name + "' in gate '" + def.name +
                    "'",
                loc);
  }

  // ---- gate application ----

  struct RawRef {
    std::string reg;
    std::optional<uint32_t> index;
    SourceLoc loc;
  };

  RawRef parse_ref() {
    RawRef r;
    r.loc = cur_.loc;
    r.reg = expect_name();
    if (accept(Tok::LBracket)) {
      r.index = expect_size();
      expect(Tok::RBracket);
    }
    return r;
  }

  void parse_gate_apply(std::vector<QasmStmt> &out, SourceLoc loc) {
    std::string name = expect_name();
    GateSignature sig = resolve_gate(name, loc);
    std::vector<double> params;
    if (accept(Tok::LParen)) {
      if (cur_.kind != Tok::RParen)
        do params.push_back(parse_expr(nullptr)->eval({}));
        while (accept(Tok::Comma));
      expect(Tok::RParen);
    }
    std::vector<RawRef> args;
    do args.push_back(parse_ref());
    while (accept(Tok::Comma));
    expect(Tok::Semi);
    if (params.size() != sig.num_params || args.size() != sig.num_qubits)
      throw_error(ErrorKind::Resolution,
                  "gate '" + name + "' expects " +
                      std::to_string(sig.num_params) + " parameter(s) and " +
                      std::to_string(sig.num_qubits) + " qubit(s), got " +
                      std::to_string(params.size()) + " and " +
                      std::to_string(args.size()),
                  loc);

    // OpenQASM broadcast: whole-register arguments expand element-wise; all
    // register arguments must have the same length.
    uint32_t n = 1;
    bool broadcast = false;
    for (auto &a : args) {
      const RegInfo &info = lookup_reg(a.reg, /*quantum=*/true, a.loc);
      if (a.index) {
        if (*a.index >= info.size)
          throw_error(ErrorKind::Resolution,
                      "index " + std::to_string(*a.index) +
                          " out of bounds for '" + a.reg + "[" +
                          std::to_string(info.size) + "]'",
                      a.loc);
      } else {
        if (broadcast && info.size != n)
          throw_error(ErrorKind::Resolution,
                      "broadcast register sizes differ in '" + name + "'",
                      a.loc);
        n = info.size;
        broadcast = true;
      }
    }
    for (uint32_t k = 0; k < n; ++k) {
      GateApply ap;
      ap.name = name;
      ap.params = params;
      ap.loc = loc;
      for (auto &a : args)
        ap.qubits.push_back({a.reg, a.index ? *a.index : k});
      check_distinct(ap.qubits, loc);
      out.push_back(std::move(ap));
    }
  }

  void emit_measure(std::vector<QasmStmt> &out, RawRef q, RawRef c,
                    SourceLoc loc) {
    const RegInfo &qi = lookup_reg(q.reg, /*quantum=*/true, q.loc);
    const RegInfo &ci = lookup_reg(c.reg, /*quantum=*/false, c.loc);
    auto check_index = [&](const RawRef &r, const RegInfo &info) {
      if (r.index && *r.index >= info.size)
        throw_error(ErrorKind::Resolution,
                    "index " + std::to_string(*r.index) +
                        " out of bounds for '" + r.reg + "'",
                    r.loc);
    };
    check_index(q, qi);
    check_index(c, ci);
    // Whole registers of size 1 coerce to their only element.
    auto elem = [&](RawRef &r, const RegInfo &info) {
      if (!r.index && info.size == 1) r.index = 0;
    };
    elem(q, qi);
    elem(c, ci);
    if (q.index && c.index) {
      out.push_back(MeasureStmt{{q.reg, *q.index}, {c.reg, *c.index}, loc});
      return;
    }
    if (!q.index && !c.index) {
      if (qi.size != ci.size)
        throw_error(ErrorKind::Resolution,
                    "measure register sizes differ: '" + q.reg + "[" +
                        std::to_string(qi.size) + "]' vs '" + c.reg + "[" +
                        std::to_string(ci.size) + "]'",
                    loc);
      for (uint32_t k = 0; k < qi.size; ++k)
        out.push_back(MeasureStmt{{q.reg, k}, {c.reg, k}, loc});
      return;
    }
    throw_error(ErrorKind::Resolution,
                "measure mixes a register with an element", loc);
  }

  std::vector<QubitRef> expand_qubit_ref(const RawRef &r, SourceLoc loc) {
    const RegInfo &info = lookup_reg(r.reg, /*quantum=*/true, r.loc);
    if (r.index) {
      if (*r.index >= info.size)
        throw_error(ErrorKind::Resolution,
                    "index " + std::to_string(*r.index) +
                        " out of bounds for '" + r.reg + "'",
                    loc);
      return {{r.reg, *r.index}};
    }
    std::vector<QubitRef> refs;
    for (uint32_t k = 0; k < info.size; ++k) refs.push_back({r.reg, k});
    return refs;
  }

  void check_distinct(const std::vector<QubitRef> &qs, SourceLoc loc) {
    for (size_t i = 0; i < qs.size(); ++i)
      for (size_t j = i + 1; j < qs.size(); ++j)
        if (qs[i] == qs[j])
          throw_error(ErrorKind::Resolution,
                      "duplicate qubit argument '" + qs[i].reg + "[" +
                          std::to_string(qs[i].index) + "]'",
                      loc);
  }

  void check_distinct_ints(const std::vector<uint32_t> &v,
                           const std::string &gate, SourceLoc loc) {
    for (size_t i = 0; i < v.size(); ++i)
      for (size_t j = i + 1; j < v.size(); ++j)
        if (v[i] == v[j])
          throw_error(ErrorKind::Resolution,
                      "duplicate qubit argument in application of '" + gate +
                          "'",
                      loc);
  }

  // ---- expressions ----

  ParamExprPtr parse_expr(const GateDef *scope) {
    ParamExprPtr lhs = parse_term(scope);
    while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
      auto k = cur_.kind == Tok::Plus ? ParamExpr::Kind::Add
                                      : ParamExpr::Kind::Sub;
      bump();
      lhs = ParamExpr::binary(k, lhs, parse_term(scope));
    }
    return lhs;
  }

  ParamExprPtr parse_term(const GateDef *scope) {
    ParamExprPtr lhs = parse_factor(scope);
    while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
      auto k = cur_.kind == Tok::Star ? ParamExpr::Kind::Mul
                                      : ParamExpr::Kind::Div;
      bump();
      lhs = ParamExpr::binary(k, lhs, parse_factor(scope));
    }
    return lhs;
  }

  ParamExprPtr parse_factor(const GateDef *scope) {
    if (accept(Tok::Minus)) return ParamExpr::neg(parse_factor(scope));
    if (accept(Tok::LParen)) {
      auto inner = parse_expr(scope);
      expect(Tok::RParen);
      return inner;
    }
    if (cur_.kind == Tok::Real || cur_.kind == Tok::Int) {
      double v = cur_.real;
      bump();
      return ParamExpr::number(v);
    }
    if (cur_.kind == Tok::Ident) {
      if (cur_.text == "pi") {
        bump();
        return ParamExpr::pi();
      }
      if (scope) {
        for (uint32_t i = 0; i < scope->params.size(); ++i)
          if (scope->params[i] == cur_.text) {
            bump();
            return ParamExpr::param_ref(i);
          }
      }
      throw_error(ErrorKind::Resolution,
                  "unknown name '" + cur_.text + "' in angle expression",
                  cur_.loc);
    }
    throw_error(ErrorKind::Syntax,
                "expected angle expression, got '" + describe(cur_) + "'",
                cur_.loc);
  }

  // ---- resolution ----

  const RegInfo &lookup_reg(const std::string &name, bool quantum,
                            SourceLoc loc) {
    auto it = regs_.find(name);
    if (it == regs_.end())
      throw_error(ErrorKind::Resolution,
                  std::string(quantum ? "qreg" : "creg") + " '" + name +
                      "' undeclared",
                  loc);
    if (it->second.quantum != quantum)
      throw_error(ErrorKind::Resolution,
                  "'" + name + "' is a " +
                      (it->second.quantum ? "quantum" : "classical") +
                      " register",
                  loc);
    return it->second;
  }

  void declare_gate(const std::string &name, GateSignature sig,
                    SourceLoc loc) {
    if (name == "U" || name == "CX" || user_gates_.count(name) ||
        (!library_mode_ && find_library_gate(name)))
      throw_error(ErrorKind::Resolution, "gate '" + name + "' already defined",
                  loc);
    user_gates_[name] = sig;
  }

  static const GateDef *find_library_gate(const std::string &name) {
    for (const auto &g : QasmParser::builtin_library())
      if (g.name == name) return &g;
    return nullptr;
  }

  GateSignature resolve_gate(const std::string &name, SourceLoc loc) {
    if (name == "U") return {GateSignature::Kind::PrimitiveU, 3, 1, nullptr};
    if (name == "CX") return {GateSignature::Kind::PrimitiveCX, 0, 2, nullptr};
    auto it = user_gates_.find(name);
    if (it != user_gates_.end()) return it->second;
    if (!library_mode_)
      if (const GateDef *def = find_library_gate(name))
        return {GateSignature::Kind::Library,
                static_cast<uint32_t>(def->params.size()),
                static_cast<uint32_t>(def->qargs.size()), def};
    throw_error(ErrorKind::Resolution, "gate '" + name + "' undeclared", loc);
  }

  Lexer lexer_;
  Token cur_;
  bool library_mode_;
  std::map<std::string, RegInfo> regs_;
  std::map<std::string, GateSignature> user_gates_;
};

} // namespace detail

/// Parse OpenQASM 2.0 source text. Throws Error on syntax, resolution, or
/// unsupported-construct failures; every error carries line and column.
inline QasmProgram parse_qasm(std::string_view source) {
  detail::QasmParser parser(source, /*library_mode=*/false);
  return parser.parse_program();
}

/// The compiled-in qelib1 definitions (parsed once, cached).
inline const std::vector<GateDef> &builtin_gates() {
  return detail::QasmParser::builtin_library();
}

inline const GateDef *find_builtin_gate(const std::string &name) {
  for (const auto &g : builtin_gates())
    if (g.name == name) return &g;
  return nullptr;
}

/// Resolve a gate name against user definitions from `program`, then the
/// built-in library, then the U/CX primitives.
inline std::optional<GateSignature>
resolve_gate_in(const QasmProgram &program, const std::string &name) {
  if (name == "U")
    return GateSignature{GateSignature::Kind::PrimitiveU, 3, 1, nullptr};
  if (name == "CX")
    return GateSignature{GateSignature::Kind::PrimitiveCX, 0, 2, nullptr};
  for (const auto &st : program.statements) {
    if (const auto *def = std::get_if<GateDef>(&st))
      if (def->name == name)
        return GateSignature{GateSignature::Kind::User,
                             static_cast<uint32_t>(def->params.size()),
                             static_cast<uint32_t>(def->qargs.size()), def};
    if (const auto *op = std::get_if<OpaqueDecl>(&st))
      if (op->name == name)
        return GateSignature{GateSignature::Kind::Opaque,
                             static_cast<uint32_t>(op->params.size()),
                             static_cast<uint32_t>(op->qargs.size()), nullptr};
  }
  if (const GateDef *def = find_builtin_gate(name))
    return GateSignature{GateSignature::Kind::Library,
                         static_cast<uint32_t>(def->params.size()),
                         static_cast<uint32_t>(def->qargs.size()), def};
  return std::nullopt;
}

} // namespace qssa::qasm

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

#include <catch2/catch_amalgamated.hpp>

#include "../support/helpers.hpp"

using namespace qssa;
using namespace qssa::qasm;

namespace {

ErrorKind kind_of(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::Syntax;
}

} // namespace

TEST_CASE("parse: minimal cx program") {
  auto p = parse_qasm("OPENQASM 2.0; qreg q[2]; cx q[0],q[1];");
  REQUIRE(p.version == "2.0");
  REQUIRE(p.statements.size() == 2);
  auto &decl = std::get<QregDecl>(p.statements[0]);
  CHECK(decl.name == "q");
  CHECK(decl.size == 2);
  auto &apply = std::get<GateApply>(p.statements[1]);
  CHECK(apply.name == "cx");
  CHECK(apply.qubits == std::vector<QubitRef>{{"q", 0}, {"q", 1}});
}

TEST_CASE("parse: empty program") {
  auto p = parse_qasm("OPENQASM 2.0;");
  CHECK(p.statements.empty());
}

TEST_CASE("parse: undeclared creg in measure is a resolution error") {
  CHECK(kind_of([] {
          parse_qasm("OPENQASM 2.0; qreg q[1]; measure q[0] -> c[0];");
        }) == ErrorKind::Resolution);
}

TEST_CASE("parse: errors carry positions") {
  try {
    parse_qasm("OPENQASM 2.0;\nqreg q[1];\nh r[0];\n");
    FAIL("expected error");
  } catch (const Error &e) {
    CHECK(e.loc().line == 3);
    CHECK(e.loc().col >= 1);
  }
}

TEST_CASE("parse: resolution rules") {
  CHECK(kind_of([] { parse_qasm("OPENQASM 2.0; qreg q[1]; h q[1];"); }) ==
        ErrorKind::Resolution); // index out of bounds
  CHECK(kind_of([] { parse_qasm("OPENQASM 2.0; qreg q[2]; h q[0],q[1];"); }) ==
        ErrorKind::Resolution); // arity
  CHECK(kind_of([] { parse_qasm("OPENQASM 2.0; qreg q[2]; cx q[0],q[0];"); }) ==
        ErrorKind::Resolution); // duplicate qubit argument
  CHECK(kind_of([] { parse_qasm("OPENQASM 2.0; qreg q[1]; qreg q[2];"); }) ==
        ErrorKind::Resolution); // register redeclared
  CHECK(kind_of([] { parse_qasm("OPENQASM 2.0; qreg q[0];"); }) ==
        ErrorKind::Resolution); // size >= 1
  CHECK(kind_of([] { parse_qasm("OPENQASM 2.0; qreg q[1]; zz q[0];"); }) ==
        ErrorKind::Resolution); // unknown gate
}

TEST_CASE("parse: unsupported constructs") {
  CHECK(kind_of([] { parse_qasm("OPENQASM 3.0; qubit q;"); }) ==
        ErrorKind::Unsupported);
  CHECK(kind_of([] { parse_qasm("OPENQASM 2.0; include \"other.inc\";"); }) ==
        ErrorKind::Unsupported);
}

TEST_CASE("parse: opaque declarations are accepted") {
  auto p = parse_qasm(
      "OPENQASM 2.0; opaque magic(a,b) x,y; qreg q[2]; magic(1,2) q[0],q[1];");
  CHECK(std::holds_alternative<OpaqueDecl>(p.statements[0]));
  CHECK(std::holds_alternative<GateApply>(p.statements[2]));
}

TEST_CASE("parse: whole-register broadcast desugars") {
  auto p = parse_qasm("OPENQASM 2.0; qreg q[3]; h q;");
  REQUIRE(p.statements.size() == 4);
  for (int i = 1; i <= 3; ++i) {
    auto &g = std::get<GateApply>(p.statements[i]);
    CHECK(g.qubits[0].index == uint32_t(i - 1));
  }

  auto p2 = parse_qasm("OPENQASM 2.0; qreg a[2]; qreg b[2]; cx a,b;");
  REQUIRE(p2.statements.size() == 4);
  auto &g0 = std::get<GateApply>(p2.statements[2]);
  CHECK(g0.qubits == std::vector<QubitRef>{{"a", 0}, {"b", 0}});

  auto p3 = parse_qasm("OPENQASM 2.0; qreg q[2]; creg c[2]; measure q -> c;");
  REQUIRE(p3.statements.size() == 4);
  CHECK(std::get<MeasureStmt>(p3.statements[3]).bit.index == 1);

  CHECK(kind_of([] {
          parse_qasm("OPENQASM 2.0; qreg a[2]; qreg b[3]; cx a,b;");
        }) == ErrorKind::Resolution); // size mismatch
}

TEST_CASE("parse: angle expressions evaluate at parse time") {
  auto p = parse_qasm(
      "OPENQASM 2.0; qreg q[1]; rz(pi/2) q[0]; rz(-pi) q[0]; "
      "rz(2*(1+0.5)) q[0]; rz(3e-1) q[0];");
  auto angle = [&](int i) {
    return std::get<GateApply>(p.statements[i]).params[0];
  };
  CHECK(angle(1) == Catch::Approx(kPi / 2));
  CHECK(angle(2) == Catch::Approx(-kPi));
  CHECK(angle(3) == Catch::Approx(3.0));
  CHECK(angle(4) == Catch::Approx(0.3));
}

TEST_CASE("parse: if statement forms") {
  auto p = parse_qasm("OPENQASM 2.0; qreg q[1]; creg c[2]; if(c==3) x q[0];");
  auto &st = std::get<IfStmt>(p.statements[2]);
  CHECK(st.creg == "c");
  CHECK(st.value == 3);
  CHECK(std::get<GateApply>(st.op).name == "x");
}

TEST_CASE("print: canonical spec example") {
  QasmProgram p;
  p.statements.push_back(QregDecl{"q", 2});
  GateApply cx;
  cx.name = "cx";
  cx.qubits = {{"q", 0}, {"q", 1}};
  p.statements.push_back(cx);
  CHECK(print_qasm(p) ==
        "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\ncx q[0],q[1];\n");
}

TEST_CASE("print: empty program is header lines only") {
  CHECK(print_qasm(QasmProgram{}) ==
        "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
}

TEST_CASE("print/parse: round trip is exact over the corpus") {
  for (const auto &path : test::corpus_files()) {
    INFO(path.string());
    auto p1 = parse_qasm(test::read_text(path));
    auto p2 = parse_qasm(print_qasm(p1));
    CHECK(p1 == p2);
    // canonical text is a fixpoint
    CHECK(print_qasm(p1) == print_qasm(p2));
  }
}

TEST_CASE("print/parse: gate definitions round trip") {
  auto p1 = parse_qasm(
      "OPENQASM 2.0; gate foo(a,b) x,y { rz(a+b/2) x; cx x,y; barrier x,y; "
      "u3(-a,2*b,pi/4) y; } qreg q[2]; foo(0.25,pi) q[0],q[1];");
  auto p2 = parse_qasm(print_qasm(p1));
  CHECK(p1 == p2);
}

TEST_CASE("stdlib: qelib1 gates resolve without an include line") {
  auto p = parse_qasm("OPENQASM 2.0; qreg q[1]; h q[0]; tdg q[0];");
  CHECK(p.statements.size() == 3);
  CHECK(find_builtin_gate("ccx") != nullptr);
  CHECK(find_builtin_gate("cu3") != nullptr);
  CHECK(find_builtin_gate("nope") == nullptr);
}

TEST_CASE("stdlib: expansion is purely syntactic and hits primitives") {
  QasmProgram empty;
  auto prims = expand_gate(empty, "cz", {}, 2);
  REQUIRE(prims.size() == 3); // h, cx, h
  CHECK(prims[0].kind == ir::OpKind::H);
  CHECK(prims[1].kind == ir::OpKind::CNOT);
  CHECK(prims[2].kind == ir::OpKind::H);
  CHECK(prims[0].args == std::vector<uint32_t>{1});
  CHECK(prims[1].args == std::vector<uint32_t>{0, 1});

  auto u2p = expand_gate(empty, "u2", {0.25, 0.5}, 1);
  REQUIRE(u2p.size() == 1);
  CHECK(u2p[0].kind == ir::OpKind::U);
  CHECK(u2p[0].angles[0] == Catch::Approx(kPi / 2));
  CHECK(u2p[0].angles[1] == 0.25);
  CHECK(u2p[0].angles[2] == 0.5);
}

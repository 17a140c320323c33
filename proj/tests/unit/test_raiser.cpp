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
using namespace qssa::ir;

TEST_CASE("raise: the Bell-pair program has the expected shape") {
  auto m = test::qasm_to_module(
      "OPENQASM 2.0;\nqreg q[2];\ncreg c[2];\nh q[0];\ncx q[0],q[1];\n"
      "measure q[0] -> c[0];\nmeasure q[1] -> c[1];\n");
  CHECK(test::count_kind(m, OpKind::Alloc) == 2);
  CHECK(test::count_kind(m, OpKind::MemAllocBit) == 2);
  CHECK(test::count_kind(m, OpKind::H) == 1);
  CHECK(test::count_kind(m, OpKind::CNOT) == 1);
  CHECK(test::count_kind(m, OpKind::Measure) == 2);
  CHECK(test::count_kind(m, OpKind::MemStoreBit) == 2);
  CHECK(verify::verify_module(m).empty());
}

TEST_CASE("raise: declarations only produce allocs and cells, no gates") {
  auto m = test::qasm_to_module("OPENQASM 2.0;\nqreg q[3];\ncreg c[2];\n");
  CHECK(test::count_kind(m, OpKind::Alloc) == 3);
  CHECK(test::count_kind(m, OpKind::MemAllocBit) == 2);
  CHECK(test::count_gates(m) == 0);
  CHECK(verify::verify_module(m).empty());
}

TEST_CASE("raise: gates chain through the latest-qubit map") {
  auto m = test::qasm_to_module("OPENQASM 2.0;\nqreg q[1];\nx q[0];\nx q[0];\n");
  const auto &ops = m.functions.front().body.entry().ops;
  REQUIRE(ops.size() == 4); // alloc, x, x, return
  CHECK(ops[1].kind == OpKind::X);
  CHECK(ops[2].kind == OpKind::X);
  // the second X consumes the first X's result, not the alloc
  CHECK(ops[2].operands[0] == ops[1].results[0]);
  CHECK(ops[1].operands[0] == ops[0].results[0]);
}

TEST_CASE("raise: user gate bodies are inlined in application order") {
  auto m = test::qasm_to_module(
      "OPENQASM 2.0;\ngate g a,b { cx a,b; h a; }\nqreg q[2];\n"
      "g q[1],q[0];\n");
  const auto &ops = m.functions.front().body.entry().ops;
  // alloc q0, alloc q1, CNOT(q1,q0), H(cnot result 0), return
  REQUIRE(ops.size() == 5);
  CHECK(ops[2].kind == OpKind::CNOT);
  CHECK(ops[2].operands[0] == ops[1].results[0]); // control is q[1]
  CHECK(ops[2].operands[1] == ops[0].results[0]); // target is q[0]
  CHECK(ops[3].kind == OpKind::H);
  CHECK(ops[3].operands[0] == ops[2].results[0]);
}

TEST_CASE("raise: stdlib mappings bottom out at primitives") {
  auto m = test::qasm_to_module(
      "OPENQASM 2.0;\nqreg q[3];\nu3(0.1,0.2,0.3) q[0];\nu1(0.5) q[0];\n"
      "cz q[0],q[1];\nccx q[0],q[1],q[2];\n");
  walk_ops(m, [&](const Operation &op) {
    if (is_gate(op.kind))
      CHECK((is_single_qubit_gate(op.kind) || op.kind == OpKind::CNOT));
  });
  // u1(l) becomes the diagonal U(0,0,l)
  auto m2 = test::qasm_to_module("OPENQASM 2.0;\nqreg q[1];\nu1(0.5) q[0];\n");
  const auto &u = m2.functions.front().body.entry().ops[1];
  REQUIRE(u.kind == OpKind::U);
  CHECK(u.float_attr("theta") == 0.0);
  CHECK(u.float_attr("phi") == 0.0);
  CHECK(u.float_attr("lambda") == 0.5);
}

TEST_CASE("raise: opaque gate applications are rejected") {
  auto program = qasm::parse_qasm(
      "OPENQASM 2.0;\nopaque mystery a;\nqreg q[1];\nmystery q[0];\n");
  CHECK_THROWS_MATCHES(raising::raise(program), Error,
                       Catch::Matchers::Predicate<Error>([](const Error &e) {
                         return e.kind() == ErrorKind::Unsupported;
                       }));
}

TEST_CASE("raise: if-statements load bits, compare, and branch") {
  auto m = test::qasm_to_module(
      "OPENQASM 2.0;\nqreg q[1];\ncreg c[2];\nif(c==2) x q[0];\n");
  CHECK(test::count_kind(m, OpKind::MemLoadBit) == 2);
  CHECK(test::count_kind(m, OpKind::CmpEq) == 1);
  CHECK(test::count_kind(m, OpKind::MulI) == 1); // bit 1 weighted by 2
  CHECK(test::count_kind(m, OpKind::ScfIf) == 1);
  CHECK(verify::verify_module(m).empty());

  // the else region passes the untouched qubit through
  const ir::Operation *ifop = nullptr;
  walk_ops(m, [&](const Operation &op) {
    if (op.kind == OpKind::ScfIf) ifop = &op;
  });
  REQUIRE(ifop);
  const auto &else_ops = ifop->regions[1].entry().ops;
  REQUIRE(else_ops.size() == 1);
  CHECK(else_ops[0].kind == OpKind::Yield);
}

TEST_CASE("raise: conditional measure stores inside the branch") {
  auto m = test::qasm_to_module(
      "OPENQASM 2.0;\nqreg q[1];\ncreg c[1];\ncreg d[1];\n"
      "h q[0];\nmeasure q[0] -> c[0];\nif(c==1) measure q[0] -> d[0];\n");
  CHECK(verify::verify_module(m).empty());
  const ir::Operation *ifop = nullptr;
  walk_ops(m, [&](const Operation &op) {
    if (op.kind == OpKind::ScfIf) ifop = &op;
  });
  REQUIRE(ifop);
  const auto &then_ops = ifop->regions[0].entry().ops;
  REQUIRE(then_ops.size() == 3); // measure, store, yield
  CHECK(then_ops[0].kind == OpKind::Measure);
  CHECK(then_ops[1].kind == OpKind::MemStoreBit);
}

TEST_CASE("raise: barriers update the map and fence later uses") {
  auto m = test::qasm_to_module(
      "OPENQASM 2.0;\nqreg q[2];\nx q[0];\nbarrier q[0],q[1];\nx q[0];\n");
  const auto &ops = m.functions.front().body.entry().ops;
  // alloc, alloc, x, barrier, x, return
  REQUIRE(ops.size() == 6);
  CHECK(ops[3].kind == OpKind::Barrier);
  CHECK(ops[4].operands[0] == ops[3].results[0]);
  CHECK(verify::verify_module(m).empty());
}

TEST_CASE("raise: every raised corpus program verifies clean") {
  for (const auto &path : test::corpus_files()) {
    INFO(path.string());
    auto m = test::qasm_to_module(test::read_text(path));
    auto diags = verify::verify_module(m);
    CHECK(diags.empty());
  }
}

TEST_CASE("raise: semantics preserved against the AST reference") {
  for (const char *file : {"bell.qasm", "teleport.qasm", "qft3.qasm",
                           "reset_reuse.qasm", "swap_chain.qasm"}) {
    INFO(file);
    auto src = test::read_text(std::filesystem::path(QSSA_CORPUS_DIR) / file);
    auto program = qasm::parse_qasm(src);
    auto module = raising::raise(program);
    double tv = sim::tv_distance(sim::run_distribution(program),
                                 sim::run_distribution(module));
    CHECK(tv <= 1e-9);
  }
}

TEST_CASE("raise: deterministic output text") {
  auto src = test::read_text(
      std::filesystem::path(QSSA_CORPUS_DIR) / "teleport.qasm");
  auto a = ir::print_ir(test::qasm_to_module(src));
  auto b = ir::print_ir(test::qasm_to_module(src));
  CHECK(a == b);
}

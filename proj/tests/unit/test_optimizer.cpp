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
using namespace qssa::opt;

namespace {

PipelineOptions verified_options() {
  PipelineOptions o;
  o.verify_between_passes = true;
  return o;
}

/// 2x2 product computed with plain arrays, independent of CMatrix.
std::array<Complex, 4> raw_mul(const CMatrix &a, const CMatrix &b) {
  std::array<Complex, 4> out{};
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      out[r * 2 + c] = a(r, 0) * b(0, c) + a(r, 1) * b(1, c);
  return out;
}

ModuleIR measured_module(const char *gates) {
  std::string src = "OPENQASM 2.0;\nqreg q[2];\ncreg c[2];\n";
  src += gates;
  src += "measure q[0]->c[0];\nmeasure q[1]->c[1];\n";
  return test::qasm_to_module(src);
}

} // namespace

TEST_CASE("peephole: H;H cancels to nothing") {
  auto m = test::qasm_to_module("OPENQASM 2.0;\nqreg q[1];\nh q[0];\nh q[0];\n");
  run_peepholes(m);
  CHECK(test::count_gates(m) == 0);
}

TEST_CASE("peephole: X;X erases and measure reads the original qubit") {
  auto m = test::qasm_to_module(
      "OPENQASM 2.0;\nqreg q[1];\ncreg c[1];\nx q[0];\nx q[0];\n"
      "measure q[0]->c[0];\n");
  run_peepholes(m);
  CHECK(test::count_gates(m) == 0);
  const auto &ops = m.functions.front().body.entry().ops;
  const Operation *alloc = nullptr, *measure = nullptr;
  for (const auto &op : ops) {
    if (op.kind == OpKind::Alloc) alloc = &op;
    if (op.kind == OpKind::Measure) measure = &op;
  }
  REQUIRE((alloc && measure));
  CHECK(measure->operands[0] == alloc->results[0]);
}

TEST_CASE("peephole: Pauli pairs and the XYZ relation") {
  for (const char *pair : {"y q[0];\ny q[0];\n", "z q[0];\nz q[0];\n"}) {
    auto m = test::qasm_to_module(std::string("OPENQASM 2.0;\nqreg q[1];\n") +
                                  pair);
    run_peepholes(m);
    CHECK(test::count_gates(m) == 0);
  }
  auto m = test::qasm_to_module(
      "OPENQASM 2.0;\nqreg q[1];\nz q[0];\ny q[0];\nx q[0];\n");
  auto report = run_peepholes(m);
  CHECK(test::count_gates(m) == 0);
  REQUIRE(report.notes.size() == 1); // the dropped global phase is recorded
}

TEST_CASE("peephole: CNOT;CNOT on the same wires cancels") {
  auto m = measured_module("cx q[0],q[1];\ncx q[0],q[1];\n");
  run_peepholes(m);
  CHECK(test::count_gates(m) == 0);
}

TEST_CASE("peephole: crossed CNOT pair does not match") {
  auto m = measured_module("cx q[0],q[1];\ncx q[1],q[0];\n");
  run_peepholes(m);
  CHECK(test::count_kind(m, OpKind::CNOT) == 2);
}

TEST_CASE("peephole: U merge equals the matrix product (oracle)") {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> angle(-6.0, 6.0);
  for (int trial = 0; trial < 200; ++trial) {
    double t1 = angle(rng), p1 = angle(rng), l1 = angle(rng);
    double t2 = angle(rng), p2 = angle(rng), l2 = angle(rng);
    if (trial % 5 == 0) t1 = 0.0;         // gimbal lock
    if (trial % 7 == 0) t2 = kPi;         // gimbal lock at pi
    test::ModuleBuilder mb;
    auto q = mb.b().alloc(1);
    auto u1 = mb.b().u3(q, t1, p1, l1);
    mb.b().u3(u1, t2, p2, l2);
    mb.b().ret();
    auto m = std::move(mb.module);
    run_peepholes(m);
    REQUIRE(test::count_gates(m) <= 1);

    auto expect = raw_mul(ir::u3_matrix(t2, p2, l2), ir::u3_matrix(t1, p1, l1));
    CMatrix expected(2, 2);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) expected(r, c) = expect[r * 2 + c];
    CMatrix actual = CMatrix::identity(2);
    walk_ops(m, [&](const Operation &op) {
      if (op.kind == OpKind::U)
        actual = ir::u3_matrix(op.float_attr("theta"), op.float_attr("phi"),
                               op.float_attr("lambda"));
    });
    CHECK(equiv_up_to_global_phase(actual, expected, 1e-9));
  }
}

TEST_CASE("peephole: adjoint pairs cancel through the merge family") {
  for (const char *pair :
       {"s q[0];\nsdg q[0];\n", "t q[0];\ntdg q[0];\n",
        "rz(0.8) q[0];\nrz(-0.8) q[0];\n", "rx(1.1) q[0];\nrx(-1.1) q[0];\n"}) {
    auto m = test::qasm_to_module(std::string("OPENQASM 2.0;\nqreg q[1];\n") +
                                  pair);
    run_peepholes(m);
    INFO(pair);
    CHECK(test::count_gates(m) == 0);
  }
}

TEST_CASE("peephole: diagonal gates before measure are dropped") {
  for (const char *g : {"rz(0.7) q[0];\n", "z q[0];\n", "s q[0];\n",
                        "t q[0];\n", "u1(0.3) q[0];\n"}) {
    auto m = test::qasm_to_module(
        std::string("OPENQASM 2.0;\nqreg q[1];\ncreg c[1];\nh q[0];\n") + g +
        "measure q[0]->c[0];\n");
    auto before = sim::run_distribution(m);
    run_peepholes(m);
    INFO(g);
    CHECK(test::count_gates(m) == 1); // only the H remains
    CHECK(sim::tv_distance(before, sim::run_distribution(m)) <= 1e-9);
  }
  // non-diagonal U stays
  auto m = test::qasm_to_module(
      "OPENQASM 2.0;\nqreg q[1];\ncreg c[1];\nu3(1.0,0.2,0.3) q[0];\n"
      "measure q[0]->c[0];\n");
  run_peepholes(m);
  CHECK(test::count_kind(m, OpKind::U) == 1);
}

TEST_CASE("peephole: rewrites never cross a barrier") {
  auto m = test::qasm_to_module(
      "OPENQASM 2.0;\nqreg q[1];\nx q[0];\nbarrier q[0];\nx q[0];\n");
  run_peepholes(m);
  CHECK(test::count_kind(m, OpKind::X) == 2);
}

TEST_CASE("gvn: identical constants deduplicate") {
  test::ModuleBuilder mb;
  auto a = mb.b().const_int(5);
  auto b2 = mb.b().const_int(5);
  auto sum = mb.b().create(OpKind::AddI, {a, b2}).results[0];
  auto five2 = mb.b().const_int(5);
  mb.b().create(OpKind::CmpEq, {sum, five2});
  mb.b().ret();
  auto m = std::move(mb.module);
  run_cse_gvn(m);
  CHECK(test::count_kind(m, OpKind::ConstInt) == 1);
  CHECK(verify::verify_module(m).empty());
}

TEST_CASE("gvn: Fig 9 shape hoists the duplicated H out of the branch") {
  // both branches start by applying H to the same incoming qubit
  test::ModuleBuilder mb;
  auto a = mb.b().alloc(1);
  auto r = test::detail::emit_if(
      mb,
      [&](OpBuilder &b) {
        auto h = b.gate1(OpKind::H, a);
        return b.gate1(OpKind::X, h);
      },
      [&](OpBuilder &b) { return b.gate1(OpKind::H, a); });
  auto cell = mb.b().create(OpKind::MemAllocBit).results[0];
  auto [bits, q] = mb.b().measure(r);
  (void)q;
  mb.b().create(OpKind::MemStoreBit, {cell, bits});
  mb.b().ret();
  auto m = std::move(mb.module);
  REQUIRE(verify::verify_module(m).empty());
  auto before = sim::run_distribution(m);

  run_cse_gvn(m);
  REQUIRE(verify::verify_module(m).empty());
  CHECK(test::count_kind(m, OpKind::H) == 1);
  // ...and it sits in the parent block, before the scf.if
  const auto &ops = m.functions.front().body.entry().ops;
  bool seen_h = false, h_before_if = false;
  for (const auto &op : ops) {
    if (op.kind == OpKind::H) seen_h = true;
    if (op.kind == OpKind::ScfIf && seen_h) h_before_if = true;
  }
  CHECK(h_before_if);
  CHECK(sim::tv_distance(before, sim::run_distribution(m)) <= 1e-9);
}

TEST_CASE("gvn: matching tail gates sink after the scf.if") {
  test::ModuleBuilder mb;
  auto a = mb.b().alloc(1);
  auto r = test::detail::emit_if(
      mb,
      [&](OpBuilder &b) {
        auto x = b.gate1(OpKind::X, a);
        return b.gate1(OpKind::H, x);
      },
      [&](OpBuilder &b) { return b.gate1(OpKind::H, a); });
  mb.b().gate1(OpKind::Z, r);
  mb.b().ret();
  auto m = std::move(mb.module);
  REQUIRE(verify::verify_module(m).empty());
  run_cse_gvn(m);
  REQUIRE(verify::verify_module(m).empty());
  CHECK(test::count_kind(m, OpKind::H) == 1);
}

TEST_CASE("gvn: no hoist when branches touch different wires") {
  // builds: measured coin drives an scf.if; then applies H to wire a, else
  // applies H to wire b. `hoisted` additionally forces H(a) outside (the
  // rewrite the pass must NOT make).
  auto build = [&](bool hoisted) {
    test::ModuleBuilder mb;
    auto &b = mb.b();
    auto coin = b.alloc(1);
    auto coin_h = b.gate1(OpKind::H, coin);
    auto cell0 = b.create(OpKind::MemAllocBit).results[0];
    auto [cbits, cq] = b.measure(coin_h);
    (void)cq;
    b.create(OpKind::MemStoreBit, {cell0, cbits});
    auto loaded = b.create(OpKind::MemLoadBit, {cell0}).results[0];
    auto one = b.const_int(1);
    auto cond = b.create(OpKind::CmpEq, {loaded, one}).results[0];

    auto a = b.alloc(1);
    auto b2 = b.alloc(1);
    if (hoisted) a = b.gate1(OpKind::H, a);
    Block *saved = b.insertion_block();
    Region then_region, else_region;
    then_region.blocks.emplace_back();
    else_region.blocks.emplace_back();
    b.set_insertion_block(&then_region.entry());
    auto t = hoisted ? a : b.gate1(OpKind::H, a);
    b.yield({t, b2});
    b.set_insertion_block(&else_region.entry());
    auto e = b.gate1(OpKind::H, b2);
    b.yield({a, e});
    b.set_insertion_block(saved);
    std::vector<Region> regions;
    regions.push_back(std::move(then_region));
    regions.push_back(std::move(else_region));
    auto &ifop = b.create(OpKind::ScfIf, {cond}, {}, std::move(regions));
    for (int k = 0; k < 2; ++k) {
      auto cell = b.create(OpKind::MemAllocBit).results[0];
      auto [bits, q] = b.measure(ifop.results[k]);
      (void)q;
      b.create(OpKind::MemStoreBit, {cell, bits});
    }
    b.ret();
    return std::move(mb.module);
  };

  auto m = build(false);
  REQUIRE(verify::verify_module(m).empty());
  std::string before_text = print_ir(m);
  run_cse_gvn(m);
  CHECK(print_ir(m) == before_text); // module unchanged

  // oracle: forcing the hoist anyway changes the outcome distribution,
  // confirming the rewrite would be unsound here
  auto wrong = build(true);
  CHECK(sim::tv_distance(sim::run_distribution(m),
                         sim::run_distribution(wrong)) > 1e-3);
}

TEST_CASE("dce: dead pure cones disappear, observable ops stay") {
  // alloc -> H -> unused: everything goes
  test::ModuleBuilder mb;
  auto q = mb.b().alloc(1);
  mb.b().gate1(OpKind::H, q);
  mb.b().ret();
  auto m = std::move(mb.module);
  run_dce(m);
  CHECK(count_ops(m) == 1); // only the return

  // alloc -> measure with stored bits: kept
  auto m2 = test::qasm_to_module(
      "OPENQASM 2.0;\nqreg q[1];\ncreg c[1];\nmeasure q[0]->c[0];\n");
  run_dce(m2);
  CHECK(test::count_kind(m2, OpKind::Measure) == 1);
  CHECK(test::count_kind(m2, OpKind::MemAllocBit) == 1);

  // measure with nothing stored: removed only under aggressive dce
  test::ModuleBuilder mb3;
  auto q3 = mb3.b().alloc(1);
  mb3.b().measure(q3);
  mb3.b().ret();
  auto m3 = std::move(mb3.module);
  auto m3_aggressive = m3;
  run_dce(m3);
  CHECK(test::count_kind(m3, OpKind::Measure) == 1);
  run_dce(m3_aggressive, /*aggressive=*/true);
  CHECK(test::count_kind(m3_aggressive, OpKind::Measure) == 0);
}

TEST_CASE("dce: agreement with a liveness oracle over random circuits") {
  std::mt19937 rng(123);
  for (int trial = 0; trial < 25; ++trial) {
    auto m = test::random_circuit(rng);
    // oracle: mark live = ops reachable (via operands) from effectful ops
    // and terminators; everything else should be removed
    const auto &f = m.functions.front();
    std::map<const Operation *, bool> live;
    std::map<uint32_t, const Operation *> def;
    walk_ops(f, [&](const Operation &op) {
      for (ValueId r : op.results) def[r.index] = &op;
    });
    std::vector<const Operation *> work;
    walk_ops(f, [&](const Operation &op) {
      bool root = is_terminator(op.kind) ||
                  (!is_pure(op.kind) && op.kind != OpKind::Alloc &&
                   op.kind != OpKind::MemLoadBit);
      if (root) {
        live[&op] = true;
        work.push_back(&op);
      }
    });
    while (!work.empty()) {
      const Operation *op = work.back();
      work.pop_back();
      for (ValueId v : op->operands) {
        auto it = def.find(v.index);
        if (it != def.end() && !live[it->second]) {
          live[it->second] = true;
          work.push_back(it->second);
        }
      }
    }
    size_t expected_live = 0;
    walk_ops(f, [&](const Operation &op) {
      if (live[&op]) ++expected_live;
    });

    run_dce(m);
    CHECK(count_ops(m.functions.front()) == expected_live);
    CHECK(verify::verify_module(m).empty());
  }
}

TEST_CASE("inline: calls splice and the callee disappears") {
  const char *text = "module {\n"
                     "  func @wiggle(%a: qubit<1>) -> (qubit<1>) {\n"
                     "    %b = qssa.H %a : qubit<1>\n"
                     "    return %b\n"
                     "  }\n"
                     "  func @main() {\n"
                     "    %q = qssa.alloc {size = 1} : qubit<1>\n"
                     "    %r = call @wiggle(%q) : qubit<1>\n"
                     "    %s = qssa.X %r : qubit<1>\n"
                     "    return\n"
                     "  }\n"
                     "}\n";
  auto m = parse_ir(text);
  auto before = sim::run_distribution(m);
  run_inline(m);
  REQUIRE(m.functions.size() == 1);
  CHECK(test::count_kind(m, OpKind::Call) == 0);
  CHECK(test::count_kind(m, OpKind::H) == 1);
  CHECK(verify::verify_module(m).empty());
  CHECK(sim::tv_distance(before, sim::run_distribution(m)) <= 1e-9);
}

TEST_CASE("inline: the split/call/concat module flattens into main") {
  const char *text = "module {\n"
                     "  func @cnot_on_2(%q: qubit<2>) -> (qubit<2>) {\n"
                     "    %a, %b = qssa.split %q : (qubit<1>, qubit<1>)\n"
                     "    %c, %d = qssa.CNOT %a, %b : (qubit<1>, qubit<1>)\n"
                     "    %e = qssa.concat %c, %d : qubit<2>\n"
                     "    return %e\n"
                     "  }\n"
                     "  func @main() {\n"
                     "    %q = qssa.alloc : qubit<3>\n"
                     "    %f, %g = qssa.split %q : (qubit<2>, qubit<1>)\n"
                     "    %h = call @cnot_on_2(%f) : qubit<2>\n"
                     "    %i = qssa.concat %h, %g : qubit<3>\n"
                     "    %j, %k = qssa.measure %i : (bits<3>, qubit<3>)\n"
                     "    return\n"
                     "  }\n"
                     "}\n";
  auto m = parse_ir(text);
  run_inline(m);
  REQUIRE(m.functions.size() == 1);
  CHECK(m.functions.front().name == "main");
  CHECK(test::count_kind(m, OpKind::CNOT) == 1);
  CHECK(verify::verify_module(m).empty());
}

TEST_CASE("inline: recursive callees stay untouched") {
  const char *text = "module {\n"
                     "  func @loop(%a: qubit<1>) -> (qubit<1>) {\n"
                     "    %b = call @loop(%a) : qubit<1>\n"
                     "    return %b\n"
                     "  }\n"
                     "  func @main() {\n"
                     "    %q = qssa.alloc {size = 1} : qubit<1>\n"
                     "    %r = call @loop(%q) : qubit<1>\n"
                     "    return\n"
                     "  }\n"
                     "}\n";
  auto m = parse_ir(text);
  run_inline(m);
  CHECK(test::count_kind(m, OpKind::Call) == 2);
  CHECK(m.functions.size() == 2);
}

TEST_CASE("unroll: constant trip loops expand with threaded iter_args") {
  test::ModuleBuilder mb;
  auto init = mb.b().alloc(1);
  test::detail::emit_for(mb, 3, init, [&](OpBuilder &b, ValueId iter) {
    return b.gate1(OpKind::X, iter);
  });
  mb.b().ret();
  auto m = std::move(mb.module);
  REQUIRE(verify::verify_module(m).empty());
  run_unroll(m);
  CHECK(test::count_kind(m, OpKind::ScfFor) == 0);
  CHECK(test::count_kind(m, OpKind::X) == 3);
  CHECK(verify::verify_module(m).empty());

  // the three X ops chain through fresh values
  const auto &ops = m.functions.front().body.entry().ops;
  std::vector<const Operation *> xs;
  for (const auto &op : ops)
    if (op.kind == OpKind::X) xs.push_back(&op);
  REQUIRE(xs.size() == 3);
  CHECK(xs[1]->operands[0] == xs[0]->results[0]);
  CHECK(xs[2]->operands[0] == xs[1]->results[0]);
}

TEST_CASE("unroll: trip counts beyond the threshold stay loops") {
  test::ModuleBuilder mb;
  auto init = mb.b().alloc(1);
  test::detail::emit_for(mb, 1000, init, [&](OpBuilder &b, ValueId iter) {
    return b.gate1(OpKind::X, iter);
  });
  mb.b().ret();
  auto m = std::move(mb.module);
  run_unroll(m);
  CHECK(test::count_kind(m, OpKind::ScfFor) == 1);
}

TEST_CASE("unroll: unrolled loops keep semantics") {
  test::ModuleBuilder mb;
  auto init = mb.b().alloc(1);
  auto out = test::detail::emit_for(mb, 2, init, [&](OpBuilder &b, ValueId it) {
    return b.gate1(OpKind::H, it);
  });
  auto cell = mb.b().create(OpKind::MemAllocBit).results[0];
  auto [bits, q] = mb.b().measure(out);
  (void)q;
  mb.b().create(OpKind::MemStoreBit, {cell, bits});
  mb.b().ret();
  auto m = std::move(mb.module);
  auto before = sim::run_distribution(m);
  run_unroll(m);
  CHECK(verify::verify_module(m).empty());
  CHECK(sim::tv_distance(before, sim::run_distribution(m)) <= 1e-9);
}

TEST_CASE("pipeline: default pipeline on the Fig 4 pattern removes two gates") {
  auto m = test::qasm_to_module(
      "OPENQASM 2.0;\nqreg q[1];\ncreg c[1];\nx q[0];\nx q[0];\n"
      "measure q[0]->c[0];\n");
  auto before = metrics::compute_metrics(m);
  run_pipeline(m, default_pipeline(), verified_options());
  auto after = metrics::compute_metrics(m);
  CHECK(before.gate_count - after.gate_count == 2);
}

TEST_CASE("pipeline: empty pass list is the identity") {
  auto m = test::qasm_to_module(test::read_text(
      std::filesystem::path(QSSA_CORPUS_DIR) / "teleport.qasm"));
  std::string before = print_ir(m);
  run_pipeline(m, {}, verified_options());
  CHECK(print_ir(m) == before);
}

TEST_CASE("pipeline: unknown pass names are rejected") {
  auto m = test::qasm_to_module("OPENQASM 2.0;\nqreg q[1];\n");
  CHECK_THROWS_MATCHES(run_pipeline(m, {"optimize-harder"}), Error,
                       Catch::Matchers::Predicate<Error>([](const Error &e) {
                         return e.kind() == ErrorKind::UnknownPass;
                       }));
}

TEST_CASE("pipeline: idempotent and deterministic on the corpus") {
  for (const auto &path : test::corpus_files()) {
    INFO(path.string());
    auto m1 = test::qasm_to_module(test::read_text(path));
    auto m2 = test::qasm_to_module(test::read_text(path));
    run_pipeline(m1, default_pipeline(), verified_options());
    run_pipeline(m2, default_pipeline(), verified_options());
    CHECK(print_ir(m1) == print_ir(m2)); // deterministic
    auto once = print_ir(m1);
    run_pipeline(m1, default_pipeline(), verified_options());
    CHECK(print_ir(m1) == once); // idempotent
  }
}

TEST_CASE("pipeline: soundness on the corpus (distributions)") {
  for (const auto &path : test::corpus_files()) {
    INFO(path.string());
    auto program = qasm::parse_qasm(test::read_text(path));
    auto m = raising::raise(program);
    auto before = sim::run_distribution(program);
    run_pipeline(m, default_pipeline(), verified_options());
    CHECK(sim::tv_distance(before, sim::run_distribution(m)) <= 1e-9);
  }
}

TEST_CASE("pipeline: unitary soundness on live measurement-free circuits") {
  std::mt19937 rng(321);
  for (int trial = 0; trial < 15; ++trial) {
    test::CircuitGenOptions opts;
    opts.max_qubits = 4;
    opts.max_gates = 14;
    opts.allow_measure = false;
    opts.return_qubits = true; // keeps every cone live through the return
    auto m = test::random_circuit(rng, opts);
    REQUIRE(verify::verify_module(m).empty());
    auto before = sim::circuit_unitary(m);
    run_pipeline(m, default_pipeline(), verified_options());
    auto after = sim::circuit_unitary(m);
    REQUIRE(before.rows() == after.rows());
    CHECK(equiv_up_to_global_phase(after, before, 1e-9));
  }
}

TEST_CASE("pipeline: gate count never increases (random circuits)") {
  std::mt19937 rng(555);
  for (int trial = 0; trial < 100; ++trial) {
    auto m = test::random_circuit(rng);
    auto before = metrics::compute_metrics(m);
    run_pipeline(m, default_pipeline(), verified_options());
    auto after = metrics::compute_metrics(m);
    CHECK(after.gate_count <= before.gate_count);
  }
}

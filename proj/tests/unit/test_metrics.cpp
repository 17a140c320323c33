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
using namespace qssa::metrics;

TEST_CASE("metrics: Fig 1 structure counts two ops at depth two") {
  // the canonical split/call/concat/measure module: CNOT inside the callee
  const char *text = "module {\n"
                     "  func @cnot_on_2(%q: qubit<2>) -> (qubit<2>) {\n"
                     "    %a, %b = qssa.split %q : (qubit<1>, qubit<1>)\n"
                     "    %c, %d = qssa.CNOT %a, %b : (qubit<1>, qubit<1>)\n"
                     "    %e = qssa.concat %c, %d : qubit<2>\n"
                     "    return %e\n"
                     "  }\n"
                     "  func @main() {\n"
                     "    %q = qssa.alloc {size = 3} : qubit<3>\n"
                     "    %f, %g = qssa.split %q : (qubit<2>, qubit<1>)\n"
                     "    %h = call @cnot_on_2(%f) : qubit<2>\n"
                     "    %i = qssa.concat %h, %g : qubit<3>\n"
                     "    %j, %k = qssa.measure %i : (bits<3>, qubit<3>)\n"
                     "    return\n"
                     "  }\n"
                     "}\n";
  auto m = parse_ir(text);
  auto metrics = compute_metrics(m);
  CHECK(metrics.gate_count == 2);
  CHECK(metrics.depth == 2);
  CHECK(metrics.histogram.at("cx") == 1);
  CHECK(metrics.histogram.at("measure") == 1);
}

TEST_CASE("metrics: empty main is all zeros") {
  test::ModuleBuilder mb;
  mb.b().ret();
  auto m = compute_metrics(mb.module);
  CHECK(m.gate_count == 0);
  CHECK(m.depth == 0);
}

TEST_CASE("metrics: a serial chain has equal count and depth") {
  test::ModuleBuilder mb;
  auto q = mb.b().alloc(1);
  for (int i = 0; i < 17; ++i) q = mb.b().gate1(OpKind::X, q);
  mb.b().ret();
  auto m = compute_metrics(mb.module);
  CHECK(m.gate_count == 17);
  CHECK(m.depth == 17);
}

TEST_CASE("metrics: parallel wires keep depth at the longest path") {
  auto m = test::qasm_to_module(
      "OPENQASM 2.0;\nqreg q[2];\nx q[0];\nx q[0];\nx q[1];\n");
  auto metrics = compute_metrics(m);
  CHECK(metrics.gate_count == 3);
  CHECK(metrics.depth == 2);
}

TEST_CASE("metrics: gate_count equals the histogram total (invariant)") {
  std::mt19937 rng(88);
  for (int trial = 0; trial < 20; ++trial) {
    auto m = test::random_circuit(rng);
    auto metrics = compute_metrics(m);
    uint64_t total = 0;
    for (const auto &[k, v] : metrics.histogram) total += v;
    CHECK(metrics.gate_count == total);
    CHECK(metrics.depth <= metrics.gate_count);
  }
}

TEST_CASE("metrics: constant loops multiply, unbounded loops error") {
  test::ModuleBuilder mb;
  auto init = mb.b().alloc(1);
  test::detail::emit_for(mb, 5, init, [&](OpBuilder &b, ValueId it) {
    return b.gate1(OpKind::X, it);
  });
  mb.b().ret();
  auto metrics = compute_metrics(mb.module);
  CHECK(metrics.gate_count == 5);
  CHECK(metrics.depth == 5);

  // a loop bound that is not a literal constant
  test::ModuleBuilder mb2;
  auto lo = mb2.b().const_int(0);
  auto a = mb2.b().const_int(1);
  auto b2 = mb2.b().const_int(2);
  auto hi = mb2.b().create(OpKind::AddI, {a, b2}).results[0];
  auto st = mb2.b().const_int(1);
  auto init2 = mb2.b().alloc(1);
  ir::FunctionDef &f = mb2.main();
  Region body;
  body.blocks.emplace_back();
  body.entry().args.push_back(f.new_value(Type::integer()));
  body.entry().args.push_back(f.new_value(Type::qubit(1)));
  Block *saved = mb2.b().insertion_block();
  mb2.b().set_insertion_block(&body.entry());
  auto y = mb2.b().gate1(OpKind::X, body.entry().args[1]);
  mb2.b().yield({y});
  mb2.b().set_insertion_block(saved);
  std::vector<Region> regions;
  regions.push_back(std::move(body));
  mb2.b().create(OpKind::ScfFor, {lo, hi, st, init2}, {}, std::move(regions));
  mb2.b().ret();
  CHECK_THROWS_MATCHES(compute_metrics(mb2.module), Error,
                       Catch::Matchers::Predicate<Error>([](const Error &e) {
                         return e.kind() == ErrorKind::Unbounded;
                       }));
}

TEST_CASE("metrics: if branches take the max depth") {
  auto m = test::qasm_to_module(
      "OPENQASM 2.0;\nqreg q[1];\ncreg c[1];\nmeasure q[0] -> c[0];\n"
      "if(c==1) x q[0];\n");
  auto metrics = compute_metrics(m);
  CHECK(metrics.gate_count == 2); // measure + conditional x
  CHECK(metrics.depth == 2);
}

TEST_CASE("metrics: barriers synchronize but never count") {
  auto p = qasm::parse_qasm(
      "OPENQASM 2.0;\nqreg q[2];\nx q[0];\nbarrier q[0],q[1];\nx q[1];\n");
  auto m = compute_metrics(p);
  CHECK(m.gate_count == 2);
  CHECK(m.depth == 2); // the barrier aligns q[1] after q[0]'s gate
}

TEST_CASE("optimization_ratio: formula and edge cases") {
  CircuitMetrics ten, seven, zero;
  ten.gate_count = 10;
  seven.gate_count = 7;
  CHECK(optimization_ratio(ten, seven) == 1.0 - 7.0 / 10.0);
  CHECK(std::abs(optimization_ratio(ten, seven) - 0.3) < 1e-12);
  CHECK(optimization_ratio(ten, ten) == 0.0);
  CHECK(optimization_ratio(zero, zero) == 0.0);
}

TEST_CASE("optimization_ratio: the XX micro-benchmark fully cancels") {
  auto m = test::qasm_to_module("OPENQASM 2.0;\nqreg q[1];\nx q[0];\nx q[0];\n");
  auto before = compute_metrics(m);
  opt::run_pipeline(m, opt::default_pipeline());
  auto after = compute_metrics(m);
  CHECK(optimization_ratio(before, after) == 1.0);
}

TEST_CASE("bench: micro corpus ratios and determinism") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "qssa_bench_micro";
  fs::create_directories(dir);
  auto write = [&](const char *name, const char *body) {
    std::ofstream out(dir / name);
    out << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n" << body;
  };
  write("a_xx.qasm", "qreg q[1];\nx q[0];\nx q[0];\n");
  write("b_hh.qasm", "qreg q[1];\nh q[0];\nh q[0];\n");
  write("c_bell.qasm", "qreg q[2];\ncreg c[2];\nh q[0];\ncx q[0],q[1];\n"
                       "measure q[0] -> c[0];\nmeasure q[1] -> c[1];\n");

  auto report = bench(dir.string(), opt::default_pipeline());
  REQUIRE(report.entries.size() == 3);
  CHECK(report.entries[0].ratio == 1.0);
  CHECK(report.entries[1].ratio == 1.0);
  CHECK(report.entries[2].ratio == 0.0); // Bell has no cancellations
  for (const auto &e : report.entries) CHECK(e.ok);

  // byte-identical default JSON on re-run
  auto again = bench(dir.string(), opt::default_pipeline());
  CHECK(bench_to_json(report).dump(2) == bench_to_json(again).dump(2));

  // empty directory: empty report
  fs::path empty = fs::temp_directory_path() / "qssa_bench_empty";
  fs::create_directories(empty);
  for (const auto &f : fs::directory_iterator(empty)) fs::remove(f);
  auto none = bench(empty.string(), opt::default_pipeline());
  CHECK(none.entries.empty());
}

TEST_CASE("bench: gate count never grows on the corpus") {
  auto report = bench(QSSA_CORPUS_DIR, opt::default_pipeline());
  REQUIRE(report.entries.size() == 20);
  for (const auto &e : report.entries) {
    INFO(e.file);
    REQUIRE(e.ok);
    CHECK(e.output.gate_count <= e.input.gate_count);
    CHECK(e.ratio >= 0.0);
  }
}

TEST_CASE("bench: files that fail to parse are recorded, not fatal") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "qssa_bench_bad";
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "broken.qasm");
    out << "OPENQASM 2.0;\nqreg q[;\n";
  }
  auto report = bench(dir.string(), opt::default_pipeline());
  REQUIRE(report.entries.size() == 1);
  CHECK(!report.entries[0].ok);
  CHECK(!report.entries[0].error.empty());
}

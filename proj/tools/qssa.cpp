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

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qssa/qssa.hpp"

namespace {

using namespace qssa;

std::string read_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw_error(ErrorKind::Resolution, "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_output(const std::string &out_path, const std::string &text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw_error(ErrorKind::Resolution, "cannot write '" + out_path + "'");
  out << text;
}

bool is_qasm_path(const std::string &path) {
  return path.size() >= 5 && path.substr(path.size() - 5) == ".qasm";
}

/// Load a module from .qssa text or by raising a .qasm file.
ir::ModuleIR load_module(const std::string &path) {
  std::string text = read_file(path);
  if (is_qasm_path(path)) return raising::raise(qasm::parse_qasm(text));
  return ir::parse_ir(text);
}

std::vector<std::string> split_pipeline(const std::string &spec) {
  if (spec.empty()) return opt::default_pipeline();
  std::vector<std::string> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::string distribution_text(const sim::OutcomeDistribution &dist) {
  std::ostringstream os;
  for (const auto &[key, p] : dist.probs)
    os << (key.empty() ? "-" : key) << " " << format_double_exact(p) << "\n";
  return os.str();
}

sim::OutcomeDistribution distribution_of(const std::string &path) {
  std::string text = read_file(path);
  if (is_qasm_path(path)) return sim::run_distribution(qasm::parse_qasm(text));
  return sim::run_distribution(ir::parse_ir(text));
}

int print_diagnostics(const std::vector<verify::Diagnostic> &diags,
                      const std::string &file) {
  for (const auto &d : diags) std::cerr << d.str(file) << "\n";
  return verify::has_errors(diags) ? 1 : 0;
}

std::string metrics_table(const metrics::CircuitMetrics &m) {
  std::ostringstream os;
  os << "gate_count " << m.gate_count << "\n";
  os << "depth      " << m.depth << "\n";
  for (const auto &[k, v] : m.histogram) os << "  " << k << " " << v << "\n";
  return os.str();
}

std::string reports_table(const std::vector<opt::PassReport> &reports) {
  std::ostringstream os;
  for (const auto &r : reports) {
    os << r.pass << ": " << r.rewrites << " rewrite(s), " << r.ops_before
       << " -> " << r.ops_after << " ops\n";
    for (const auto &note : r.notes) os << "  note: " << note << "\n";
  }
  return os.str();
}

nlohmann::json reports_json(const std::vector<opt::PassReport> &reports) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto &r : reports)
    out.push_back({{"pass", r.pass},
                   {"rewrites", r.rewrites},
                   {"ops_before", r.ops_before},
                   {"ops_after", r.ops_after},
                   {"notes", r.notes}});
  return {{"schema", 1}, {"passes", out}};
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"QSSA: an SSA-based IR toolkit for hybrid quantum-classical "
               "programs (OpenQASM 2.0 in/out)"};
  app.require_subcommand(1);

  std::string input, second_input, out_path, pipeline_spec, report_mode;
  bool json_mode = false, aggressive_dce = false, dist_flag = false;
  bool timings = false, warnings = false;
  double tol = 1e-9;
  uint64_t seed = 0; // reserved for future sampling modes

  app.add_flag("--json", json_mode, "emit machine-readable JSON");
  app.add_option("--seed", seed, "reserved");
  app.add_flag("--aggressive-dce", aggressive_dce,
               "let dce remove measures with unused results");

  auto *cmd_parse = app.add_subcommand("parse", "parse QASM, print canonical form");
  cmd_parse->add_option("input", input)->required();
  cmd_parse->add_option("-o,--output", out_path);

  auto *cmd_raise = app.add_subcommand("raise", "raise QASM to QSSA IR");
  cmd_raise->add_option("input", input)->required();
  cmd_raise->add_option("-o,--output", out_path);

  auto *cmd_verify = app.add_subcommand("verify", "type and single-use checks");
  cmd_verify->add_option("input", input)->required();
  cmd_verify->add_flag("--warnings", warnings, "also report qubit leaks");

  auto *cmd_opt = app.add_subcommand("opt", "run optimization passes");
  cmd_opt->add_option("input", input)->required();
  cmd_opt->add_option("-o,--output", out_path);
  cmd_opt->add_option("-p,--pipeline", pipeline_spec,
                      "comma-separated passes (default: inline,unroll,"
                      "peephole,gvn,dce,peephole,dce)");
  cmd_opt->add_option("--report", report_mode,
                      "print pass reports: 'json' or 'table'");

  auto *cmd_lower = app.add_subcommand("lower", "lower QSSA IR to QASM");
  cmd_lower->add_option("input", input)->required();
  cmd_lower->add_option("-o,--output", out_path);

  auto *cmd_sim = app.add_subcommand("sim", "exact outcome distribution");
  cmd_sim->add_option("input", input)->required();
  cmd_sim->add_flag("--dist", dist_flag, "print 'bitstring probability' lines");
  cmd_sim->add_option("-o,--output", out_path);

  auto *cmd_equiv = app.add_subcommand("equiv", "check two programs equivalent");
  cmd_equiv->add_option("a", input)->required();
  cmd_equiv->add_option("b", second_input)->required();
  cmd_equiv->add_option("--tol", tol, "tolerance (default 1e-9)");

  auto *cmd_stats = app.add_subcommand("stats", "gate count, depth, histogram");
  cmd_stats->add_option("input", input)->required();

  auto *cmd_bench = app.add_subcommand("bench", "optimize a directory of .qasm");
  cmd_bench->add_option("dir", input)->required();
  cmd_bench->add_option("-p,--pipeline", pipeline_spec);
  cmd_bench->add_option("-o,--output", out_path);
  cmd_bench->add_flag("--timings", timings, "include wall-clock timings");

  auto *cmd_roundtrip =
      app.add_subcommand("roundtrip", "raise, optimize, lower; check semantics");
  cmd_roundtrip->add_option("input", input)->required();
  cmd_roundtrip->add_option("-p,--pipeline", pipeline_spec);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }

  opt::PipelineOptions options;
  options.aggressive_dce = aggressive_dce;

  try {
    if (*cmd_parse) {
      write_output(out_path, qasm::print_qasm(qasm::parse_qasm(read_file(input))));
      return 0;
    }

    if (*cmd_raise) {
      write_output(out_path, ir::print_ir(load_module(input)));
      return 0;
    }

    if (*cmd_verify) {
      auto module = load_module(input);
      auto diags = verify::verify_module(module, warnings);
      if (diags.empty()) {
        std::cout << input << ": ok\n";
        return 0;
      }
      return print_diagnostics(diags, input);
    }

    if (*cmd_opt) {
      auto module = load_module(input);
      auto diags = verify::verify_module(module);
      if (verify::has_errors(diags)) return print_diagnostics(diags, input);
      auto reports = opt::run_pipeline(module, split_pipeline(pipeline_spec),
                                       options);
      write_output(out_path, ir::print_ir(module));
      if (report_mode == "json" || (report_mode.empty() && json_mode))
        std::cerr << reports_json(reports).dump(2) << "\n";
      else if (!report_mode.empty())
        std::cerr << reports_table(reports);
      return 0;
    }

    if (*cmd_lower) {
      write_output(out_path, qasm::print_qasm(lowering::lower(load_module(input))));
      return 0;
    }

    if (*cmd_sim) {
      (void)dist_flag; // the exact distribution is the only simulation mode
      write_output(out_path, distribution_text(distribution_of(input)));
      return 0;
    }

    if (*cmd_equiv) {
      auto ma = load_module(input);
      auto mb = load_module(second_input);
      bool equivalent = false;
      try {
        auto ua = sim::circuit_unitary(ma);
        auto ub = sim::circuit_unitary(mb);
        equivalent = ua.rows() == ub.rows() &&
                     equiv_up_to_global_phase(ua, ub, tol);
      } catch (const Error &e) {
        if (e.kind() != ErrorKind::HasMeasurement) throw;
        equivalent = sim::tv_distance(sim::run_distribution(ma),
                                      sim::run_distribution(mb)) <= tol;
      }
      std::cout << (equivalent ? "equivalent" : "not equivalent") << "\n";
      return equivalent ? 0 : 1;
    }

    if (*cmd_stats) {
      std::string text = read_file(input);
      metrics::CircuitMetrics m;
      if (is_qasm_path(input))
        m = metrics::compute_metrics(qasm::parse_qasm(text));
      else
        m = metrics::compute_metrics(ir::parse_ir(text));
      if (json_mode)
        std::cout << metrics::metrics_to_json(m).dump(2) << "\n";
      else
        std::cout << metrics_table(m);
      return 0;
    }

    if (*cmd_bench) {
      auto report =
          metrics::bench(input, split_pipeline(pipeline_spec), options);
      if (json_mode || !out_path.empty()) {
        write_output(out_path,
                     metrics::bench_to_json(report, timings).dump(2) + "\n");
      } else {
        for (const auto &e : report.entries) {
          if (e.ok)
            std::cout << e.file << ": " << e.input.gate_count << " -> "
                      << e.output.gate_count
                      << " gates, ratio " << e.ratio << "\n";
          else
            std::cout << e.file << ": error: " << e.error << "\n";
        }
        std::cout << "mean ratio " << report.mean_ratio << "\n";
      }
      return 0;
    }

    if (*cmd_roundtrip) {
      auto program = qasm::parse_qasm(read_file(input));
      bool print_ok =
          qasm::parse_qasm(qasm::print_qasm(program)) == program;
      auto module = raising::raise(program);
      auto diags = verify::verify_module(module);
      if (verify::has_errors(diags)) return print_diagnostics(diags, input);
      bool ir_ok =
          ir::structurally_equal(ir::parse_ir(ir::print_ir(module)), module);
      opt::run_pipeline(module, split_pipeline(pipeline_spec), options);
      auto lowered = lowering::lower(module);
      double tv = sim::tv_distance(sim::run_distribution(program),
                                   sim::run_distribution(lowered));
      bool sem_ok = tv <= 1e-9;
      std::cout << "print-parse: " << (print_ok ? "ok" : "FAIL")
                << "\nir round-trip: " << (ir_ok ? "ok" : "FAIL")
                << "\ndistribution tv: " << tv
                << (sem_ok ? " (ok)" : " (FAIL)") << "\n";
      return (print_ok && ir_ok && sem_ok) ? 0 : 1;
    }
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

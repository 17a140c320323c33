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

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qssa/metrics/metrics.hpp"
#include "qssa/opt/pipeline.hpp"
#include "qssa/qasm/parser.hpp"
#include "qssa/raising/raiser.hpp"
#include "qssa/verify/verifier.hpp"

namespace qssa::metrics {

struct BenchEntry {
  std::string file;
  bool ok = false;
  std::string error;
  CircuitMetrics input;
  CircuitMetrics output;
  double ratio = 0.0; // 1 - final/initial gate count
  double parse_ms = 0.0;
  double raise_ms = 0.0;
  double opt_ms = 0.0;
};

struct BenchReport {
  std::vector<BenchEntry> entries;
  double mean_ratio = 0.0;
  uint64_t total_gates_before = 0;
  uint64_t total_gates_after = 0;
};

namespace detail {

inline double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

} // namespace detail

/// Run raise -> verify -> optimize -> metrics over every .qasm file in a
/// directory (sorted by filename). Per-file failures are recorded, not
/// fatal.
inline BenchReport bench(const std::string &dir,
                         const std::vector<std::string> &pipeline,
                         const opt::PipelineOptions &options = {}) {
  BenchReport report;
  std::vector<std::filesystem::path> files;
  for (const auto &entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".qasm")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  double ratio_sum = 0.0;
  size_t ratio_n = 0;
  for (const auto &path : files) {
    BenchEntry entry;
    entry.file = path.filename().string();
    try {
      std::ifstream in(path);
      std::stringstream buffer;
      buffer << in.rdbuf();

      auto t0 = std::chrono::steady_clock::now();
      auto program = qasm::parse_qasm(buffer.str());
      entry.parse_ms = detail::ms_since(t0);

      auto t1 = std::chrono::steady_clock::now();
      auto module = raising::raise(program);
      entry.raise_ms = detail::ms_since(t1);

      auto diags = verify::verify_module(module);
      if (verify::has_errors(diags))
        throw_error(ErrorKind::Type, diags.front().message);
      entry.input = compute_metrics(module);

      auto t2 = std::chrono::steady_clock::now();
      opt::run_pipeline(module, pipeline, options);
      entry.opt_ms = detail::ms_since(t2);

      entry.output = compute_metrics(module);
      entry.ratio = optimization_ratio(entry.input, entry.output);
      entry.ok = true;
      report.total_gates_before += entry.input.gate_count;
      report.total_gates_after += entry.output.gate_count;
      ratio_sum += entry.ratio;
      ++ratio_n;
    } catch (const std::exception &e) {
      entry.ok = false;
      entry.error = e.what();
    }
    report.entries.push_back(std::move(entry));
  }
  if (ratio_n > 0) report.mean_ratio = ratio_sum / static_cast<double>(ratio_n);
  return report;
}

inline nlohmann::json metrics_to_json(const CircuitMetrics &m) {
  nlohmann::json h = nlohmann::json::object();
  for (const auto &[k, v] : m.histogram) h[k] = v;
  return {{"gate_count", m.gate_count}, {"depth", m.depth}, {"histogram", h}};
}

/// JSON form of a bench report. Wall-clock timings are included only on
/// request so that the default report is byte-identical across runs.
inline nlohmann::json bench_to_json(const BenchReport &report,
                                    bool include_timings = false) {
  nlohmann::json files = nlohmann::json::array();
  for (const auto &e : report.entries) {
    nlohmann::json j;
    j["file"] = e.file;
    j["ok"] = e.ok;
    if (!e.ok) {
      j["error"] = e.error;
    } else {
      j["input"] = metrics_to_json(e.input);
      j["output"] = metrics_to_json(e.output);
      j["ratio"] = e.ratio;
      if (include_timings)
        j["timings_ms"] = {{"parse", e.parse_ms},
                           {"raise", e.raise_ms},
                           {"opt", e.opt_ms}};
    }
    files.push_back(std::move(j));
  }
  return {{"schema", 1},
          {"files", files},
          {"aggregate",
           {{"mean_ratio", report.mean_ratio},
            {"total_gates_before", report.total_gates_before},
            {"total_gates_after", report.total_gates_after}}}};
}

} // namespace qssa::metrics

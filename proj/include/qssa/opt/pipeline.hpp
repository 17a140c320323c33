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

#include <string>
#include <vector>

#include "qssa/opt/passes.hpp"
#include "qssa/opt/rewrite.hpp"
#include "qssa/verify/verifier.hpp"

namespace qssa::opt {

inline const std::vector<std::string> &default_pipeline() {
  static const std::vector<std::string> passes = {
      "inline", "unroll", "peephole", "gvn", "dce", "peephole", "dce"};
  return passes;
}

struct PipelineOptions {
  bool aggressive_dce = false;
  bool verify_between_passes =
#ifdef NDEBUG
      false;
#else
      true;
#endif
};

inline PassReport run_pass(const std::string &name, ir::ModuleIR &module,
                           const PipelineOptions &options) {
  if (name == "inline") return run_inline(module);
  if (name == "unroll") return run_unroll(module);
  if (name == "peephole") return run_peepholes(module);
  if (name == "gvn" || name == "cse") return run_cse_gvn(module);
  if (name == "dce") return run_dce(module, options.aggressive_dce);
  throw_error(ErrorKind::UnknownPass, "no pass named '" + name + "'");
}

/// Apply passes in order. In debug builds each pass is followed by a full
/// verification; a pass that breaks the module is a bug, reported loudly.
inline std::vector<PassReport>
run_pipeline(ir::ModuleIR &module, const std::vector<std::string> &passes,
             const PipelineOptions &options = {}) {
  std::vector<PassReport> reports;
  for (const auto &name : passes) {
    reports.push_back(run_pass(name, module, options));
    if (options.verify_between_passes) {
      auto diags = verify::verify_module(module);
      if (verify::has_errors(diags))
        throw_error(ErrorKind::Type,
                    "pass '" + name + "' broke the module: " +
                        diags.front().message);
    }
  }
  return reports;
}

} // namespace qssa::opt

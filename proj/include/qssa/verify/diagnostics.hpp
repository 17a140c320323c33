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

#include "qssa/ir/types.hpp"
#include "qssa/support/error.hpp"

namespace qssa::verify {

enum class DiagKind {
  DoubleUse,        // qubit value consumed twice on one execution path
  EscapedLoopQubit, // qubit from outside an scf.for used in its body
  UnusedQubitLeak,  // qubit value defined but never consumed (warning)
  TypeError,        // signature or structural rule violated
};

enum class Severity { Error, Warning };

inline const char *diag_kind_name(DiagKind k) {
  switch (k) {
  case DiagKind::DoubleUse: return "DoubleUse";
  case DiagKind::EscapedLoopQubit: return "EscapedLoopQubit";
  case DiagKind::UnusedQubitLeak: return "UnusedQubitLeak";
  case DiagKind::TypeError: return "TypeError";
  }
  return "?";
}

struct Diagnostic {
  DiagKind kind = DiagKind::TypeError;
  Severity severity = Severity::Error;
  ir::ValueId value;              // offending value, when one exists
  std::string message;            // human-readable description
  std::vector<SourceLoc> sites;   // DoubleUse carries >= 2

  /// Render as `file:line: error: ...`.
  std::string str(const std::string &file = "<ir>") const {
    std::string out = file;
    if (!sites.empty() && sites.front().valid())
      out += ":" + std::to_string(sites.front().line);
    out += severity == Severity::Error ? ": error: " : ": warning: ";
    out += message;
    return out;
  }
};

inline bool has_errors(const std::vector<Diagnostic> &diags) {
  for (const auto &d : diags)
    if (d.severity == Severity::Error) return true;
  return false;
}

} // namespace qssa::verify

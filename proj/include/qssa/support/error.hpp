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
#include <stdexcept>
#include <string>

namespace qssa {

/// Source position, 1-based. line == 0 means "unknown".
struct SourceLoc {
  uint32_t line = 0;
  uint32_t col = 0;

  bool valid() const { return line != 0; }
  std::string str() const {
    if (!valid()) return "<unknown>";
    return std::to_string(line) + ":" + std::to_string(col);
  }
};

enum class ErrorKind {
  Syntax,         // malformed source text
  Resolution,     // undeclared name, bad index, arity mismatch
  Unsupported,    // recognized but out of the supported subset
  Type,           // IR type rule violated
  UnknownGate,    // gate name not in library or user definitions
  UnknownPass,    // pipeline references a pass that does not exist
  NotLowerable,   // IR cannot be expressed in OpenQASM 2.0
  TooLarge,       // simulation limits exceeded
  HasMeasurement, // unitary requested for a circuit with measurement
  BadTarget,      // simulator target index invalid
  ShapeMismatch,  // matrix dimensions disagree
  MalformedRegion,// region verifier met unsupported control flow
  CyclicCFG,      // flat-CFG verifier met a cycle
  Unbounded,      // metrics over a loop without constant trip count
};

inline const char *error_kind_name(ErrorKind k) {
  switch (k) {
  case ErrorKind::Syntax: return "SyntaxError";
  case ErrorKind::Resolution: return "ResolutionError";
  case ErrorKind::Unsupported: return "UnsupportedError";
  case ErrorKind::Type: return "TypeError";
  case ErrorKind::UnknownGate: return "UnknownGate";
  case ErrorKind::UnknownPass: return "UnknownPass";
  case ErrorKind::NotLowerable: return "NotLowerable";
  case ErrorKind::TooLarge: return "TooLarge";
  case ErrorKind::HasMeasurement: return "HasMeasurement";
  case ErrorKind::BadTarget: return "BadTarget";
  case ErrorKind::ShapeMismatch: return "ShapeMismatch";
  case ErrorKind::MalformedRegion: return "MalformedRegion";
  case ErrorKind::CyclicCFG: return "CyclicCFG";
  case ErrorKind::Unbounded: return "Unbounded";
  }
  return "Error";
}

/// All toolkit errors are thrown as `Error`; verifier findings are returned
/// as `Diagnostic` values instead (see verify/diagnostics.hpp).
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string message, SourceLoc loc = {})
      : std::runtime_error(format(kind, message, loc)), kind_(kind),
        loc_(loc), message_(std::move(message)) {}

  ErrorKind kind() const { return kind_; }
  SourceLoc loc() const { return loc_; }
  const std::string &message() const { return message_; }

private:
  static std::string format(ErrorKind kind, const std::string &msg,
                            SourceLoc loc) {
    std::string out;
    if (loc.valid()) out += loc.str() + ": ";
    out += error_kind_name(kind);
    out += ": ";
    out += msg;
    return out;
  }

  ErrorKind kind_;
  SourceLoc loc_;
  std::string message_;
};

[[noreturn]] inline void throw_error(ErrorKind kind, std::string message,
                                     SourceLoc loc = {}) {
  throw Error(kind, std::move(message), loc);
}

} // namespace qssa

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

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace qssa {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Shortest decimal form that parses back to the same double.
inline std::string format_double_exact(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  std::string s(buf);
  // Force a float-looking token so printers/parsers can tell ints apart.
  if (s.find_first_of(".eE") == std::string::npos &&
      s.find_first_of("in") == std::string::npos) // inf/nan
    s += ".0";
  return s;
}

/// Reduce an angle into [0, 2*pi).
inline double reduce_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0; // fmod rounding at the boundary
  return r;
}

/// Angle equality for rewriting: |a-b| <= 1e-12 after reduction mod 2*pi,
/// treating values near 0 and near 2*pi as equal.
inline bool angles_equal(double a, double b, double tol = 1e-12) {
  double d = std::fabs(reduce_angle(a) - reduce_angle(b));
  return d <= tol || std::fabs(d - kTwoPi) <= tol;
}

/// True if the angle is an integer multiple of 2*pi within tol.
inline bool angle_is_zero(double a, double tol = 1e-12) {
  return angles_equal(a, 0.0, tol);
}

} // namespace qssa

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
#include <vector>

#include "qssa/ir/ops.hpp"
#include "qssa/support/complex_matrix.hpp"
#include "qssa/support/error.hpp"
#include "qssa/support/numeric.hpp"

namespace qssa::ir {

/// U(theta, phi, lambda) in the OpenQASM u3 convention:
///   [[ cos(t/2),           -e^{i*l} sin(t/2)      ],
///    [ e^{i*p} sin(t/2),    e^{i*(p+l)} cos(t/2)  ]]
/// equal to Rz(phi)*Ry(theta)*Rz(lambda) up to global phase.
inline CMatrix u3_matrix(double theta, double phi, double lambda) {
  double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  Complex ei_p = std::polar(1.0, phi);
  Complex ei_l = std::polar(1.0, lambda);
  return CMatrix{{c, -ei_l * s}, {ei_p * s, ei_p * ei_l * c}};
}

/// Local unitary of a named gate kind. `angles` carries 1 value for
/// Rx/Ry/Rz, 3 for U, none otherwise. CNOT's local basis index uses
/// operand order as bit order: bit 0 = control, bit 1 = target.
inline CMatrix gate_unitary(OpKind kind, const std::vector<double> &angles) {
  const Complex i{0.0, 1.0};
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  switch (kind) {
  case OpKind::X: return CMatrix{{0, 1}, {1, 0}};
  case OpKind::Y: return CMatrix{{0, -i}, {i, 0}};
  case OpKind::Z: return CMatrix{{1, 0}, {0, -1}};
  case OpKind::H:
    return CMatrix{{inv_sqrt2, inv_sqrt2}, {inv_sqrt2, -inv_sqrt2}};
  case OpKind::S: return CMatrix{{1, 0}, {0, i}};
  case OpKind::Sdg: return CMatrix{{1, 0}, {0, -i}};
  case OpKind::T: return CMatrix{{1, 0}, {0, std::polar(1.0, kPi / 4)}};
  case OpKind::Tdg: return CMatrix{{1, 0}, {0, std::polar(1.0, -kPi / 4)}};
  case OpKind::Rx: {
    double c = std::cos(angles.at(0) / 2), s = std::sin(angles.at(0) / 2);
    return CMatrix{{c, -i * s}, {-i * s, c}};
  }
  case OpKind::Ry: {
    double c = std::cos(angles.at(0) / 2), s = std::sin(angles.at(0) / 2);
    return CMatrix{{c, -s}, {s, c}};
  }
  case OpKind::Rz: {
    Complex e = std::polar(1.0, angles.at(0) / 2);
    return CMatrix{{std::conj(e), 0}, {0, e}};
  }
  case OpKind::U:
    return u3_matrix(angles.at(0), angles.at(1), angles.at(2));
  case OpKind::CNOT:
    return CMatrix{{1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}, {0, 1, 0, 0}};
  default:
    throw_error(ErrorKind::Type,
                std::string("no unitary for ") + op_mnemonic(kind));
  }
}

/// Angles for a gate operation whose angles live in attributes. Returns
/// false when the op takes angle operands instead (runtime angles).
inline bool gate_attr_angles(const Operation &op, std::vector<double> &out) {
  out.clear();
  switch (op.kind) {
  case OpKind::Rx: case OpKind::Ry: case OpKind::Rz:
    if (!op.has_attr("angle")) return false;
    out.push_back(op.float_attr("angle"));
    return true;
  case OpKind::U:
    if (!op.has_attr("theta") || !op.has_attr("phi") ||
        !op.has_attr("lambda"))
      return false;
    out.push_back(op.float_attr("theta"));
    out.push_back(op.float_attr("phi"));
    out.push_back(op.float_attr("lambda"));
    return true;
  default:
    return true;
  }
}

struct ZYZAngles {
  double theta = 0.0;
  double phi = 0.0;
  double lambda = 0.0;
};

/// Euler angles such that u3_matrix(theta, phi, lambda) reproduces the given
/// 2x2 unitary up to global phase. Gimbal lock (sin(theta/2) or
/// cos(theta/2) ~ 0) fixes lambda = 0 and folds everything into phi.
inline ZYZAngles zyz_from_matrix(const CMatrix &u) {
  if (u.rows() != 2 || u.cols() != 2)
    throw_error(ErrorKind::ShapeMismatch, "ZYZ extraction needs a 2x2 matrix");
  constexpr double kLockTol = 1e-12;
  double a00 = std::abs(u(0, 0)), a10 = std::abs(u(1, 0));
  ZYZAngles out;
  out.theta = 2.0 * std::atan2(a10, a00);
  if (a10 <= kLockTol) {
    // Diagonal: u3(0, phi, 0) = diag(1, e^{i phi}) up to phase.
    out.theta = 0.0;
    out.phi = std::arg(u(1, 1) / u(0, 0));
    return out;
  }
  if (a00 <= kLockTol) {
    // Anti-diagonal: u3(pi, phi, 0) = [[0, -1], [e^{i phi}, 0]] up to phase.
    out.theta = kPi;
    out.phi = std::arg(u(1, 0) / -u(0, 1));
    return out;
  }
  Complex phase = u(0, 0) / a00;
  out.phi = std::arg(u(1, 0) / phase);
  out.lambda = std::arg(-u(0, 1) / phase);
  return out;
}

} // namespace qssa::ir

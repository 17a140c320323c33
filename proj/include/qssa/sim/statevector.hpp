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
#include <complex>
#include <cstdint>
#include <vector>

#include "qssa/ir/gates.hpp"
#include "qssa/ir/ops.hpp"
#include "qssa/support/complex_matrix.hpp"
#include "qssa/support/error.hpp"

namespace qssa::sim {

inline constexpr uint32_t kMaxQubits = 14;

/// Full statevector over n qubits. Qubit index 0 is the least-significant
/// bit of the amplitude index; that convention is fixed here and used by
/// every consumer (distribution keys, unitary embedding, lowering order).
class Statevector {
public:
  Statevector() : amps_(1, Complex{1.0, 0.0}) {}

  explicit Statevector(uint32_t n) : n_(n) {
    check_capacity(n);
    amps_.assign(size_t{1} << n, Complex{});
    amps_[0] = 1.0;
  }

  uint32_t num_qubits() const { return n_; }
  const std::vector<Complex> &amplitudes() const { return amps_; }
  std::vector<Complex> &amplitudes() { return amps_; }

  /// Tensor `k` fresh |0> qubits on as the new high-order indices.
  void add_qubits(uint32_t k) {
    check_capacity(n_ + k);
    amps_.resize(size_t{1} << (n_ + k), Complex{});
    n_ += k;
  }

  double norm_sq() const {
    double s = 0.0;
    for (const auto &a : amps_) s += std::norm(a);
    return s;
  }

  void apply_1q(const CMatrix &m, uint32_t target) {
    check_target(target);
    size_t bit = size_t{1} << target;
    Complex m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0), m11 = m(1, 1);
    for (size_t base = 0; base < amps_.size(); ++base) {
      if (base & bit) continue;
      Complex a0 = amps_[base], a1 = amps_[base | bit];
      amps_[base] = m00 * a0 + m01 * a1;
      amps_[base | bit] = m10 * a0 + m11 * a1;
    }
  }

  void apply_cnot(uint32_t control, uint32_t target) {
    check_target(control);
    check_target(target);
    if (control == target)
      throw_error(ErrorKind::BadTarget, "CNOT control equals target");
    size_t cbit = size_t{1} << control, tbit = size_t{1} << target;
    for (size_t i = 0; i < amps_.size(); ++i)
      if ((i & cbit) && !(i & tbit)) std::swap(amps_[i], amps_[i | tbit]);
  }

  /// Generic k-qubit matrix application; local basis index bit j comes from
  /// targets[j].
  void apply_matrix(const CMatrix &m, const std::vector<uint32_t> &targets) {
    uint32_t k = static_cast<uint32_t>(targets.size());
    size_t dim = size_t{1} << k;
    if (m.rows() != dim || m.cols() != dim)
      throw_error(ErrorKind::ShapeMismatch, "gate matrix size mismatch");
    for (size_t i = 0; i < targets.size(); ++i) {
      check_target(targets[i]);
      for (size_t j = i + 1; j < targets.size(); ++j)
        if (targets[i] == targets[j])
          throw_error(ErrorKind::BadTarget, "duplicate gate target");
    }
    std::vector<size_t> bits(k);
    for (uint32_t j = 0; j < k; ++j) bits[j] = size_t{1} << targets[j];
    size_t mask = 0;
    for (size_t b : bits) mask |= b;
    std::vector<Complex> local(dim);
    for (size_t base = 0; base < amps_.size(); ++base) {
      if (base & mask) continue;
      for (size_t l = 0; l < dim; ++l) {
        size_t idx = base;
        for (uint32_t j = 0; j < k; ++j)
          if (l & (size_t{1} << j)) idx |= bits[j];
        local[l] = amps_[idx];
      }
      for (size_t r = 0; r < dim; ++r) {
        Complex acc{};
        for (size_t c = 0; c < dim; ++c) acc += m(r, c) * local[c];
        size_t idx = base;
        for (uint32_t j = 0; j < k; ++j)
          if (r & (size_t{1} << j)) idx |= bits[j];
        amps_[idx] = acc;
      }
    }
  }

  /// Probability that measuring `target` yields `bit`.
  double outcome_probability(uint32_t target, int bit) const {
    size_t tbit = size_t{1} << target;
    double p = 0.0;
    for (size_t i = 0; i < amps_.size(); ++i)
      if (((i & tbit) != 0) == (bit != 0)) p += std::norm(amps_[i]);
    return p;
  }

  /// Project onto `target == bit` and renormalize by the given probability.
  void collapse(uint32_t target, int bit, double probability) {
    size_t tbit = size_t{1} << target;
    double scale = 1.0 / std::sqrt(probability);
    for (size_t i = 0; i < amps_.size(); ++i) {
      if (((i & tbit) != 0) == (bit != 0))
        amps_[i] *= scale;
      else
        amps_[i] = Complex{};
    }
  }

private:
  void check_capacity(uint32_t n) const {
    if (n > kMaxQubits)
      throw_error(ErrorKind::TooLarge,
                  std::to_string(n) + " qubits exceeds the statevector cap (" +
                      std::to_string(kMaxQubits) + ")");
  }
  void check_target(uint32_t t) const {
    if (t >= n_)
      throw_error(ErrorKind::BadTarget,
                  "qubit index " + std::to_string(t) + " out of range");
  }

  uint32_t n_ = 0;
  std::vector<Complex> amps_;
};

/// Apply a named gate kind (fast paths for the fixed gates, matrix path for
/// parameterized ones). `angles` carries 1 value for rotations, 3 for U.
inline void apply_gate(Statevector &state, ir::OpKind kind,
                       const std::vector<double> &angles,
                       const std::vector<uint32_t> &targets) {
  using ir::OpKind;
  switch (kind) {
  case OpKind::CNOT:
    if (targets.size() != 2)
      throw_error(ErrorKind::BadTarget, "CNOT takes two targets");
    state.apply_cnot(targets[0], targets[1]);
    return;
  case OpKind::X: case OpKind::Y: case OpKind::Z: case OpKind::H:
  case OpKind::S: case OpKind::Sdg: case OpKind::T: case OpKind::Tdg:
  case OpKind::Rx: case OpKind::Ry: case OpKind::Rz: case OpKind::U:
    if (targets.size() != 1)
      throw_error(ErrorKind::BadTarget, "single-qubit gate takes one target");
    state.apply_1q(ir::gate_unitary(kind, angles), targets[0]);
    return;
  default:
    throw_error(ErrorKind::BadTarget,
                std::string("not a gate kind: ") + ir::op_mnemonic(kind));
  }
}

} // namespace qssa::sim

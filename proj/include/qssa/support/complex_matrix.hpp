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
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "qssa/support/error.hpp"

namespace qssa {

using Complex = std::complex<double>;

/// Dense row-major complex matrix. Sized for gate matrices (2^k x 2^k with
/// small k) and full-circuit unitaries up to 2^10.
class CMatrix {
public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  CMatrix(std::initializer_list<std::initializer_list<Complex>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto &row : init)
      for (const auto &v : row) data_.push_back(v);
  }

  static CMatrix identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  Complex &operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  const Complex &operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  bool operator==(const CMatrix &other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ &&
           data_ == other.data_;
  }

  CMatrix dagger() const {
    CMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c)
        out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  friend CMatrix operator*(const CMatrix &a, const CMatrix &b) {
    if (a.cols_ != b.rows_)
      throw_error(ErrorKind::ShapeMismatch,
                  "matrix product: " + std::to_string(a.rows_) + "x" +
                      std::to_string(a.cols_) + " * " +
                      std::to_string(b.rows_) + "x" + std::to_string(b.cols_));
    CMatrix out(a.rows_, b.cols_);
    for (std::size_t r = 0; r < a.rows_; ++r)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        Complex ark = a(r, k);
        if (ark == Complex{}) continue;
        for (std::size_t c = 0; c < b.cols_; ++c)
          out(r, c) += ark * b(k, c);
      }
    return out;
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// max_{ij} |a_ij - b_ij|
inline double max_norm_diff(const CMatrix &a, const CMatrix &b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw_error(ErrorKind::ShapeMismatch, "max_norm_diff on unequal shapes");
  double worst = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      worst = std::max(worst, std::abs(a(r, c) - b(r, c)));
  return worst;
}

/// ||U^dagger U - I||_max
inline double unitarity_defect(const CMatrix &u) {
  if (u.rows() != u.cols())
    throw_error(ErrorKind::ShapeMismatch, "unitarity check on non-square");
  return max_norm_diff(u.dagger() * u, CMatrix::identity(u.rows()));
}

/// True iff a unit complex c exists with ||A - cB||_max <= tol. The phase is
/// taken from the entry of B with the largest magnitude.
inline bool equiv_up_to_global_phase(const CMatrix &a, const CMatrix &b,
                                     double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw_error(ErrorKind::ShapeMismatch, "phase-equivalence on unequal shapes");
  std::size_t br = 0, bc = 0;
  double best = -1.0;
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c)
      if (std::abs(b(r, c)) > best) {
        best = std::abs(b(r, c));
        br = r;
        bc = c;
      }
  if (best <= 0.0) return max_norm_diff(a, b) <= tol;
  Complex ratio = a(br, bc) / b(br, bc);
  double mag = std::abs(ratio);
  Complex phase = mag > 0.0 ? ratio / mag : Complex{1.0, 0.0};
  double worst = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      worst = std::max(worst, std::abs(a(r, c) - phase * b(r, c)));
  return worst <= tol;
}

} // namespace qssa

/*
 * Copyright 2026 The recursic Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace recursic {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Dense row-major complex matrix. Sized for MIMO work (a few rows/cols).
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const Complex> diag);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const Complex> entries() const { return data_; }
  std::span<Complex> entries() { return data_; }

  ComplexMatrix adjoint() const;
  ComplexVector column(std::size_t c) const;
  void set_column(std::size_t c, std::span<const Complex> v);
  ComplexMatrix without_column(std::size_t c) const;

  double frobenius_norm() const;
  bool all_finite() const;

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

ComplexVector operator*(const ComplexMatrix& a, std::span<const Complex> x);

double squared_norm(std::span<const Complex> v);

/// Thin QR of a column-permuted matrix: a(:, perm) = q * r.
struct QrFactorization {
  ComplexMatrix q;                // m x n, orthonormal columns
  ComplexMatrix r;                // n x n upper triangular, real non-negative diagonal
  std::vector<std::size_t> perm;  // perm[j] = original column placed at position j
};

/// Modified Gram-Schmidt with one reorthogonalization pass, identity permutation.
/// Throws RankDeficientError when some |R_ii| < 1e-12 * ||a||_F.
QrFactorization qr_decompose(const ComplexMatrix& a);

/// Sorted QR of the extended matrix [h; sigma * I] ((N+L) x L). At every step
/// the remaining column with the smallest residual norm is eliminated first,
/// so the strongest layer ends up at position L (detected first). Ties go to
/// the lowest original column index.
QrFactorization sorted_qr_extended(const ComplexMatrix& h, double sigma);

/// Q1^H y where Q1 is the top y.size() rows of q. Works for both the plain
/// (N x L) and the extended ((N+L) x L) factor.
ComplexVector project_receive(const ComplexMatrix& q, std::span<const Complex> y);

/// ||y_tilde - r s||^2.
double residual_metric(std::span<const Complex> y_tilde, const ComplexMatrix& r,
                       std::span<const Complex> s);

/// Solves a x = b for square a (Gaussian elimination, partial pivoting).
/// Throws DegenerateLayerError if a is numerically singular.
ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix inverse(const ComplexMatrix& a);

}  // namespace recursic

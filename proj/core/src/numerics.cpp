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

#include "recursic/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "recursic/errors.hpp"

namespace recursic {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw DimensionError("matrix entry count " + std::to_string(data_.size()) +
                         " does not match " + std::to_string(rows) + "x" + std::to_string(cols));
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

ComplexVector ComplexMatrix::column(std::size_t c) const {
  ComplexVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

void ComplexMatrix::set_column(std::size_t c, std::span<const Complex> v) {
  if (v.size() != rows_) throw DimensionError("set_column: length mismatch");
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

ComplexMatrix ComplexMatrix::without_column(std::size_t c) const {
  ComplexMatrix out(rows_, cols_ - 1);
  for (std::size_t r = 0; r < rows_; ++r) {
    std::size_t k = 0;
    for (std::size_t j = 0; j < cols_; ++j) {
      if (j != c) out(r, k++) = (*this)(r, j);
    }
  }
  return out;
}

double ComplexMatrix::frobenius_norm() const { return std::sqrt(squared_norm(data_)); }

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product: inner dimension mismatch");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

namespace {

template <typename Op>
ComplexMatrix elementwise(const ComplexMatrix& a, const ComplexMatrix& b, Op op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("elementwise op: shape mismatch");
  ComplexMatrix out(a.rows(), a.cols());
  auto ea = a.entries();
  auto eb = b.entries();
  auto eo = out.entries();
  for (std::size_t i = 0; i < ea.size(); ++i) eo[i] = op(ea[i], eb[i]);
  return out;
}

}  // namespace

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  return elementwise(a, b, std::plus<>{});
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  return elementwise(a, b, std::minus<>{});
}

ComplexVector operator*(const ComplexMatrix& a, std::span<const Complex> x) {
  if (a.cols() != x.size()) throw DimensionError("matrix-vector product: length mismatch");
  ComplexVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
    out[i] = acc;
  }
  return out;
}

double squared_norm(std::span<const Complex> v) {
  double acc = 0.0;
  for (const auto& z : v) acc += std::norm(z);
  return acc;
}

namespace {

double column_norm2(const ComplexMatrix& m, std::size_t c) {
  double acc = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) acc += std::norm(m(r, c));
  return acc;
}

// <q_i, q_k> = q_i^H q_k
Complex column_dot(const ComplexMatrix& m, std::size_t i, std::size_t k) {
  Complex acc = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) acc += std::conj(m(r, i)) * m(r, k);
  return acc;
}

void column_axpy(ComplexMatrix& m, std::size_t dst, std::size_t src, Complex alpha) {
  for (std::size_t r = 0; r < m.rows(); ++r) m(r, dst) -= alpha * m(r, src);
}

void swap_columns(ComplexMatrix& m, std::size_t a, std::size_t b) {
  for (std::size_t r = 0; r < m.rows(); ++r) std::swap(m(r, a), m(r, b));
}

QrFactorization gram_schmidt(const ComplexMatrix& a, bool sorted) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (m == 0 || n == 0) throw DimensionError("QR: empty matrix");
  if (m < n) throw DimensionError("QR: needs rows >= cols");
  if (!a.all_finite()) throw DimensionError("QR: non-finite entries");

  const double threshold = 1e-12 * a.frobenius_norm();
  QrFactorization f{a, ComplexMatrix(n, n), std::vector<std::size_t>(n)};
  std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
  auto& q = f.q;
  auto& r = f.r;

  for (std::size_t i = 0; i < n; ++i) {
    if (sorted) {
      std::size_t best = i;
      double best_norm = column_norm2(q, i);
      for (std::size_t k = i + 1; k < n; ++k) {
        const double nk = column_norm2(q, k);
        if (nk < best_norm || (nk == best_norm && f.perm[k] < f.perm[best])) {
          best = k;
          best_norm = nk;
        }
      }
      if (best != i) {
        swap_columns(q, i, best);
        for (std::size_t j = 0; j < i; ++j) std::swap(r(j, i), r(j, best));
        std::swap(f.perm[i], f.perm[best]);
      }
    }

    // Reorthogonalization pass against the already finished columns.
    for (std::size_t j = 0; j < i; ++j) {
      const Complex c = column_dot(q, j, i);
      r(j, i) += c;
      column_axpy(q, i, j, c);
    }

    const double rii = std::sqrt(column_norm2(q, i));
    if (!(rii >= threshold) || rii == 0.0) {
      throw RankDeficientError("QR: column " + std::to_string(f.perm[i]) +
                               " is numerically dependent (|R_ii| = " + std::to_string(rii) + ")");
    }
    r(i, i) = rii;
    for (std::size_t row = 0; row < m; ++row) q(row, i) /= rii;

    for (std::size_t k = i + 1; k < n; ++k) {
      const Complex c = column_dot(q, i, k);
      r(i, k) = c;
      column_axpy(q, k, i, c);
    }
  }
  return f;
}

}  // namespace

QrFactorization qr_decompose(const ComplexMatrix& a) { return gram_schmidt(a, false); }

QrFactorization sorted_qr_extended(const ComplexMatrix& h, double sigma) {
  if (h.rows() == 0 || h.cols() == 0) throw DimensionError("sorted_qr_extended: empty channel");
  if (!(sigma >= 0.0)) throw DimensionError("sorted_qr_extended: sigma must be >= 0");
  const std::size_t n = h.rows();
  const std::size_t l = h.cols();
  ComplexMatrix ext(n + l, l);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < l; ++j) ext(i, j) = h(i, j);
  for (std::size_t j = 0; j < l; ++j) ext(n + j, j) = sigma;
  return gram_schmidt(ext, true);
}

ComplexVector project_receive(const ComplexMatrix& q, std::span<const Complex> y) {
  const std::size_t n = y.size();
  if (q.rows() != n && q.rows() != n + q.cols()) {
    throw DimensionError("project_receive: q has " + std::to_string(q.rows()) +
                         " rows, expected " + std::to_string(n) + " or " +
                         std::to_string(n + q.cols()));
  }
  ComplexVector out(q.cols());
  for (std::size_t j = 0; j < q.cols(); ++j) {
    Complex acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::conj(q(i, j)) * y[i];
    out[j] = acc;
  }
  return out;
}

double residual_metric(std::span<const Complex> y_tilde, const ComplexMatrix& r,
                       std::span<const Complex> s) {
  if (r.rows() != y_tilde.size() || r.cols() != s.size())
    throw DimensionError("residual_metric: dimension mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < r.rows(); ++i) {
    Complex e = y_tilde[i];
    for (std::size_t j = 0; j < r.cols(); ++j) e -= r(i, j) * s[j];
    acc += std::norm(e);
  }
  return acc;
}

ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.rows() != n) throw DimensionError("solve: shape mismatch");
  ComplexMatrix lu = a;
  ComplexMatrix x = b;
  const double scale = std::max(a.frobenius_norm(), 1e-300);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(lu(r, col)) > std::abs(lu(piv, col))) piv = r;
    if (std::abs(lu(piv, col)) <= 1e-14 * scale) throw DegenerateLayerError("solve: singular system");
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(piv, j), lu(col, j));
      for (std::size_t j = 0; j < x.cols(); ++j) std::swap(x(piv, j), x(col, j));
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const Complex f = lu(r, col) / lu(col, col);
      if (f == Complex{}) continue;
      for (std::size_t j = col; j < n; ++j) lu(r, j) -= f * lu(col, j);
      for (std::size_t j = 0; j < x.cols(); ++j) x(r, j) -= f * x(col, j);
    }
  }
  for (std::size_t col = n; col-- > 0;) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      Complex acc = x(col, j);
      for (std::size_t k = col + 1; k < n; ++k) acc -= lu(col, k) * x(k, j);
      x(col, j) = acc / lu(col, col);
    }
  }
  return x;
}

ComplexMatrix inverse(const ComplexMatrix& a) { return solve(a, ComplexMatrix::identity(a.rows())); }

}  // namespace recursic

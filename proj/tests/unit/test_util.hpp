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
#include <limits>
#include <vector>

#include "recursic/detection.hpp"
#include "recursic/modem.hpp"
#include "recursic/numerics.hpp"
#include "recursic/rng.hpp"

namespace recursic::testing {

inline ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  ComplexMatrix a(rows, cols);
  for (auto& z : a.entries()) z = rng.complex_normal();
  return a;
}

inline ComplexVector random_vector(std::size_t n, Rng& rng, double variance = 1.0) {
  ComplexVector v(n);
  for (auto& z : v) z = rng.complex_normal(variance);
  return v;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
  return m;
}

/// Random upper-triangular system with positive real diagonal, as produced
/// by the QR preprocessing.
inline TriangularSystem random_system(std::size_t layers, Rng& rng) {
  ComplexMatrix r(layers, layers);
  for (std::size_t i = 0; i < layers; ++i) {
    r(i, i) = 0.3 + rng.uniform();
    for (std::size_t j = i + 1; j < layers; ++j) r(i, j) = rng.complex_normal();
  }
  return TriangularSystem::in_order(random_vector(layers, rng), r);
}

/// Naive ||y - R s||^2 by explicit loops.
inline double naive_metric(const ComplexVector& y, const ComplexMatrix& r, const ComplexVector& s) {
  double total = 0.0;
  for (std::size_t i = 0; i < r.rows(); ++i) {
    Complex acc = y[i];
    for (std::size_t j = 0; j < r.cols(); ++j) acc -= r(i, j) * s[j];
    total += acc.real() * acc.real() + acc.imag() * acc.imag();
  }
  return total;
}

/// Brute-force enumeration with layer L-1 varying fastest (the opposite order
/// of the library), keeping the first strict minimum in library order.
struct BruteForce {
  std::vector<std::size_t> argmin;  // system order
  std::vector<double> llrs;         // system order, min(bit 1) - min(bit 0)
};

inline BruteForce brute_force(const TriangularSystem& sys, const Constellation& c) {
  const std::size_t l = sys.layers();
  const std::size_t m = c.order();
  const std::size_t b = c.bits_per_symbol();
  std::size_t total = 1;
  for (std::size_t i = 0; i < l; ++i) total *= m;

  std::vector<double> best0(l * b, std::numeric_limits<double>::infinity());
  std::vector<double> best1(l * b, std::numeric_limits<double>::infinity());
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_key = 0;
  std::vector<std::size_t> best_idx;
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<std::size_t> idx(l);
    std::size_t rest = code;
    for (std::size_t j = l; j-- > 0;) {
      idx[j] = rest % m;
      rest /= m;
    }
    ComplexVector s(l);
    for (std::size_t j = 0; j < l; ++j) s[j] = c.point(idx[j]);
    const double metric = naive_metric(sys.y_tilde, sys.r, s);
    std::size_t key = 0;  // library enumeration index (layer 0 fastest)
    for (std::size_t j = l; j-- > 0;) key = key * m + idx[j];
    if (metric < best || (metric == best && key < best_key)) {
      best = metric;
      best_key = key;
      best_idx = idx;
    }
    for (std::size_t j = 0; j < l; ++j)
      for (std::size_t bit = 0; bit < b; ++bit) {
        auto& slot = c.bit(idx[j], bit) ? best1[j * b + bit] : best0[j * b + bit];
        slot = std::min(slot, metric);
      }
  }
  BruteForce out{best_idx, std::vector<double>(l * b)};
  for (std::size_t i = 0; i < l * b; ++i) out.llrs[i] = best1[i] - best0[i];
  return out;
}

}  // namespace recursic::testing

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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "recursic/modem.hpp"
#include "recursic/numerics.hpp"

namespace recursic {

/// Upper-triangular detection problem y_tilde = R s' + noise, where
/// s'[j] is the symbol of original layer perm[j].
struct TriangularSystem {
  ComplexVector y_tilde;
  ComplexMatrix r;
  std::vector<std::size_t> perm;

  std::size_t layers() const { return r.cols(); }

  /// System with identity layer order.
  static TriangularSystem in_order(ComplexVector y_tilde, ComplexMatrix r);
};

/// Sorted QR of [h; sqrt(sigma2) I] and projection of y. sigma2 = 0 gives
/// the plain (unregularized) sorted QR.
TriangularSystem preprocess(const ComplexMatrix& h, std::span<const Complex> y, double sigma2);

/// All per-layer quantities are in original layer order. Bit and LLR
/// matrices are L x log2(M), row-major. LLR sign: positive means bit 0 is
/// more likely.
struct DetectionResult {
  std::vector<std::size_t> symbol_indices;
  ComplexVector hard_symbols;
  std::vector<Bit> hard_bits;
  std::vector<double> llrs;               // empty for hard-only detectors
  std::vector<std::uint8_t> fallback;     // per LLR, 1 when a fallback counterhypothesis was used
  std::size_t block_evaluations = 0;
  std::size_t fallback_count = 0;

  bool has_llrs() const { return !llrs.empty(); }
};

/// Fills symbols and bits from per-layer indices given in system order.
DetectionResult make_hard_result(const Constellation& c, std::span<const std::size_t> system_indices,
                                 std::span<const std::size_t> perm);

/// Reorders an L x B row-major matrix from system order to original order.
template <typename T>
std::vector<T> to_original_order(std::span<const T> system_rows, std::size_t row_len,
                                 std::span<const std::size_t> perm) {
  std::vector<T> out(system_rows.size());
  for (std::size_t j = 0; j < perm.size(); ++j)
    for (std::size_t b = 0; b < row_len; ++b) out[perm[j] * row_len + b] = system_rows[j * row_len + b];
  return out;
}

}  // namespace recursic

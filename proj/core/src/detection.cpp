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

#include "recursic/detection.hpp"

#include <cmath>
#include <numeric>

#include "recursic/errors.hpp"

namespace recursic {

TriangularSystem TriangularSystem::in_order(ComplexVector y_tilde, ComplexMatrix r) {
  if (r.rows() != r.cols() || y_tilde.size() != r.rows())
    throw DimensionError("triangular system: dimension mismatch");
  std::vector<std::size_t> perm(r.cols());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  return {std::move(y_tilde), std::move(r), std::move(perm)};
}

TriangularSystem preprocess(const ComplexMatrix& h, std::span<const Complex> y, double sigma2) {
  if (y.size() != h.rows()) throw DimensionError("preprocess: y length does not match H rows");
  QrFactorization f = sorted_qr_extended(h, std::sqrt(sigma2));
  ComplexVector yt = project_receive(f.q, y);
  return {std::move(yt), std::move(f.r), std::move(f.perm)};
}

DetectionResult make_hard_result(const Constellation& c, std::span<const std::size_t> system_indices,
                                 std::span<const std::size_t> perm) {
  const std::size_t l = system_indices.size();
  if (perm.size() != l) throw DimensionError("make_hard_result: permutation length mismatch");
  const std::size_t bps = c.bits_per_symbol();
  DetectionResult out;
  out.symbol_indices.resize(l);
  out.hard_symbols.resize(l);
  out.hard_bits.resize(l * bps);
  for (std::size_t j = 0; j < l; ++j) {
    const std::size_t layer = perm[j];
    const std::size_t idx = system_indices[j];
    out.symbol_indices[layer] = idx;
    out.hard_symbols[layer] = c.point(idx);
    for (std::size_t b = 0; b < bps; ++b) out.hard_bits[layer * bps + b] = c.bit(idx, b);
  }
  return out;
}

}  // namespace recursic

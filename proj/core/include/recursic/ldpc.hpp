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
#include <string>
#include <string_view>
#include <vector>

#include "recursic/modem.hpp"

namespace recursic {

/// Binary parity-check matrix stored as check -> variable and
/// variable -> check adjacency (0-based, sorted).
class ParityCheckMatrix {
 public:
  ParityCheckMatrix() = default;
  /// Throws ParseError on empty rows/columns, duplicates or out-of-range indices.
  ParityCheckMatrix(std::size_t n, std::vector<std::vector<std::size_t>> check_vars);

  static ParityCheckMatrix from_dense(const std::vector<std::vector<int>>& rows);

  std::size_t n() const { return n_; }
  std::size_t m() const { return check_vars_.size(); }
  std::size_t edges() const { return edges_; }
  const std::vector<std::vector<std::size_t>>& check_vars() const { return check_vars_; }
  const std::vector<std::vector<std::size_t>>& var_checks() const { return var_checks_; }

  bool satisfied(std::span<const Bit> word) const;
  std::vector<std::vector<int>> to_dense() const;

  friend bool operator==(const ParityCheckMatrix& a, const ParityCheckMatrix& b) {
    return a.n_ == b.n_ && a.check_vars_ == b.check_vars_;
  }

 private:
  std::size_t n_ = 0;
  std::size_t edges_ = 0;
  std::vector<std::vector<std::size_t>> check_vars_;
  std::vector<std::vector<std::size_t>> var_checks_;
};

/// MacKay alist: "n m", "max_col_deg max_row_deg", column degrees, row
/// degrees, then n column lists and m row lists of 1-based indices. Zero
/// padding of the lists is accepted and ignored.
ParityCheckMatrix parse_alist(std::string_view text);
ParityCheckMatrix load_alist(const std::string& path);
/// Writes the zero-padded form.
std::string to_alist(const ParityCheckMatrix& hm);

/// Random (dv, dc)-regular matrix from a socket permutation, rejecting
/// repeated edges. n * dv must be divisible by dc.
ParityCheckMatrix make_regular_code(std::size_t n, std::size_t dv, std::size_t dc, std::uint64_t seed);

/// Systematic encoder from GF(2) elimination of H with column pivoting.
class LdpcEncoder {
 public:
  /// Throws RankDeficientError if H does not have full row rank.
  explicit LdpcEncoder(const ParityCheckMatrix& hm);

  std::size_t n() const { return n_; }
  std::size_t k() const { return info_positions_.size(); }
  const std::vector<std::size_t>& info_positions() const { return info_positions_; }

  std::vector<Bit> encode(std::span<const Bit> info) const;
  std::vector<Bit> extract_info(std::span<const Bit> codeword) const;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> info_positions_;
  std::vector<std::size_t> parity_positions_;   // one per pivot row
  std::vector<std::vector<std::size_t>> parity_taps_;  // info indices feeding each parity bit
};

std::vector<Bit> encode(const ParityCheckMatrix& hm, std::span<const Bit> info);

struct DecodeResult {
  std::vector<Bit> bits;
  bool converged = false;
  std::size_t iterations = 0;
};

/// Normalized min-sum, flooding schedule. Input LLRs are positive for bit 0.
/// Stops as soon as the hard decision has zero syndrome (checked before the
/// first iteration too).
DecodeResult decode_min_sum(const ParityCheckMatrix& hm, std::span<const double> llrs,
                            std::size_t max_iters = 25, double norm_factor = 0.75);

/// Check-node messages for one check given its incoming variable messages:
/// out_e = norm * prod_{e' != e} sign(in_e') * min_{e' != e} |in_e'|.
std::vector<double> check_node_update(std::span<const double> incoming, double norm_factor);

}  // namespace recursic

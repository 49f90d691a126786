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
#include <cstdint>
#include <span>
#include <vector>

namespace recursic {

using Bit = std::uint8_t;

/// Square M-QAM with independent per-axis Gray labels, I bits first, unit
/// average energy. Point index i carries the label whose big-endian bit
/// string is the binary representation of i, so index and label coincide.
class Constellation {
 public:
  struct Nearest {
    std::size_t index;
    std::complex<double> point;
  };

  std::size_t order() const { return points_.size(); }
  std::size_t bits_per_symbol() const { return bits_; }
  std::span<const std::complex<double>> points() const { return points_; }
  std::complex<double> point(std::size_t index) const { return points_[index]; }

  /// Bit b (0 = first/most significant) of the label at index.
  Bit bit(std::size_t index, std::size_t b) const {
    return static_cast<Bit>((index >> (bits_ - 1 - b)) & 1u);
  }

  std::vector<Bit> symbol_to_bits(std::size_t index) const;
  std::size_t index_of(std::span<const Bit> bits) const;
  std::complex<double> bits_to_symbol(std::span<const Bit> bits) const;

  /// argmin_i |z - point_i|, ties to the lowest index. Per-axis slicing.
  Nearest nearest_point(std::complex<double> z) const;

  /// Indices whose bit b equals v.
  std::span<const std::size_t> indices_with_bit(std::size_t b, Bit v) const {
    return by_bit_[2 * b + v];
  }

 private:
  friend Constellation make_qam(std::size_t m);

  std::size_t axis_slice(double x) const;

  std::size_t bits_ = 0;
  std::size_t levels_ = 0;        // per axis
  double scale_ = 1.0;            // 1 / sqrt(E_norm)
  std::vector<std::complex<double>> points_;
  std::vector<double> level_amp_;       // amplitude of level j (ascending)
  std::vector<std::size_t> level_gray_;  // Gray label of level j
  std::vector<std::vector<std::size_t>> by_bit_;
};

/// m in {4, 16, 64}; throws ConfigError otherwise.
Constellation make_qam(std::size_t m);

}  // namespace recursic

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

#include "recursic/modem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "recursic/errors.hpp"

namespace recursic {

Constellation make_qam(std::size_t m) {
  std::size_t levels = 0;
  double energy = 0.0;
  switch (m) {
    case 4: levels = 2; energy = 2.0; break;
    case 16: levels = 4; energy = 10.0; break;
    case 64: levels = 8; energy = 42.0; break;
    default: throw ConfigError("unsupported modulation order " + std::to_string(m));
  }
  Constellation c;
  c.levels_ = levels;
  c.bits_ = static_cast<std::size_t>(std::lround(std::log2(static_cast<double>(m))));
  c.scale_ = 1.0 / std::sqrt(energy);
  const std::size_t half = c.bits_ / 2;

  c.level_amp_.resize(levels);
  c.level_gray_.resize(levels);
  std::vector<std::size_t> level_of_gray(levels);
  for (std::size_t j = 0; j < levels; ++j) {
    c.level_amp_[j] = (2.0 * static_cast<double>(j) - static_cast<double>(levels - 1)) * c.scale_;
    c.level_gray_[j] = j ^ (j >> 1);
    level_of_gray[c.level_gray_[j]] = j;
  }

  c.points_.resize(m);
  for (std::size_t idx = 0; idx < m; ++idx) {
    const std::size_t gi = idx >> half;
    const std::size_t gq = idx & ((std::size_t{1} << half) - 1);
    c.points_[idx] = {c.level_amp_[level_of_gray[gi]], c.level_amp_[level_of_gray[gq]]};
  }

  c.by_bit_.resize(2 * c.bits_);
  for (std::size_t b = 0; b < c.bits_; ++b)
    for (std::size_t idx = 0; idx < m; ++idx) c.by_bit_[2 * b + c.bit(idx, b)].push_back(idx);
  return c;
}

std::vector<Bit> Constellation::symbol_to_bits(std::size_t index) const {
  if (index >= order()) throw DimensionError("symbol index out of range");
  std::vector<Bit> out(bits_);
  for (std::size_t b = 0; b < bits_; ++b) out[b] = bit(index, b);
  return out;
}

std::size_t Constellation::index_of(std::span<const Bit> bits) const {
  if (bits.size() != bits_) {
    throw DimensionError("expected " + std::to_string(bits_) + " bits, got " +
                         std::to_string(bits.size()));
  }
  std::size_t idx = 0;
  for (Bit b : bits) idx = (idx << 1) | (b & 1u);
  return idx;
}

std::complex<double> Constellation::bits_to_symbol(std::span<const Bit> bits) const {
  return points_[index_of(bits)];
}

std::size_t Constellation::axis_slice(double x) const {
  const double t = (x / scale_ + static_cast<double>(levels_ - 1)) / 2.0;
  long j = std::lround(t);
  j = std::clamp(j, 0L, static_cast<long>(levels_) - 1);
  auto best = static_cast<std::size_t>(j);
  double best_d = (x - level_amp_[best]) * (x - level_amp_[best]);
  for (long nb : {j - 1, j + 1}) {
    if (nb < 0 || nb >= static_cast<long>(levels_)) continue;
    const auto k = static_cast<std::size_t>(nb);
    const double d = (x - level_amp_[k]) * (x - level_amp_[k]);
    if (d < best_d || (d == best_d && level_gray_[k] < level_gray_[best])) {
      best = k;
      best_d = d;
    }
  }
  return level_gray_[best];
}

Constellation::Nearest Constellation::nearest_point(std::complex<double> z) const {
  const std::size_t half = bits_ / 2;
  const std::size_t idx = (axis_slice(z.real()) << half) | axis_slice(z.imag());
  return {idx, points_[idx]};
}

}  // namespace recursic

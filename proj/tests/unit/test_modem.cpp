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

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "recursic/errors.hpp"
#include "recursic/modem.hpp"
#include "recursic/rng.hpp"

namespace recursic {
namespace {

class QamTest : public ::testing::TestWithParam<std::size_t> {};

TEST_P(QamTest, UnitAverageEnergy) {
  const auto c = make_qam(GetParam());
  double e = 0.0;
  for (auto p : c.points()) e += std::norm(p);
  EXPECT_NEAR(e / static_cast<double>(c.order()), 1.0, 1e-12);
}

TEST_P(QamTest, RoundTripAllLabels) {
  const auto c = make_qam(GetParam());
  std::set<std::pair<double, double>> seen;
  for (std::size_t i = 0; i < c.order(); ++i) {
    const auto bits = c.symbol_to_bits(i);
    ASSERT_EQ(bits.size(), c.bits_per_symbol());
    EXPECT_EQ(c.index_of(bits), i);
    const auto p = c.bits_to_symbol(bits);
    EXPECT_EQ(p, c.point(i));
    seen.insert({p.real(), p.imag()});
  }
  EXPECT_EQ(seen.size(), c.order());
}

TEST_P(QamTest, GrayNeighboursDifferInOneAxisStep) {
  const auto c = make_qam(GetParam());
  const double step = 2.0 / std::sqrt(2.0 * (static_cast<double>(c.order()) - 1.0) / 3.0);
  for (std::size_t i = 0; i < c.order(); ++i) {
    for (std::size_t b = 0; b < c.bits_per_symbol(); ++b) {
      auto bits = c.symbol_to_bits(i);
      bits[b] ^= 1u;
      const auto d = c.bits_to_symbol(bits) - c.point(i);
      // One axis unchanged, the other moved by a whole number of steps.
      EXPECT_TRUE(std::abs(d.real()) < 1e-12 || std::abs(d.imag()) < 1e-12);
    }
    // Axis-adjacent points differ in exactly one bit.
    for (std::size_t j = 0; j < c.order(); ++j) {
      const auto d = c.point(j) - c.point(i);
      const bool adjacent = (std::abs(std::abs(d.real()) - step) < 1e-9 && std::abs(d.imag()) < 1e-9) ||
                            (std::abs(std::abs(d.imag()) - step) < 1e-9 && std::abs(d.real()) < 1e-9);
      if (!adjacent) continue;
      std::size_t diff = 0;
      for (std::size_t b = 0; b < c.bits_per_symbol(); ++b) diff += c.bit(i, b) != c.bit(j, b);
      EXPECT_EQ(diff, 1u);
    }
  }
}

TEST_P(QamTest, NearestPointMatchesLinearScan) {
  const auto c = make_qam(GetParam());
  Rng rng(GetParam());
  for (int trial = 0; trial < 10000; ++trial) {
    const std::complex<double> z(rng.uniform(-1.6, 1.6), rng.uniform(-1.6, 1.6));
    std::size_t best = 0;
    for (std::size_t i = 1; i < c.order(); ++i)
      if (std::norm(z - c.point(i)) < std::norm(z - c.point(best))) best = i;
    ASSERT_EQ(c.nearest_point(z).index, best);
  }
  for (std::size_t i = 0; i < c.order(); ++i) EXPECT_EQ(c.nearest_point(c.point(i)).index, i);
}

TEST_P(QamTest, BitPartitions) {
  const auto c = make_qam(GetParam());
  for (std::size_t b = 0; b < c.bits_per_symbol(); ++b) {
    EXPECT_EQ(c.indices_with_bit(b, 0).size(), c.order() / 2);
    for (auto i : c.indices_with_bit(b, 1)) EXPECT_EQ(c.bit(i, b), 1u);
  }
}

INSTANTIATE_TEST_SUITE_P(Orders, QamTest, ::testing::Values(4, 16, 64));

TEST(Qam, QpskPoints) {
  const auto c = make_qam(4);
  for (auto p : c.points()) {
    EXPECT_NEAR(std::abs(p.real()), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(std::abs(p.imag()), 1.0 / std::sqrt(2.0), 1e-15);
  }
}

TEST(Qam, SixteenQamLevels) {
  const auto c = make_qam(16);
  for (auto p : c.points()) {
    for (double v : {p.real(), p.imag()}) {
      const double a = std::abs(v) * std::sqrt(10.0);
      EXPECT_TRUE(std::abs(a - 1.0) < 1e-12 || std::abs(a - 3.0) < 1e-12);
    }
  }
}

TEST(Qam, OriginTieGoesToLowestInnerIndex) {
  const auto c = make_qam(16);
  double inner = 1e9;
  for (auto p : c.points()) inner = std::min(inner, std::abs(p));
  std::size_t expected = c.order();
  for (std::size_t i = 0; i < c.order(); ++i)
    if (std::abs(std::abs(c.point(i)) - inner) < 1e-12) {
      expected = i;
      break;
    }
  EXPECT_EQ(c.nearest_point({0.0, 0.0}).index, expected);
}

TEST(Qam, Errors) {
  EXPECT_THROW(make_qam(8), ConfigError);
  const auto c = make_qam(16);
  const std::vector<Bit> short_bits{0, 1};
  EXPECT_THROW(c.bits_to_symbol(short_bits), DimensionError);
}

}  // namespace
}  // namespace recursic

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

#include "recursic/channel.hpp"
#include "recursic/classic.hpp"
#include "recursic/errors.hpp"
#include "recursic/harness.hpp"
#include "test_util.hpp"

namespace recursic {
namespace {

using testing::brute_force;
using testing::random_system;

TEST(MlExhaustive, NoiselessRecoversSymbols) {
  const auto c = make_qam(16);
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    auto sys = random_system(2, rng);
    const std::vector<std::size_t> idx{rng.below(16), rng.below(16)};
    const ComplexVector s{c.point(idx[0]), c.point(idx[1])};
    sys.y_tilde = sys.r * std::span<const Complex>(s);
    EXPECT_EQ(detect_ml_exhaustive(sys, c).symbol_indices, idx);
  }
}

TEST(MlExhaustive, ScalarQpsk) {
  const auto c = make_qam(4);
  const auto sys = TriangularSystem::in_order({Complex(0.9, 0.8)}, ComplexMatrix::identity(1));
  const auto r = detect_ml_exhaustive(sys, c);
  EXPECT_NEAR(std::abs(r.hard_symbols[0] - Complex(1, 1) / std::sqrt(2.0)), 0.0, 1e-15);
}

TEST(MlExhaustive, MatchesReverseOrderBruteForce) {
  const auto c = make_qam(16);
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const auto sys = random_system(2, rng);
    EXPECT_EQ(detect_ml_exhaustive(sys, c).symbol_indices, brute_force(sys, c).argmin);
  }
}

TEST(MlExhaustive, PermutationMapsBack) {
  // Solving the same problem with the columns of R reordered (and the
  // system re-triangularized) gives the same original-order decision.
  const auto c = make_qam(4);
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto h = testing::random_matrix(3, 2, rng);
    const auto y = testing::random_vector(3, rng);
    const auto sys = preprocess(h, y, 0.0);
    ComplexMatrix swapped(3, 2);
    swapped.set_column(0, h.column(1));
    swapped.set_column(1, h.column(0));
    auto sys2 = preprocess(swapped, y, 0.0);
    const auto a = detect_ml_exhaustive(sys, c).symbol_indices;
    const auto b = detect_ml_exhaustive(sys2, c).symbol_indices;
    EXPECT_EQ(a[0], b[1]);
    EXPECT_EQ(a[1], b[0]);
  }
}

TEST(MlExhaustive, SearchGuard) {
  const auto c = make_qam(64);
  Rng rng(4);
  const auto sys = random_system(5, rng);
  EXPECT_THROW(detect_ml_exhaustive(sys, c), ConfigError);
  EXPECT_THROW(llr_maxlog_exhaustive(sys, c), ConfigError);
}

TEST(MaxLogExhaustive, EquidistantIsZero) {
  const auto c = make_qam(4);
  const auto sys = TriangularSystem::in_order({Complex(0, 0)}, ComplexMatrix::identity(1));
  for (double v : llr_maxlog_exhaustive(sys, c)) EXPECT_EQ(v, 0.0);
}

TEST(MaxLogExhaustive, NoiselessSignPattern) {
  const auto c = make_qam(16);
  Rng rng(5);
  auto sys = random_system(2, rng);
  const std::vector<std::size_t> idx{7, 12};
  const ComplexVector s{c.point(7), c.point(12)};
  sys.y_tilde = sys.r * std::span<const Complex>(s);
  const auto llr = llr_maxlog_exhaustive(sys, c);
  for (std::size_t l = 0; l < 2; ++l)
    for (std::size_t b = 0; b < 4; ++b) EXPECT_EQ(llr[l * 4 + b] > 0.0, c.bit(idx[l], b) == 0);
}

TEST(MaxLogExhaustive, MatchesDualEnumeration) {
  Rng rng(6);
  for (std::size_t m : {4, 16}) {
    const auto c = make_qam(m);
    for (int trial = 0; trial < 100; ++trial) {
      const auto sys = random_system(2, rng);
      const auto llr = llr_maxlog_exhaustive(sys, c);
      const auto oracle = brute_force(sys, c).llrs;
      ASSERT_EQ(llr.size(), oracle.size());
      for (std::size_t i = 0; i < llr.size(); ++i) EXPECT_NEAR(llr[i], oracle[i], 1e-12);
    }
  }
}

TEST(MaxLogExhaustive, SignAgreesWithMlBits) {
  const auto c = make_qam(16);
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto h = testing::random_matrix(2, 2, rng);
    const auto y = testing::random_vector(2, rng);
    const auto r = detect_ml_maxlog(preprocess(h, y, 0.1), c);
    for (std::size_t i = 0; i < r.llrs.size(); ++i) {
      if (r.llrs[i] != 0.0) EXPECT_EQ(r.llrs[i] > 0.0, r.hard_bits[i] == 0);
    }
  }
}

TEST(Linear, MmseIdentityLimit) {
  const auto c = make_qam(16);
  const ComplexVector y{Complex(0.31, -0.2), Complex(-0.9, 0.95)};
  const auto st = linear_stage(ComplexMatrix::identity(2), y, 1e-12, LinearMode::kMmse);
  for (std::size_t l = 0; l < 2; ++l) EXPECT_NEAR(std::abs(st.estimate[l] - y[l]), 0.0, 1e-9);
  const auto r = detect_mmse(y, ComplexMatrix::identity(2), 1e-12, c);
  for (std::size_t l = 0; l < 2; ++l) EXPECT_EQ(r.symbol_indices[l], c.nearest_point(y[l]).index);
}

TEST(Linear, MmseUnitNoiseHandValues) {
  const ComplexVector y{Complex(1, 0), Complex(0, 2)};
  const auto st = linear_stage(ComplexMatrix::identity(2), y, 1.0, LinearMode::kMmse);
  for (std::size_t l = 0; l < 2; ++l) {
    EXPECT_NEAR(st.post_snr[l], 1.0, 1e-12);
    // Filter output y / 2 divided by the bias 1/2.
    EXPECT_NEAR(std::abs(st.estimate[l] - y[l]), 0.0, 1e-12);
  }
}

TEST(Linear, ZfPostSnr) {
  const std::vector<Complex> d{1.0, 3.0};
  const ComplexVector y{0.0, 0.0};
  const auto st = linear_stage(ComplexMatrix::diagonal(d), y, 0.5, LinearMode::kZf);
  EXPECT_NEAR(st.post_snr[0], 2.0, 1e-12);
  EXPECT_NEAR(st.post_snr[1], 18.0, 1e-12);
}

TEST(Linear, ScalarLlrIsGaussianMaxLog) {
  const auto c = make_qam(16);
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const Complex z = rng.complex_normal();
    const double gamma = 0.5 + 10 * rng.uniform();
    std::vector<double> out(4);
    scalar_maxlog_llrs(c, z, gamma, out);
    for (std::size_t b = 0; b < 4; ++b) {
      double d0 = 1e300, d1 = 1e300;
      for (std::size_t i = 0; i < 16; ++i) {
        const double d = std::norm(z - c.point(i));
        if (c.bit(i, b)) {
          d1 = std::min(d1, d);
        } else {
          d0 = std::min(d0, d);
        }
      }
      EXPECT_NEAR(out[b], gamma * (d1 - d0), 1e-9);
    }
  }
}

TEST(Sic, NoiselessDiagonal) {
  const auto c = make_qam(16);
  const std::vector<Complex> d{1.0, 3.0};
  const auto h = ComplexMatrix::diagonal(d);
  for (auto mode : {LinearMode::kZf, LinearMode::kMmse}) {
    for (std::size_t a = 0; a < 16; a += 5) {
      const ComplexVector s{c.point(a), c.point(15 - a)};
      const auto y = h * std::span<const Complex>(s);
      EXPECT_EQ(detect_sic(y, h, 1e-9, c, mode).symbol_indices, (std::vector<std::size_t>{a, 15 - a}));
    }
  }
}

TEST(Sic, StrongerLayerHasHigherPostSnr) {
  const std::vector<Complex> d{1.0, 3.0};
  const ComplexVector y{0.0, 0.0};
  const auto st = linear_stage(ComplexMatrix::diagonal(d), y, 0.1, LinearMode::kMmse);
  EXPECT_GT(st.post_snr[1], st.post_snr[0]);
}

TEST(Sic, SingleLayerMatchesLinear) {
  const auto c = make_qam(16);
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const auto h = testing::random_matrix(2, 1, rng);
    const auto y = testing::random_vector(2, rng);
    for (auto mode : {LinearMode::kZf, LinearMode::kMmse}) {
      const auto a = detect_sic(y, h, 0.1, c, mode);
      const auto b = detect_linear(y, h, 0.1, c, mode);
      EXPECT_EQ(a.symbol_indices, b.symbol_indices);
      EXPECT_EQ(a.llrs, b.llrs);
    }
  }
}

struct BerCount {
  std::uint64_t errors = 0;
  std::uint64_t bits = 0;
};

template <typename Detect>
BerCount monte_carlo(std::size_t m, double snr_db, std::size_t trials, std::uint64_t seed, Detect&& detect) {
  const auto c = make_qam(m);
  const ChannelModel model({}, 2, 2);
  BerCount out;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = Rng::stream(seed, 0, t);
    const auto use = draw_channel_use(model, c, snr_db, rng);
    const auto r = detect(use, c);
    for (std::size_t i = 0; i < use.bits.size(); ++i) out.errors += r.hard_bits[i] != use.bits[i];
    out.bits += use.bits.size();
  }
  return out;
}

TEST(Ordering, MmseWorseThanMlQpsk) {
  auto ml = monte_carlo(4, 10.0, 100000, 1, [](const ChannelUse& u, const Constellation& c) {
    return detect_ml_exhaustive(preprocess(u.h, u.y, 0.0), c);
  });
  auto mmse = monte_carlo(4, 10.0, 100000, 1, [](const ChannelUse& u, const Constellation& c) {
    return detect_mmse(u.y, u.h, u.sigma2, c);
  });
  EXPECT_GT(wilson_interval(mmse.errors, mmse.bits).low, wilson_interval(ml.errors, ml.bits).high);
}

TEST(Ordering, MmseSicNoWorseThanMmse16Qam) {
  auto sic = monte_carlo(16, 20.0, 100000, 2, [](const ChannelUse& u, const Constellation& c) {
    return detect_sic(u.y, u.h, u.sigma2, c, LinearMode::kMmse);
  });
  auto mmse = monte_carlo(16, 20.0, 100000, 2, [](const ChannelUse& u, const Constellation& c) {
    return detect_mmse(u.y, u.h, u.sigma2, c);
  });
  EXPECT_LE(wilson_interval(sic.errors, sic.bits).low, wilson_interval(mmse.errors, mmse.bits).high);
  EXPECT_LT(sic.errors, mmse.errors);
}

}  // namespace
}  // namespace recursic

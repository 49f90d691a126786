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
#include <nlohmann/json.hpp>

#include "recursic/errors.hpp"
#include "recursic/network.hpp"
#include "recursic/rng.hpp"

namespace recursic {
namespace {

TEST(Counts, ParametersMatchClosedForm) {
  EXPECT_EQ(count_parameters(16), 1136u);
  EXPECT_EQ(count_parameters(64), 1952u);
  for (std::size_t m : {4, 16, 64}) {
    const auto p = NetworkParams::zeros(m);
    std::size_t literal = 0;
    for (const auto& t : p.tensors()) literal += t.values->size();
    EXPECT_EQ(literal, count_parameters(m));
    EXPECT_EQ(p.parameter_count(), count_parameters(m));
  }
}

TEST(Counts, InstrumentedMacs) {
  Rng rng(1);
  for (std::size_t m : {16, 64}) {
    for (auto film : {FilmPlacement::kAfterFirstHidden, FilmPlacement::kAfterSecondHidden}) {
      const auto p = NetworkParams::random(m, rng, film);
      std::uint64_t macs = 0;
      block_forward(p, {0.3, -0.2}, 15.0, &macs);
      EXPECT_EQ(macs, count_macs(m));
    }
  }
  EXPECT_EQ(count_macs(16), 1072u);
}

TEST(Embedding, KnownValues) {
  const auto zero = snr_embedding(0.0);
  for (std::size_t i = 0; i < kEmbeddingWidth; ++i) EXPECT_EQ(zero[i], i % 2 == 0 ? 0.0 : 1.0);
  EXPECT_NEAR(snr_embedding(20.0)[0], 0.9129452507276277, 1e-15);
  EXPECT_NEAR(snr_embedding(20.0)[1], std::cos(20.0), 1e-15);
  EXPECT_NEAR(snr_embedding(20.0)[2], std::sin(20.0 / std::pow(10000.0, 2.0 / 16.0)), 1e-15);
  for (double s : {-50.0, 3.3, 1e4})
    for (double v : snr_embedding(s)) {
      EXPECT_LE(v, 1.0);
      EXPECT_GE(v, -1.0);
    }
}

TEST(BlockForward, ZeroWeightsAreUniform) {
  const auto p = NetworkParams::zeros(16);
  for (double v : block_forward(p, {0.5, 0.5}, 10.0)) EXPECT_NEAR(v, 1.0 / 16.0, 1e-15);
}

TEST(BlockForward, SimplexOutput) {
  Rng rng(2);
  const auto p = NetworkParams::random(64, rng);
  for (int trial = 0; trial < 100; ++trial) {
    const auto probs = block_forward(p, rng.complex_normal(), rng.uniform(0, 40));
    double sum = 0.0;
    for (double v : probs) {
      EXPECT_GT(v, 0.0);
      EXPECT_LT(v, 1.0);
      sum += v;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(BlockForward, OutputBiasShiftInvariance) {
  Rng rng(3);
  auto p = NetworkParams::random(16, rng);
  const auto before = block_forward(p, {0.1, -0.7}, 12.0);
  for (auto& b : p.b3) b += 3.25;
  const auto after = block_forward(p, {0.1, -0.7}, 12.0);
  for (std::size_t i = 0; i < 16; ++i) EXPECT_NEAR(before[i], after[i], 1e-12);
}

TEST(BlockForward, FilmModulatesHiddenActivation) {
  // With unit scale and zero shift from the embedding both placements reduce
  // to the plain two-layer network.
  Rng rng(4);
  auto a = NetworkParams::random(16, rng, FilmPlacement::kAfterFirstHidden);
  std::fill(a.we.begin(), a.we.end(), 0.0);
  for (std::size_t i = 0; i < kFilmWidth; ++i) a.be[i] = i < kHiddenWidth ? 1.0 : 0.0;
  auto b = a;
  b.film = FilmPlacement::kAfterSecondHidden;
  const auto pa = block_forward(a, {0.4, 0.2}, 20.0);
  const auto pb = block_forward(b, {0.4, 0.2}, 20.0);
  for (std::size_t i = 0; i < 16; ++i) EXPECT_NEAR(pa[i], pb[i], 1e-14);
}

TEST(BlockForward, RejectsNonFinite) {
  const auto p = NetworkParams::zeros(4);
  EXPECT_THROW(block_forward(p, {NAN, 0.0}, 10.0), DimensionError);
  EXPECT_THROW(block_forward(p, {0.0, 0.0}, INFINITY), DimensionError);
}

// Loss = sum_k c_k * logit_k for fixed c, so dLoss/dlogits = c.
double linear_logit_loss(const NetworkParams& p, std::complex<double> s, double snr, const std::vector<double>& c) {
  BlockCache cache;
  block_forward_cached(p, s, snr, cache);
  double loss = 0.0;
  for (std::size_t k = 0; k < p.order; ++k) loss += c[k] * cache.logits[k];
  return loss;
}

TEST(BlockBackward, MatchesFiniteDifferences) {
  Rng rng(5);
  for (auto film : {FilmPlacement::kAfterFirstHidden, FilmPlacement::kAfterSecondHidden}) {
    auto p = NetworkParams::random(16, rng, film);
    const std::complex<double> s(0.37, -0.52);
    const double snr = 17.0;
    std::vector<double> c(16);
    for (auto& v : c) v = rng.uniform(-1, 1);
    BlockCache cache;
    block_forward_cached(p, s, snr, cache);
    auto grad = NetworkParams::zeros(16, film);
    block_backward(p, cache, c, grad);
    auto pt = p.tensors();
    auto gt = grad.tensors();
    for (std::size_t t = 0; t < pt.size(); ++t) {
      for (std::size_t i = 0; i < pt[t].values->size(); ++i) {
        double& w = (*pt[t].values)[i];
        const double saved = w;
        w = saved + 1e-6;
        const double up = linear_logit_loss(p, s, snr, c);
        w = saved - 1e-6;
        const double down = linear_logit_loss(p, s, snr, c);
        w = saved;
        EXPECT_NEAR((*gt[t].values)[i], (up - down) / 2e-6, 1e-6) << pt[t].name << "[" << i << "]";
      }
    }
  }
}

TEST(WeightFile, RoundTripIsExact) {
  Rng rng(6);
  const auto p = NetworkParams::random(16, rng, FilmPlacement::kAfterSecondHidden);
  const auto q = weights_from_json(weights_to_json(p));
  EXPECT_EQ(q.order, 16u);
  EXPECT_EQ(q.film, FilmPlacement::kAfterSecondHidden);
  EXPECT_EQ(q.w1, p.w1);
  EXPECT_EQ(q.w3, p.w3);
  EXPECT_EQ(q.we, p.we);
  EXPECT_EQ(q.be, p.be);
}

TEST(WeightFile, RejectsBadDocuments) {
  Rng rng(7);
  const auto p = NetworkParams::random(4, rng);
  const auto good = nlohmann::json::parse(weights_to_json(p));

  auto bad_shape = good;
  bad_shape["tensors"]["w2"]["shape"] = {16, 15};
  EXPECT_THROW(weights_from_json(bad_shape.dump()), ParseError);

  auto short_values = good;
  short_values["tensors"]["b1"]["values"].erase(0);
  EXPECT_THROW(weights_from_json(short_values.dump()), ParseError);

  auto missing = good;
  missing["tensors"].erase("we");
  EXPECT_THROW(weights_from_json(missing.dump()), ParseError);

  auto wrong_order = good;
  wrong_order["modulation_order"] = 16;
  EXPECT_THROW(weights_from_json(wrong_order.dump()), ParseError);

  auto layout = good;
  layout["layout_version"] = 3;
  EXPECT_THROW(weights_from_json(layout.dump()), ParseError);

  EXPECT_THROW(weights_from_json("{"), ParseError);
}

}  // namespace
}  // namespace recursic

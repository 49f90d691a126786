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
#include "recursic/ldpc.hpp"
#include "recursic/rng.hpp"

namespace recursic {
namespace {

const std::string kDataDir = RECURSIC_DATA_DIR;

ParityCheckMatrix hamming() { return load_alist(kDataDir + "/codes/hamming_7_4.alist"); }

std::vector<std::vector<Bit>> codebook(const ParityCheckMatrix& hm) {
  std::vector<std::vector<Bit>> words;
  for (std::size_t w = 0; w < (std::size_t{1} << hm.n()); ++w) {
    std::vector<Bit> bits(hm.n());
    for (std::size_t i = 0; i < hm.n(); ++i) bits[i] = (w >> i) & 1u;
    if (hm.satisfied(bits)) words.push_back(bits);
  }
  return words;
}

std::vector<Bit> ml_decode(const std::vector<std::vector<Bit>>& book, const std::vector<double>& llrs) {
  double best = -INFINITY;
  std::vector<Bit> out;
  for (const auto& w : book) {
    double score = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) score += w[i] ? -llrs[i] : llrs[i];
    if (score > best) {
      best = score;
      out = w;
    }
  }
  return out;
}

TEST(Alist, ToyRoundTrip) {
  const auto hm = ParityCheckMatrix::from_dense({{1, 1, 0}, {0, 1, 1}});
  const auto text = to_alist(hm);
  EXPECT_EQ(text, "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 3\n");
  EXPECT_EQ(parse_alist(text), hm);
  EXPECT_EQ(parse_alist(text).to_dense(), (std::vector<std::vector<int>>{{1, 1, 0}, {0, 1, 1}}));
}

TEST(Alist, ShippedFixtureIsRegular) {
  const auto hm = load_alist(kDataDir + "/codes/regular_96_48.alist");
  EXPECT_EQ(hm.n(), 96u);
  EXPECT_EQ(hm.m(), 48u);
  for (const auto& row : hm.check_vars()) EXPECT_EQ(row.size(), 6u);
  for (const auto& col : hm.var_checks()) EXPECT_EQ(col.size(), 3u);
  EXPECT_EQ(LdpcEncoder(hm).k(), 48u);
  EXPECT_EQ(parse_alist(to_alist(hm)), hm);
}

TEST(Alist, MalformedDocuments) {
  const std::string good = "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 3\n";
  EXPECT_THROW(parse_alist(good.substr(0, good.size() - 6)), ParseError);  // truncated
  EXPECT_THROW(parse_alist(good + "1 2\n"), ParseError);                   // trailing
  EXPECT_THROW(parse_alist("3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 4\n"), ParseError);  // range
  EXPECT_THROW(parse_alist("3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n1 0\n1 2\n2 3\n"), ParseError);  // disagree
  EXPECT_THROW(parse_alist("3\n"), ParseError);
  EXPECT_THROW(parse_alist("3 2\n2 2\n1 2 3\n2 2\n1 0\n1 2\n2 0\n1 2\n2 3\n"), ParseError);  // degree
}

TEST(Matrix, RejectsInvalidAdjacency) {
  EXPECT_THROW(ParityCheckMatrix(3, {{0, 1}, {}}), ParseError);
  EXPECT_THROW(ParityCheckMatrix(3, {{0, 0}, {1, 2}}), ParseError);
  EXPECT_THROW(ParityCheckMatrix(3, {{0, 3}, {1, 2}}), ParseError);
  EXPECT_THROW(ParityCheckMatrix(3, {{0, 1}, {0, 1}}), ParseError);  // variable 2 unused
}

TEST(Encoder, ZeroInfoGivesZeroWord) {
  const auto hm = hamming();
  const LdpcEncoder enc(hm);
  EXPECT_EQ(enc.k(), 4u);
  const std::vector<Bit> zero(4, 0);
  EXPECT_EQ(enc.encode(zero), std::vector<Bit>(7, 0));
}

TEST(Encoder, MatchesCodebook) {
  const auto hm = hamming();
  const LdpcEncoder enc(hm);
  const auto book = codebook(hm);
  ASSERT_EQ(book.size(), 16u);
  std::set<std::vector<Bit>> produced;
  for (std::size_t w = 0; w < 16; ++w) {
    std::vector<Bit> info(4);
    for (std::size_t i = 0; i < 4; ++i) info[i] = (w >> i) & 1u;
    const auto cw = enc.encode(info);
    EXPECT_TRUE(hm.satisfied(cw));
    EXPECT_EQ(enc.extract_info(cw), info);
    produced.insert(cw);
  }
  EXPECT_EQ(produced, std::set<std::vector<Bit>>(book.begin(), book.end()));
}

TEST(Encoder, RandomWordsOnRegularCode) {
  const auto hm = load_alist(kDataDir + "/codes/regular_96_48.alist");
  const LdpcEncoder enc(hm);
  Rng rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Bit> info(enc.k());
    for (auto& b : info) b = static_cast<Bit>(rng.below(2));
    const auto cw = encode(hm, info);
    EXPECT_TRUE(hm.satisfied(cw));
    EXPECT_EQ(enc.extract_info(cw), info);
  }
}

TEST(Encoder, RankDeficientThrows) {
  const auto hm = ParityCheckMatrix::from_dense({{1, 1, 0, 0}, {0, 0, 1, 1}, {1, 1, 1, 1}});
  EXPECT_THROW(LdpcEncoder{hm}, RankDeficientError);
}

TEST(RegularCode, Degrees) {
  const auto hm = make_regular_code(48, 3, 6, 7);
  for (const auto& row : hm.check_vars()) EXPECT_EQ(row.size(), 6u);
  for (const auto& col : hm.var_checks()) EXPECT_EQ(col.size(), 3u);
  EXPECT_EQ(make_regular_code(48, 3, 6, 7), hm);
  EXPECT_THROW(make_regular_code(10, 3, 4, 1), ConfigError);
}

TEST(CheckNode, HandValues) {
  const std::vector<double> in{2.0, -3.0};
  const auto out = check_node_update(in, 0.75);
  EXPECT_DOUBLE_EQ(out[0], -2.25);
  EXPECT_DOUBLE_EQ(out[1], 1.5);
}

TEST(CheckNode, NormalizationShrinksMagnitudes) {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> in(6);
    for (auto& v : in) v = rng.uniform(-5, 5);
    const auto full = check_node_update(in, 1.0);
    const auto scaled = check_node_update(in, 0.75);
    for (std::size_t e = 0; e < in.size(); ++e) {
      EXPECT_GE(std::abs(full[e]), std::abs(scaled[e]));
      EXPECT_EQ(std::signbit(full[e]), std::signbit(scaled[e]));
    }
  }
}

TEST(MinSum, StrongAllZeroConvergesImmediately) {
  const auto hm = load_alist(kDataDir + "/codes/regular_96_48.alist");
  const std::vector<double> llrs(96, 8.0);
  const auto r = decode_min_sum(hm, llrs);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.iterations, 1u);
  EXPECT_EQ(r.bits, std::vector<Bit>(96, 0));
}

TEST(MinSum, ZeroSyndromeIsFixedPoint) {
  const auto hm = load_alist(kDataDir + "/codes/regular_96_48.alist");
  const LdpcEncoder enc(hm);
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Bit> info(enc.k());
    for (auto& b : info) b = static_cast<Bit>(rng.below(2));
    const auto cw = enc.encode(info);
    std::vector<double> llrs(96);
    for (std::size_t i = 0; i < 96; ++i) llrs[i] = (cw[i] ? -1.0 : 1.0) * rng.uniform(0.01, 3.0);
    const auto r = decode_min_sum(hm, llrs);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.iterations, 0u);
    EXPECT_EQ(r.bits, cw);
  }
}

TEST(MinSum, CorrectsSingleErrorOnHamming) {
  const auto hm = hamming();
  for (std::size_t flip = 0; flip < 7; ++flip) {
    std::vector<double> llrs(7, 2.0);
    llrs[flip] = -0.5;
    const auto r = decode_min_sum(hm, llrs);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.bits, std::vector<Bit>(7, 0));
  }
}

TEST(MinSum, AgreesWithCodebookMl) {
  const auto hm = hamming();
  const auto book = codebook(hm);
  const LdpcEncoder enc(hm);
  Rng rng(4);
  std::size_t agree = 0;
  const std::size_t trials = 1000;
  const double sigma = 0.5;
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<Bit> info(4);
    for (auto& b : info) b = static_cast<Bit>(rng.below(2));
    const auto cw = enc.encode(info);
    std::vector<double> llrs(7);
    for (std::size_t i = 0; i < 7; ++i) {
      const double x = (cw[i] ? -1.0 : 1.0) + sigma * rng.normal_pair()[0];
      llrs[i] = 2.0 * x / (sigma * sigma);
    }
    agree += decode_min_sum(hm, llrs).bits == ml_decode(book, llrs);
  }
  EXPECT_GE(agree, 990u);
}

TEST(MinSum, PermutationEquivariance) {
  const auto hm = load_alist(kDataDir + "/codes/regular_96_48.alist");
  Rng rng(5);
  std::vector<std::size_t> perm(96);
  for (std::size_t i = 0; i < 96; ++i) perm[i] = i;
  for (std::size_t i = 96; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
  std::vector<std::vector<std::size_t>> rows;
  for (const auto& row : hm.check_vars()) {
    std::vector<std::size_t> r;
    for (std::size_t v : row) r.push_back(perm[v]);
    rows.push_back(r);
  }
  const ParityCheckMatrix permuted(96, rows);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> llrs(96), moved(96);
    for (std::size_t i = 0; i < 96; ++i) {
      llrs[i] = 1.0 + rng.normal_pair()[0] * 1.2;
      moved[perm[i]] = llrs[i];
    }
    const auto a = decode_min_sum(hm, llrs);
    const auto b = decode_min_sum(permuted, moved);
    EXPECT_EQ(a.iterations, b.iterations);
    for (std::size_t i = 0; i < 96; ++i) EXPECT_EQ(a.bits[i], b.bits[perm[i]]);
  }
}

TEST(MinSum, DegreeOneCheckStaysFinite) {
  const auto hm = ParityCheckMatrix::from_dense({{1, 0, 0}, {1, 1, 1}});
  const std::vector<double> llrs{-0.3, 1.0, 1.0};
  const auto r = decode_min_sum(hm, llrs);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.bits, (std::vector<Bit>{0, 0, 0}));
}

TEST(MinSum, RejectsBadInput) {
  const auto hm = hamming();
  EXPECT_THROW(decode_min_sum(hm, std::vector<double>(6, 1.0)), DimensionError);
  EXPECT_THROW(decode_min_sum(hm, std::vector<double>(7, 1.0), 25, 0.0), ConfigError);
  std::vector<double> nan(7, 1.0);
  nan[2] = NAN;
  EXPECT_THROW(decode_min_sum(hm, nan), DimensionError);
}

}  // namespace
}  // namespace recursic

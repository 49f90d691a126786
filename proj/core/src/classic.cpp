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

#include "recursic/classic.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <utility>

#include "recursic/errors.hpp"

namespace recursic {

namespace {

constexpr double kMaxPostSnr = 1e12;

void check_search_space(const TriangularSystem& sys, const Constellation& c) {
  if (sys.r.rows() != sys.r.cols() || sys.y_tilde.size() != sys.r.rows() ||
      sys.perm.size() != sys.r.cols())
    throw DimensionError("exhaustive search: inconsistent system");
  const std::size_t bits = sys.layers() * c.bits_per_symbol();
  if (bits > kMaxExhaustiveBits) {
    throw ConfigError("exhaustive search over " + std::to_string(bits) +
                      " bits exceeds the guard of " + std::to_string(kMaxExhaustiveBits));
  }
}

// Visits every candidate in mixed-radix order (layer 0 fastest).
template <typename Visit>
void enumerate(const TriangularSystem& sys, const Constellation& c, Visit&& visit) {
  const std::size_t l = sys.layers();
  const std::size_t m = c.order();
  std::vector<std::size_t> idx(l, 0);
  ComplexVector s(l, c.point(0));
  while (true) {
    visit(std::as_const(idx), residual_metric(sys.y_tilde, sys.r, s));
    std::size_t j = 0;
    while (j < l) {
      if (++idx[j] < m) {
        s[j] = c.point(idx[j]);
        break;
      }
      idx[j] = 0;
      s[j] = c.point(0);
      ++j;
    }
    if (j == l) break;
  }
}

struct MaxlogAccumulator {
  std::vector<double> min0;
  std::vector<double> min1;
  std::vector<std::size_t> best;
  double best_metric = std::numeric_limits<double>::infinity();
};

MaxlogAccumulator run_maxlog(const TriangularSystem& sys, const Constellation& c) {
  const std::size_t l = sys.layers();
  const std::size_t bps = c.bits_per_symbol();
  constexpr double inf = std::numeric_limits<double>::infinity();
  MaxlogAccumulator acc{std::vector<double>(l * bps, inf), std::vector<double>(l * bps, inf),
                        std::vector<std::size_t>(l, 0)};
  enumerate(sys, c, [&](const std::vector<std::size_t>& idx, double metric) {
    if (metric < acc.best_metric) {
      acc.best_metric = metric;
      acc.best = idx;
    }
    for (std::size_t j = 0; j < l; ++j)
      for (std::size_t b = 0; b < bps; ++b) {
        auto& slot = c.bit(idx[j], b) ? acc.min1[j * bps + b] : acc.min0[j * bps + b];
        slot = std::min(slot, metric);
      }
  });
  return acc;
}

}  // namespace

DetectionResult detect_ml_exhaustive(const TriangularSystem& sys, const Constellation& c) {
  check_search_space(sys, c);
  std::vector<std::size_t> best(sys.layers(), 0);
  double best_metric = std::numeric_limits<double>::infinity();
  enumerate(sys, c, [&](const std::vector<std::size_t>& idx, double metric) {
    if (metric < best_metric) {
      best_metric = metric;
      best = idx;
    }
  });
  return make_hard_result(c, best, sys.perm);
}

std::vector<double> llr_maxlog_exhaustive(const TriangularSystem& sys, const Constellation& c) {
  return detect_ml_maxlog(sys, c).llrs;
}

DetectionResult detect_ml_maxlog(const TriangularSystem& sys, const Constellation& c) {
  check_search_space(sys, c);
  const MaxlogAccumulator acc = run_maxlog(sys, c);
  std::vector<double> llr(acc.min0.size());
  for (std::size_t i = 0; i < llr.size(); ++i) llr[i] = acc.min1[i] - acc.min0[i];
  DetectionResult out = make_hard_result(c, acc.best, sys.perm);
  out.llrs = to_original_order<double>(llr, c.bits_per_symbol(), sys.perm);
  out.fallback.assign(out.llrs.size(), 0);
  return out;
}

LinearStage linear_stage(const ComplexMatrix& h, std::span<const Complex> y, double sigma2,
                         LinearMode mode) {
  if (y.size() != h.rows()) throw DimensionError("linear equalizer: y length does not match H rows");
  const std::size_t l = h.cols();
  const ComplexMatrix hh = h.adjoint();
  ComplexMatrix gram = hh * h;
  if (mode == LinearMode::kMmse)
    for (std::size_t i = 0; i < l; ++i) gram(i, i) += sigma2;
  const ComplexMatrix p = inverse(gram);
  const ComplexVector x = p * std::span<const Complex>(hh * y);

  LinearStage out{ComplexVector(l), std::vector<double>(l)};
  for (std::size_t i = 0; i < l; ++i) {
    const double pii = p(i, i).real();
    if (mode == LinearMode::kZf) {
      out.estimate[i] = x[i];
      out.post_snr[i] = sigma2 > 0.0 ? std::min(1.0 / (sigma2 * pii), kMaxPostSnr) : kMaxPostSnr;
    } else {
      const double mu = 1.0 - sigma2 * pii;
      if (!(mu > 0.0)) throw DegenerateLayerError("MMSE: non-positive bias for layer " + std::to_string(i));
      out.estimate[i] = x[i] / mu;
      const double residual = sigma2 * pii;
      out.post_snr[i] = residual > 0.0 ? std::min(mu / residual, kMaxPostSnr) : kMaxPostSnr;
    }
  }
  return out;
}

void scalar_maxlog_llrs(const Constellation& c, Complex z, double gamma, std::span<double> out) {
  const std::size_t bps = c.bits_per_symbol();
  if (out.size() != bps) throw DimensionError("scalar_maxlog_llrs: output length mismatch");
  for (std::size_t b = 0; b < bps; ++b) {
    double d[2] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    for (Bit v : {Bit{0}, Bit{1}})
      for (std::size_t idx : c.indices_with_bit(b, v)) d[v] = std::min(d[v], std::norm(z - c.point(idx)));
    out[b] = gamma * (d[1] - d[0]);
  }
}

DetectionResult detect_linear(std::span<const Complex> y, const ComplexMatrix& h, double sigma2,
                              const Constellation& c, LinearMode mode) {
  const LinearStage stage = linear_stage(h, y, sigma2, mode);
  const std::size_t l = h.cols();
  const std::size_t bps = c.bits_per_symbol();
  std::vector<std::size_t> idx(l);
  std::vector<std::size_t> perm(l);
  std::vector<double> llrs(l * bps);
  for (std::size_t i = 0; i < l; ++i) {
    perm[i] = i;
    idx[i] = c.nearest_point(stage.estimate[i]).index;
    scalar_maxlog_llrs(c, stage.estimate[i], stage.post_snr[i],
                       std::span<double>(llrs).subspan(i * bps, bps));
  }
  DetectionResult out = make_hard_result(c, idx, perm);
  out.llrs = std::move(llrs);
  out.fallback.assign(out.llrs.size(), 0);
  return out;
}

DetectionResult detect_sic(std::span<const Complex> y, const ComplexMatrix& h, double sigma2,
                           const Constellation& c, LinearMode mode) {
  const std::size_t l = h.cols();
  if (mode == LinearMode::kZf && h.rows() < l)
    throw DimensionError("ZF-SIC needs at least as many receive antennas as layers");
  const std::size_t bps = c.bits_per_symbol();

  ComplexMatrix hc = h;
  ComplexVector yc(y.begin(), y.end());
  std::vector<std::size_t> remaining(l);
  for (std::size_t i = 0; i < l; ++i) remaining[i] = i;

  std::vector<std::size_t> idx(l);
  std::vector<double> llrs(l * bps);
  while (!remaining.empty()) {
    const LinearStage stage = linear_stage(hc, yc, sigma2, mode);
    std::size_t pick = 0;
    for (std::size_t i = 1; i < remaining.size(); ++i)
      if (stage.post_snr[i] > stage.post_snr[pick]) pick = i;
    const std::size_t layer = remaining[pick];
    const auto nearest = c.nearest_point(stage.estimate[pick]);
    idx[layer] = nearest.index;
    scalar_maxlog_llrs(c, stage.estimate[pick], stage.post_snr[pick],
                       std::span<double>(llrs).subspan(layer * bps, bps));
    for (std::size_t r = 0; r < yc.size(); ++r) yc[r] -= hc(r, pick) * nearest.point;
    if (remaining.size() > 1) hc = hc.without_column(pick);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  std::vector<std::size_t> perm(l);
  for (std::size_t i = 0; i < l; ++i) perm[i] = i;
  DetectionResult out = make_hard_result(c, idx, perm);
  out.llrs = std::move(llrs);
  out.fallback.assign(out.llrs.size(), 0);
  return out;
}

}  // namespace recursic

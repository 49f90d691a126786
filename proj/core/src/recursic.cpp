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

#include "recursic/recursic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "recursic/channel.hpp"
#include "recursic/errors.hpp"

namespace recursic {

void SoftConfig::validate(std::size_t order) const {
  if (k < 1 || k > order)
    throw ConfigError("paths per layer K=" + std::to_string(k) + " must lie in [1, " + std::to_string(order) + "]");
  if (!(llr_max > 0.0)) throw ConfigError("llr_max must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
  if (!(eps_max > 0.0) || eps_max > llr_max) throw ConfigError("eps_max must lie in (0, llr_max]");
}

Complex sic_step(Complex y_tilde_l, const ComplexMatrix& r, std::size_t l,
                 std::span<const Complex> detected) {
  if (l >= r.rows() || detected.size() != r.cols()) throw DimensionError("sic_step: dimension mismatch");
  const Complex diag = r(l, l);
  if (diag == Complex{}) throw DegenerateLayerError("sic_step: R(" + std::to_string(l) + "," + std::to_string(l) + ") is zero");
  Complex acc = y_tilde_l;
  for (std::size_t i = l + 1; i < r.cols(); ++i) acc -= r(l, i) * detected[i];
  return acc / diag;
}

std::size_t expected_block_evaluations(std::size_t k, std::size_t layers) {
  if (k <= 1) return layers;
  std::size_t total = 0;
  std::size_t width = 1;
  for (std::size_t l = 0; l < layers; ++l) {
    total += width;
    width *= k;
  }
  return total;
}

namespace {

// Indices of the k largest probabilities, ties to the lower index.
void top_k(std::span<const double> probs, std::size_t k, std::vector<std::size_t>& out) {
  out.resize(probs.size());
  std::iota(out.begin(), out.end(), std::size_t{0});
  std::partial_sort(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(k), out.end(),
                    [&](std::size_t a, std::size_t b) {
                      return probs[a] > probs[b] || (probs[a] == probs[b] && a < b);
                    });
  out.resize(k);
}

// Mixed-radix order with system layer 0 fastest.
bool candidate_less(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  for (std::size_t j = a.size(); j-- > 0;)
    if (a[j] != b[j]) return a[j] < b[j];
  return false;
}

struct Node {
  PathHypothesis path;
  ComplexVector values;
};

}  // namespace

MultipathOutput detect_multipath(const NetworkParams& p, const TriangularSystem& sys,
                                 const Constellation& c, const SoftConfig& cfg, double snr_db) {
  cfg.validate(c.order());
  if (p.order != c.order()) throw ConfigError("network was built for a different modulation order");
  const std::size_t l_count = sys.layers();
  if (sys.y_tilde.size() != l_count || sys.r.rows() != l_count || sys.perm.size() != l_count)
    throw DimensionError("detect_multipath: inconsistent system");

  const double sigma2 = noise_variance(snr_db, l_count);
  Film global_film;
  if (cfg.embedding == EmbeddingInput::kGlobalSnr) global_film = compute_film(p, snr_db);

  std::vector<Node> frontier(1);
  frontier[0].path.symbols.assign(l_count, 0);
  frontier[0].path.probs.resize(l_count);
  frontier[0].values.assign(l_count, Complex{});

  std::size_t evaluations = 0;
  std::vector<double> probs(c.order());
  std::vector<std::size_t> picks;
  for (std::size_t l = l_count; l-- > 0;) {
    Film layer_film;
    const Film* film = &global_film;
    if (cfg.embedding == EmbeddingInput::kPerLayerSnr) {
      const double eff_db = 10.0 * std::log10(std::norm(sys.r(l, l)) / sigma2);
      layer_film = compute_film(p, eff_db);
      film = &layer_film;
    }
    std::vector<Node> next;
    next.reserve(frontier.size() * cfg.k);
    for (const Node& node : frontier) {
      const Complex s_tilde = sic_step(sys.y_tilde[l], sys.r, l, node.values);
      block_forward_film(p, *film, s_tilde, probs);
      ++evaluations;
      top_k(probs, cfg.k, picks);
      Complex interference = sys.y_tilde[l];
      for (std::size_t i = l + 1; i < l_count; ++i) interference -= sys.r(l, i) * node.values[i];
      for (std::size_t idx : picks) {
        Node child = node;
        child.path.symbols[l] = idx;
        child.values[l] = c.point(idx);
        child.path.probs[l] = probs;
        child.path.metric += std::norm(interference - sys.r(l, l) * child.values[l]);
        next.push_back(std::move(child));
      }
    }
    frontier = std::move(next);
  }

  MultipathOutput out;
  out.paths.reserve(frontier.size());
  for (Node& node : frontier) {
    node.path.metric = residual_metric(sys.y_tilde, sys.r, node.values);
    out.paths.push_back(std::move(node.path));
  }
  for (std::size_t i = 1; i < out.paths.size(); ++i) {
    const auto& cand = out.paths[i];
    const auto& cur = out.paths[out.best];
    if (cand.metric < cur.metric || (cand.metric == cur.metric && candidate_less(cand.symbols, cur.symbols)))
      out.best = i;
  }

  const LlrOutput soft = compute_llrs(out.paths, out.best, sys, c, cfg);
  out.result = make_hard_result(c, out.paths[out.best].symbols, sys.perm);
  out.result.llrs = to_original_order<double>(soft.llrs, c.bits_per_symbol(), sys.perm);
  out.result.fallback = to_original_order<std::uint8_t>(soft.fallback, c.bits_per_symbol(), sys.perm);
  out.result.fallback_count = soft.fallback_count;
  out.result.block_evaluations = evaluations;
  return out;
}

LlrOutput compute_llrs(std::span<const PathHypothesis> paths, std::size_t best,
                       const TriangularSystem& sys, const Constellation& c, const SoftConfig& cfg) {
  if (paths.empty() || best >= paths.size()) throw DimensionError("compute_llrs: best path out of range");
  const std::size_t l_count = sys.layers();
  const std::size_t bps = c.bits_per_symbol();
  constexpr double inf = std::numeric_limits<double>::infinity();

  std::vector<double> min0(l_count * bps, inf);
  std::vector<double> min1(l_count * bps, inf);
  for (const auto& path : paths) {
    for (std::size_t l = 0; l < l_count; ++l) {
      const std::size_t idx = path.symbols[l];
      for (std::size_t b = 0; b < bps; ++b) {
        auto& slot = c.bit(idx, b) ? min1[l * bps + b] : min0[l * bps + b];
        slot = std::min(slot, path.metric);
      }
    }
  }

  const PathHypothesis& star = paths[best];
  ComplexVector star_values(l_count);
  for (std::size_t l = 0; l < l_count; ++l) star_values[l] = c.point(star.symbols[l]);

  LlrOutput out{std::vector<double>(l_count * bps), std::vector<std::uint8_t>(l_count * bps, 0), 0};
  for (std::size_t l = 0; l < l_count; ++l) {
    for (std::size_t b = 0; b < bps; ++b) {
      const std::size_t at = l * bps + b;
      if (min0[at] < inf && min1[at] < inf) {
        out.llrs[at] = std::clamp(min1[at] - min0[at], -cfg.llr_max, cfg.llr_max);
        continue;
      }
      const Bit have = c.bit(star.symbols[l], b);
      const auto candidates = c.indices_with_bit(b, static_cast<Bit>(1 - have));
      const auto& pl = star.probs[l];
      std::size_t counter = candidates[0];
      for (std::size_t idx : candidates)
        if (pl[idx] > pl[counter]) counter = idx;
      ComplexVector alt = star_values;
      alt[l] = c.point(counter);
      const double alt_metric = residual_metric(sys.y_tilde, sys.r, alt);
      const double raw = have == 0 ? alt_metric - star.metric : star.metric - alt_metric;
      out.llrs[at] = std::clamp(cfg.alpha * raw, -cfg.eps_max, cfg.eps_max);
      out.fallback[at] = 1;
      ++out.fallback_count;
    }
  }
  return out;
}

RecursicDetector::RecursicDetector(NetworkParams params, Constellation constellation, SoftConfig cfg)
    : params_(std::move(params)), constellation_(std::move(constellation)), cfg_(cfg) {
  cfg_.validate(constellation_.order());
  if (params_.order != constellation_.order())
    throw ConfigError("weights were trained for M=" + std::to_string(params_.order) +
                      ", detector uses M=" + std::to_string(constellation_.order()));
}

DetectionResult RecursicDetector::detect(std::span<const Complex> y, const ComplexMatrix& h,
                                         double sigma2, double snr_db) const {
  const TriangularSystem sys = preprocess(h, y, sigma2);
  return detect_multipath(params_, sys, constellation_, cfg_, snr_db).result;
}

}  // namespace recursic

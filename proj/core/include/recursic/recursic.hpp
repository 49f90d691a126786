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
#include <limits>
#include <span>
#include <vector>

#include "recursic/detection.hpp"
#include "recursic/modem.hpp"
#include "recursic/network.hpp"
#include "recursic/numerics.hpp"

namespace recursic {

/// Which SNR value drives the block's embedding.
enum class EmbeddingInput {
  kGlobalSnr,    // operating SNR in dB, identical for all layers
  kPerLayerSnr,  // 10 log10(|R_ll|^2 / sigma^2) of the layer being detected
};

/// Soft-output settings. eps_max defaults to 0.1 * llr_max; an infinite
/// llr_max disables clipping altogether.
struct SoftConfig {
  std::size_t k = 1;
  double llr_max = std::numeric_limits<double>::infinity();
  double alpha = 0.2;
  double eps_max = std::numeric_limits<double>::infinity();
  EmbeddingInput embedding = EmbeddingInput::kGlobalSnr;

  static SoftConfig with_clip(std::size_t k, double llr_max) {
    SoftConfig cfg;
    cfg.k = k;
    cfg.llr_max = llr_max;
    cfg.eps_max = 0.1 * llr_max;
    return cfg;
  }

  /// Throws ConfigError unless 1 <= k <= order, llr_max > 0,
  /// 0 < alpha <= 1 and eps_max <= llr_max.
  void validate(std::size_t order) const;
};

/// One tracked path. symbols and probs are indexed by system layer; entries
/// for layers not yet assigned are unspecified.
struct PathHypothesis {
  std::vector<std::size_t> symbols;
  double metric = 0.0;
  std::vector<std::vector<double>> probs;
};

/// s_tilde_l = (y_tilde_l - sum_{i>l} R_{l,i} s_i) / R_{l,l}. detected holds
/// symbol values for all layers; entries at i <= l are ignored.
Complex sic_step(Complex y_tilde_l, const ComplexMatrix& r, std::size_t l,
                 std::span<const Complex> detected);

struct MultipathOutput {
  std::vector<PathHypothesis> paths;  // K^L leaves, tree order
  std::size_t best = 0;               // index into paths
  DetectionResult result;             // original layer order
};

/// Multi-path recurSIC: layer L-1 (system order) is evaluated once, each
/// surviving path spawns its K most probable symbols at every layer, the
/// leaf with the smallest ||y_tilde - R s||^2 wins (ties to the lowest
/// mixed-radix candidate index). K = 1 is plain single-path recurSIC.
MultipathOutput detect_multipath(const NetworkParams& p, const TriangularSystem& sys,
                                 const Constellation& c, const SoftConfig& cfg, double snr_db);

struct LlrOutput {
  std::vector<double> llrs;            // system order, L x B
  std::vector<std::uint8_t> fallback;  // same layout
  std::size_t fallback_count = 0;
};

/// Max-log LLRs over the tracked leaves with clipping to [-llr_max, llr_max].
/// When a bit value never occurs among the leaves, the counterhypothesis is
/// the best path with layer l replaced by the most probable (under that
/// path's p_l) symbol carrying the flipped bit; that LLR is scaled by alpha
/// and clipped to [-eps_max, eps_max].
LlrOutput compute_llrs(std::span<const PathHypothesis> paths, std::size_t best,
                       const TriangularSystem& sys, const Constellation& c, const SoftConfig& cfg);

/// Preprocessing (extended sorted QR) plus multipath detection.
class RecursicDetector {
 public:
  RecursicDetector(NetworkParams params, Constellation constellation, SoftConfig cfg);

  DetectionResult detect(std::span<const Complex> y, const ComplexMatrix& h, double sigma2,
                         double snr_db) const;

  const SoftConfig& config() const { return cfg_; }
  const NetworkParams& params() const { return params_; }

 private:
  NetworkParams params_;
  Constellation constellation_;
  SoftConfig cfg_;
};

/// (K^L - 1) / (K - 1) for K >= 2, L for K = 1.
std::size_t expected_block_evaluations(std::size_t k, std::size_t layers);

}  // namespace recursic

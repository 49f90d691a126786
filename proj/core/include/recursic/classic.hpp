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
#include <span>
#include <vector>

#include "recursic/detection.hpp"
#include "recursic/modem.hpp"
#include "recursic/numerics.hpp"

namespace recursic {

/// Exhaustive searches refuse problems with more than 2^24 candidates.
inline constexpr std::size_t kMaxExhaustiveBits = 24;

/// argmin over all M^L candidates of ||y_tilde - R s||^2. Candidates are
/// enumerated as a mixed-radix counter (system layer 0 fastest); the first
/// candidate reaching the minimum wins.
DetectionResult detect_ml_exhaustive(const TriangularSystem& sys, const Constellation& c);

/// Max-log LLRs over the full lattice, original layer order, unclipped:
/// min metric(bit = 1) - min metric(bit = 0).
std::vector<double> llr_maxlog_exhaustive(const TriangularSystem& sys, const Constellation& c);

/// ML hard decision plus exhaustive max-log LLRs from a single enumeration.
DetectionResult detect_ml_maxlog(const TriangularSystem& sys, const Constellation& c);

enum class LinearMode { kZf, kMmse };

/// Per-layer output of one linear equalization stage: unbiased estimates
/// and post-equalization SNRs.
struct LinearStage {
  ComplexVector estimate;
  std::vector<double> post_snr;
};

/// ZF: x = (H^H H)^-1 H^H y, gamma_l = 1 / (sigma2 [(H^H H)^-1]_ll).
/// MMSE: x = (H^H H + sigma2 I)^-1 H^H y, divided by its bias
/// mu_l = 1 - sigma2 P_ll, with gamma_l = 1 / (sigma2 P_ll) - 1.
/// Post-SNRs are capped at 1e12.
LinearStage linear_stage(const ComplexMatrix& h, std::span<const Complex> y, double sigma2,
                         LinearMode mode);

/// Max-log LLRs of one symbol under z = s + CN(0, 1/gamma).
void scalar_maxlog_llrs(const Constellation& c, Complex z, double gamma, std::span<double> out);

DetectionResult detect_linear(std::span<const Complex> y, const ComplexMatrix& h, double sigma2,
                              const Constellation& c, LinearMode mode);

inline DetectionResult detect_mmse(std::span<const Complex> y, const ComplexMatrix& h, double sigma2,
                                   const Constellation& c) {
  return detect_linear(y, h, sigma2, c, LinearMode::kMmse);
}

/// V-BLAST ordered SIC: per stage, equalize the remaining layers, detect the
/// one with the highest post-equalization SNR (ties to the lowest original
/// index), slice, cancel, deflate. LLRs come from the scalar Gaussian model
/// of the stage each layer was detected in, ignoring error propagation.
DetectionResult detect_sic(std::span<const Complex> y, const ComplexMatrix& h, double sigma2,
                           const Constellation& c, LinearMode mode);

}  // namespace recursic

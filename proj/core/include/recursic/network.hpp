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

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "recursic/rng.hpp"

namespace recursic {

inline constexpr std::size_t kInputWidth = 2;    // (Re, Im)
inline constexpr std::size_t kHiddenWidth = 16;
inline constexpr std::size_t kEmbeddingWidth = 16;
inline constexpr std::size_t kFilmWidth = 2 * kHiddenWidth;  // [scale; shift]
inline constexpr std::size_t kMaxOrder = 64;

/// Where the SNR-derived scale/shift modulates the block. Both placements
/// have the same parameter and MAC counts. Stored in weight files as
/// layout_version (1 or 2).
enum class FilmPlacement : int {
  kAfterFirstHidden = 1,
  kAfterSecondHidden = 2,
};

inline constexpr FilmPlacement kDefaultFilmPlacement = FilmPlacement::kAfterFirstHidden;

/// Trainable tensors of the shared block, all row-major:
///   w1 16x2, b1 16      first hidden layer
///   w2 16x16, b2 16     second hidden layer
///   w3 Mx16, b3 M       output logits
///   we 32x16, be 32     SNR embedding projection; rows 0..15 scale, 16..31 shift
struct NetworkParams {
  std::size_t order = 0;
  FilmPlacement film = kDefaultFilmPlacement;
  std::vector<double> w1, b1, w2, b2, w3, b3, we, be;

  static NetworkParams zeros(std::size_t order, FilmPlacement film = kDefaultFilmPlacement);
  /// He-style initialization; the embedding starts near scale = 1, shift = 0.
  static NetworkParams random(std::size_t order, Rng& rng,
                              FilmPlacement film = kDefaultFilmPlacement);

  /// Sum of the literal tensor sizes.
  std::size_t parameter_count() const;

  struct TensorRef {
    std::string_view name;
    std::size_t rows;
    std::size_t cols;
    std::vector<double>* values;
  };
  struct ConstTensorRef {
    std::string_view name;
    std::size_t rows;
    std::size_t cols;
    const std::vector<double>* values;
  };
  std::array<TensorRef, 8> tensors();
  std::array<ConstTensorRef, 8> tensors() const;

  bool all_finite() const;
  void fill(double v);
};

/// 864 + 17 M.
std::size_t count_parameters(std::size_t order);
/// 816 + 16 M multiply-accumulates per block evaluation.
std::size_t count_macs(std::size_t order);

/// Slot 2i = sin(snr / 10000^(2i/16)), slot 2i+1 = cos(same), i = 0..7.
std::array<double, kEmbeddingWidth> snr_embedding(double snr_db);

/// Scale and shift vectors derived from one SNR value.
struct Film {
  std::array<double, kHiddenWidth> scale{};
  std::array<double, kHiddenWidth> shift{};
};

Film compute_film(const NetworkParams& p, double snr_db, std::uint64_t* macs = nullptr);

/// Intermediate activations of one evaluation, kept for backpropagation.
struct BlockCache {
  std::array<double, kInputWidth> x{};
  std::array<double, kHiddenWidth> h1_pre{}, h1{}, g1{}, h2_pre{}, h2{}, g2{};
  std::array<double, kEmbeddingWidth> embedding{};
  Film film;
  std::array<double, kMaxOrder> logits{};
  std::array<double, kMaxOrder> probs{};
  double log_norm = 0.0;  // logsumexp of logits
};

/// Evaluates the block for input s_tilde with precomputed film. Writes the
/// softmax output to probs (length M) and returns logsumexp(logits), so that
/// log p_i = logits_i - return value when cache is given.
double block_forward_film(const NetworkParams& p, const Film& film, std::complex<double> s_tilde,
                          std::span<double> probs, BlockCache* cache = nullptr,
                          std::uint64_t* macs = nullptr);

/// Full block evaluation including the SNR embedding. Throws on non-finite input.
std::vector<double> block_forward(const NetworkParams& p, std::complex<double> s_tilde, double snr_db,
                                  std::uint64_t* macs = nullptr);

/// Evaluates with a full cache (embedding included) for a later backward pass.
void block_forward_cached(const NetworkParams& p, std::complex<double> s_tilde, double snr_db,
                          BlockCache& cache);

/// Accumulates dLoss/dtheta into grad given dLoss/dlogits for a cached evaluation.
void block_backward(const NetworkParams& p, const BlockCache& cache, std::span<const double> dlogits,
                    NetworkParams& grad);

/// Weight file: JSON {modulation_order, layout_version, tensors: {name: {shape, values}}}.
std::string weights_to_json(const NetworkParams& p);
NetworkParams weights_from_json(std::string_view text);
void save_weights(const NetworkParams& p, const std::string& path);
NetworkParams load_weights(const std::string& path);

}  // namespace recursic

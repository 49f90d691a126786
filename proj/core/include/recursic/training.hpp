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
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "recursic/channel.hpp"
#include "recursic/errors.hpp"
#include "recursic/modem.hpp"
#include "recursic/network.hpp"
#include "recursic/numerics.hpp"
#include "recursic/recursic.hpp"

namespace recursic {

/// One preprocessed channel use; r and y_tilde come from the extended
/// sorted QR and true_indices are in the same (permuted) layer order.
struct TrainSample {
  ComplexVector y_tilde;
  ComplexMatrix r;
  std::vector<std::size_t> true_indices;
  double snr_db = 0.0;
};

enum class StepSchedule { kConstant, kCosine };

struct TrainConfig {
  std::size_t sample_count = 200000;
  double snr_low_db = 10.0;
  double snr_high_db = 30.0;
  std::size_t k_train = 2;
  std::size_t batch_size = 512;
  double step_size = 1e-3;
  StepSchedule schedule = StepSchedule::kConstant;
  std::size_t epochs = 30;
  double holdout_fraction = 0.1;
  std::size_t teacher_forcing_epochs = 0;
  EmbeddingInput embedding = EmbeddingInput::kGlobalSnr;
  FilmPlacement film = kDefaultFilmPlacement;
  std::uint64_t seed = 1;

  void validate(std::size_t order) const;
};

/// Sample i uses its own stream derived from (seed, i): SNR uniform in the
/// configured range, channel from model, uniform symbols, AWGN.
std::vector<TrainSample> generate_dataset(const TrainConfig& cfg, const ChannelModel& model,
                                          const Constellation& c);

/// Minimum over the k_train^L tracked leaves of the per-path average
/// cross-entropy -log p_l[true_l]. The tree follows the network's own top-k
/// choices. When grad is given, weight * d(loss)/d(theta) is accumulated,
/// flowing only through the minimizing leaf (ties to the lowest leaf).
double loss_min_path_ce(const NetworkParams& p, const TrainSample& sample, std::size_t k_train,
                        const Constellation& c, NetworkParams* grad = nullptr, double weight = 1.0,
                        EmbeddingInput embedding = EmbeddingInput::kGlobalSnr);

/// Cross-entropy along the true symbol path (teacher forcing).
double loss_teacher_forced(const NetworkParams& p, const TrainSample& sample, const Constellation& c,
                           NetworkParams* grad = nullptr, double weight = 1.0,
                           EmbeddingInput embedding = EmbeddingInput::kGlobalSnr);

/// Adam with bias correction.
class AdamOptimizer {
 public:
  explicit AdamOptimizer(const NetworkParams& like, double beta1 = 0.9, double beta2 = 0.999,
                         double eps = 1e-8);
  void step(NetworkParams& p, const NetworkParams& grad, double step_size);
  std::uint64_t steps() const { return t_; }

 private:
  NetworkParams m_;
  NetworkParams v_;
  double beta1_, beta2_, eps_;
  std::uint64_t t_ = 0;
};

class TrainingDivergedError : public Error {
 public:
  using Error::Error;
};

struct TrainLogEntry {
  std::size_t step = 0;
  double train_loss = 0.0;
  double heldout_loss = 0.0;
};

struct TrainResult {
  NetworkParams params;  // lowest held-out loss seen
  std::vector<TrainLogEntry> log;
  double best_heldout_loss = 0.0;
};

using TrainProgress = std::function<void(std::size_t epoch, const TrainLogEntry&)>;

TrainResult train(const TrainConfig& cfg, std::span<const TrainSample> dataset, const Constellation& c,
                  const TrainProgress& progress = {});

/// "step,train_loss,heldout_loss" lines.
void write_train_log(const std::vector<TrainLogEntry>& log, const std::string& path);

/// Nearest-rank percentile, q in (0, 1].
double nearest_rank_percentile(std::vector<double> values, double q);

/// Runs detection with clipping disabled and returns twice the 95th
/// percentile of all non-fallback |LLR| values. Throws Error if every LLR
/// came from the fallback.
double estimate_llr_clip(const NetworkParams& p, std::span<const TrainSample> calibration,
                         const SoftConfig& cfg, const Constellation& c);

/// Same statistic from an already collected pool of |LLR| values.
double llr_clip_from_pool(std::vector<double> pool);

}  // namespace recursic

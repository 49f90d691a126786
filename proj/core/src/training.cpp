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

#include "recursic/training.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>

#include "recursic/detection.hpp"

namespace recursic {

namespace {

constexpr std::uint64_t kDatasetStream = 0x7261696E64617461ull;  // "raindata"
constexpr std::uint64_t kShuffleStream = 0x73687566666C6521ull;

double layer_snr_db(const TrainSample& s, std::size_t l, EmbeddingInput embedding) {
  if (embedding == EmbeddingInput::kGlobalSnr) return s.snr_db;
  const double sigma2 = noise_variance(s.snr_db, s.r.cols());
  return 10.0 * std::log10(std::norm(s.r(l, l)) / sigma2);
}

void check_sample(const TrainSample& s, const Constellation& c) {
  const std::size_t l = s.r.cols();
  if (s.r.rows() != l || s.y_tilde.size() != l || s.true_indices.size() != l)
    throw DimensionError("training sample: inconsistent dimensions");
  for (auto t : s.true_indices)
    if (t >= c.order()) throw DimensionError("training sample: symbol index out of range");
}

struct TreeNode {
  std::size_t parent;
  std::size_t layer;
  Complex s_tilde;
  double ce_sum;
  ComplexVector values;
};

void backprop_path(const NetworkParams& p, const TrainSample& sample, std::span<const TreeNode> nodes,
                   std::size_t leaf, double scale, EmbeddingInput embedding, NetworkParams& grad) {
  BlockCache cache;
  std::array<double, kMaxOrder> dlogits{};
  const std::size_t m = p.order;
  for (std::size_t at = leaf; at != std::numeric_limits<std::size_t>::max(); at = nodes[at].parent) {
    const TreeNode& node = nodes[at];
    block_forward_cached(p, node.s_tilde, layer_snr_db(sample, node.layer, embedding), cache);
    for (std::size_t k = 0; k < m; ++k) dlogits[k] = scale * cache.probs[k];
    dlogits[sample.true_indices[node.layer]] -= scale;
    block_backward(p, cache, std::span<const double>(dlogits.data(), m), grad);
  }
}

}  // namespace

void TrainConfig::validate(std::size_t order) const {
  if (sample_count == 0) throw ConfigError("sample_count must be >= 1");
  if (!(snr_low_db <= snr_high_db)) throw ConfigError("snr_range_db must be [low, high] with low <= high");
  if (k_train < 1 || k_train > order) throw ConfigError("k_train must lie in [1, M]");
  if (batch_size == 0) throw ConfigError("batch_size must be >= 1");
  if (!(step_size > 0.0)) throw ConfigError("step_size must be positive");
  if (epochs == 0) throw ConfigError("epochs must be >= 1");
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) throw ConfigError("holdout_fraction must lie in (0, 1)");
}

std::vector<TrainSample> generate_dataset(const TrainConfig& cfg, const ChannelModel& model,
                                          const Constellation& c) {
  std::vector<TrainSample> out;
  out.reserve(cfg.sample_count);
  for (std::size_t i = 0; i < cfg.sample_count; ++i) {
    Rng rng = Rng::stream(cfg.seed, kDatasetStream, i);
    const double snr = rng.uniform(cfg.snr_low_db, cfg.snr_high_db);
    const ChannelUse use = draw_channel_use(model, c, snr, rng);
    TriangularSystem sys = preprocess(use.h, use.y, use.sigma2);
    TrainSample s;
    s.y_tilde = std::move(sys.y_tilde);
    s.r = std::move(sys.r);
    s.true_indices.resize(sys.perm.size());
    for (std::size_t j = 0; j < sys.perm.size(); ++j) s.true_indices[j] = use.symbol_indices[sys.perm[j]];
    s.snr_db = snr;
    out.push_back(std::move(s));
  }
  return out;
}

double loss_min_path_ce(const NetworkParams& p, const TrainSample& sample, std::size_t k_train,
                        const Constellation& c, NetworkParams* grad, double weight,
                        EmbeddingInput embedding) {
  check_sample(sample, c);
  if (k_train < 1 || k_train > c.order()) throw ConfigError("k_train must lie in [1, M]");
  const std::size_t l_count = sample.r.cols();
  const std::size_t m = c.order();
  constexpr std::size_t kRoot = std::numeric_limits<std::size_t>::max();

  std::vector<TreeNode> nodes;
  std::vector<std::size_t> frontier;  // indices into nodes, or kRoot before the first layer
  frontier.push_back(kRoot);
  const ComplexVector empty(l_count);

  std::array<double, kMaxOrder> probs;
  std::vector<std::size_t> order(m);
  BlockCache cache;
  for (std::size_t l = l_count; l-- > 0;) {
    const Film film = compute_film(p, layer_snr_db(sample, l, embedding));
    std::vector<std::size_t> next;
    next.reserve(frontier.size() * k_train);
    for (std::size_t parent : frontier) {
      const ComplexVector values = parent == kRoot ? empty : nodes[parent].values;  // nodes may reallocate
      const double parent_ce = parent == kRoot ? 0.0 : nodes[parent].ce_sum;
      const Complex s_tilde = sic_step(sample.y_tilde[l], sample.r, l, values);
      const double log_norm = block_forward_film(p, film, s_tilde, std::span<double>(probs.data(), m), &cache);
      const double ce = log_norm - cache.logits[sample.true_indices[l]];
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k_train), order.end(),
                        [&](std::size_t a, std::size_t b) {
                          return probs[a] > probs[b] || (probs[a] == probs[b] && a < b);
                        });
      for (std::size_t r = 0; r < k_train; ++r) {
        TreeNode child{parent, l, s_tilde, parent_ce + ce, values};
        child.values[l] = c.point(order[r]);
        nodes.push_back(std::move(child));
        next.push_back(nodes.size() - 1);
      }
    }
    frontier = std::move(next);
  }

  std::size_t best = frontier.front();
  for (std::size_t leaf : frontier)
    if (nodes[leaf].ce_sum < nodes[best].ce_sum) best = leaf;
  const double loss = nodes[best].ce_sum / static_cast<double>(l_count);
  if (grad) backprop_path(p, sample, nodes, best, weight / static_cast<double>(l_count), embedding, *grad);
  return loss;
}

double loss_teacher_forced(const NetworkParams& p, const TrainSample& sample, const Constellation& c,
                           NetworkParams* grad, double weight, EmbeddingInput embedding) {
  check_sample(sample, c);
  const std::size_t l_count = sample.r.cols();
  const std::size_t m = c.order();
  std::vector<TreeNode> nodes;
  ComplexVector values(l_count);
  std::array<double, kMaxOrder> probs;
  BlockCache cache;
  double ce_sum = 0.0;
  for (std::size_t l = l_count; l-- > 0;) {
    const Film film = compute_film(p, layer_snr_db(sample, l, embedding));
    const Complex s_tilde = sic_step(sample.y_tilde[l], sample.r, l, values);
    const double log_norm = block_forward_film(p, film, s_tilde, std::span<double>(probs.data(), m), &cache);
    ce_sum += log_norm - cache.logits[sample.true_indices[l]];
    values[l] = c.point(sample.true_indices[l]);
    nodes.push_back({nodes.empty() ? std::numeric_limits<std::size_t>::max() : nodes.size() - 1, l, s_tilde,
                     ce_sum, {}});
  }
  if (grad) backprop_path(p, sample, nodes, nodes.size() - 1, weight / static_cast<double>(l_count), embedding, *grad);
  return ce_sum / static_cast<double>(l_count);
}

AdamOptimizer::AdamOptimizer(const NetworkParams& like, double beta1, double beta2, double eps)
    : m_(NetworkParams::zeros(like.order, like.film)),
      v_(NetworkParams::zeros(like.order, like.film)),
      beta1_(beta1),
      beta2_(beta2),
      eps_(eps) {}

void AdamOptimizer::step(NetworkParams& p, const NetworkParams& grad, double step_size) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  auto pt = p.tensors();
  auto mt = m_.tensors();
  auto vt = v_.tensors();
  const auto gt = grad.tensors();
  for (std::size_t t = 0; t < pt.size(); ++t) {
    auto& pv = *pt[t].values;
    auto& mv = *mt[t].values;
    auto& vv = *vt[t].values;
    const auto& gv = *gt[t].values;
    for (std::size_t i = 0; i < pv.size(); ++i) {
      mv[i] = beta1_ * mv[i] + (1.0 - beta1_) * gv[i];
      vv[i] = beta2_ * vv[i] + (1.0 - beta2_) * gv[i] * gv[i];
      pv[i] -= step_size * (mv[i] / c1) / (std::sqrt(vv[i] / c2) + eps_);
    }
  }
}

namespace {

double mean_loss(const NetworkParams& p, std::span<const TrainSample> data, std::span<const std::size_t> idx,
                 const TrainConfig& cfg, const Constellation& c) {
  double acc = 0.0;
  for (std::size_t i : idx) acc += loss_min_path_ce(p, data[i], cfg.k_train, c, nullptr, 1.0, cfg.embedding);
  return idx.empty() ? 0.0 : acc / static_cast<double>(idx.size());
}

void shuffle(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

}  // namespace

TrainResult train(const TrainConfig& cfg, std::span<const TrainSample> dataset, const Constellation& c,
                  const TrainProgress& progress) {
  cfg.validate(c.order());
  if (dataset.empty()) throw ConfigError("training needs a non-empty dataset");

  std::vector<std::size_t> all(dataset.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  Rng split_rng = Rng::stream(cfg.seed, kShuffleStream, 0);
  shuffle(all, split_rng);
  std::size_t held = static_cast<std::size_t>(std::llround(cfg.holdout_fraction * static_cast<double>(all.size())));
  if (all.size() > 1) held = std::clamp<std::size_t>(held, 1, all.size() - 1);
  else held = 0;
  std::vector<std::size_t> train_idx(all.begin(), all.end() - static_cast<std::ptrdiff_t>(held));
  std::vector<std::size_t> held_idx(all.end() - static_cast<std::ptrdiff_t>(held), all.end());
  if (held_idx.empty()) held_idx = train_idx;

  Rng init_rng(cfg.seed);
  NetworkParams params = NetworkParams::random(c.order(), init_rng, cfg.film);
  AdamOptimizer adam(params);
  NetworkParams grad = NetworkParams::zeros(c.order(), cfg.film);

  const std::size_t batches_per_epoch = (train_idx.size() + cfg.batch_size - 1) / cfg.batch_size;
  const std::size_t total_steps = batches_per_epoch * cfg.epochs;

  TrainResult result{params, {}, std::numeric_limits<double>::infinity()};
  std::size_t step = 0;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng epoch_rng = Rng::stream(cfg.seed, kShuffleStream, epoch + 1);
    shuffle(train_idx, epoch_rng);
    const bool forced = epoch < cfg.teacher_forcing_epochs;
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < train_idx.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(start + cfg.batch_size, train_idx.size());
      const double w = 1.0 / static_cast<double>(end - start);
      grad.fill(0.0);
      double batch_loss = 0.0;
      for (std::size_t i = start; i < end; ++i) {
        const TrainSample& s = dataset[train_idx[i]];
        batch_loss += forced ? loss_teacher_forced(params, s, c, &grad, w, cfg.embedding)
                             : loss_min_path_ce(params, s, cfg.k_train, c, &grad, w, cfg.embedding);
      }
      if (!std::isfinite(batch_loss) || !grad.all_finite())
        throw TrainingDivergedError("training diverged at step " + std::to_string(step));
      double lr = cfg.step_size;
      if (cfg.schedule == StepSchedule::kCosine) {
        const double frac = static_cast<double>(step) / static_cast<double>(std::max<std::size_t>(total_steps, 1));
        lr = cfg.step_size * (0.1 + 0.9 * 0.5 * (1.0 + std::cos(std::numbers::pi * frac)));
      }
      adam.step(params, grad, lr);
      ++step;
      epoch_loss += batch_loss;
    }
    TrainLogEntry entry{step, epoch_loss / static_cast<double>(train_idx.size()),
                        mean_loss(params, dataset, held_idx, cfg, c)};
    if (!std::isfinite(entry.heldout_loss))
      throw TrainingDivergedError("held-out loss is not finite after epoch " + std::to_string(epoch));
    result.log.push_back(entry);
    if (entry.heldout_loss < result.best_heldout_loss) {
      result.best_heldout_loss = entry.heldout_loss;
      result.params = params;
    }
    if (progress) progress(epoch, entry);
  }
  return result;
}

void write_train_log(const std::vector<TrainLogEntry>& log, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out.precision(17);
  out << "step,train_loss,heldout_loss\n";
  for (const auto& e : log) out << e.step << ',' << e.train_loss << ',' << e.heldout_loss << '\n';
}

double nearest_rank_percentile(std::vector<double> values, double q) {
  if (values.empty()) throw Error("percentile of an empty set");
  if (!(q > 0.0 && q <= 1.0)) throw ConfigError("percentile must lie in (0, 1]");
  std::sort(values.begin(), values.end());
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size()) - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

double llr_clip_from_pool(std::vector<double> pool) {
  if (pool.empty()) throw Error("LLR clip calibration: no non-fallback LLRs collected");
  return 2.0 * nearest_rank_percentile(std::move(pool), 0.95);
}

double estimate_llr_clip(const NetworkParams& p, std::span<const TrainSample> calibration,
                         const SoftConfig& cfg, const Constellation& c) {
  if (calibration.empty()) throw ConfigError("LLR clip calibration needs a non-empty set");
  SoftConfig open = cfg;
  open.llr_max = std::numeric_limits<double>::infinity();
  open.eps_max = std::numeric_limits<double>::infinity();
  std::vector<double> pool;
  for (const TrainSample& s : calibration) {
    const auto sys = TriangularSystem::in_order(s.y_tilde, s.r);
    const auto out = detect_multipath(p, sys, c, open, s.snr_db);
    for (std::size_t i = 0; i < out.result.llrs.size(); ++i)
      if (!out.result.fallback[i]) pool.push_back(std::abs(out.result.llrs[i]));
  }
  return llr_clip_from_pool(std::move(pool));
}

}  // namespace recursic

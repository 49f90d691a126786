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

#include "recursic/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "recursic/errors.hpp"

namespace recursic {

namespace {

void check_order(std::size_t order) {
  if (order != 4 && order != 16 && order != 64)
    throw ConfigError("unsupported modulation order " + std::to_string(order));
}

inline double relu(double v) { return v > 0.0 ? v : 0.0; }

}  // namespace

NetworkParams NetworkParams::zeros(std::size_t order, FilmPlacement film) {
  check_order(order);
  NetworkParams p;
  p.order = order;
  p.film = film;
  p.w1.assign(kHiddenWidth * kInputWidth, 0.0);
  p.b1.assign(kHiddenWidth, 0.0);
  p.w2.assign(kHiddenWidth * kHiddenWidth, 0.0);
  p.b2.assign(kHiddenWidth, 0.0);
  p.w3.assign(order * kHiddenWidth, 0.0);
  p.b3.assign(order, 0.0);
  p.we.assign(kFilmWidth * kEmbeddingWidth, 0.0);
  p.be.assign(kFilmWidth, 0.0);
  return p;
}

NetworkParams NetworkParams::random(std::size_t order, Rng& rng, FilmPlacement film) {
  NetworkParams p = zeros(order, film);
  auto gauss = [&rng](double stddev) { return stddev * rng.normal_pair()[0]; };
  for (auto& v : p.w1) v = gauss(1.0);
  for (auto& v : p.b1) v = rng.uniform(-1.0, 1.0);
  for (auto& v : p.w2) v = gauss(std::sqrt(2.0 / kHiddenWidth));
  for (auto& v : p.b2) v = rng.uniform(-0.1, 0.1);
  for (auto& v : p.w3) v = gauss(std::sqrt(1.0 / kHiddenWidth));
  for (auto& v : p.we) v = gauss(0.05);
  for (std::size_t i = 0; i < kHiddenWidth; ++i) p.be[i] = 1.0;
  return p;
}

std::size_t NetworkParams::parameter_count() const {
  std::size_t total = 0;
  for (const auto& t : tensors()) total += t.values->size();
  return total;
}

std::array<NetworkParams::TensorRef, 8> NetworkParams::tensors() {
  return {{{"w1", kHiddenWidth, kInputWidth, &w1},
           {"b1", kHiddenWidth, 1, &b1},
           {"w2", kHiddenWidth, kHiddenWidth, &w2},
           {"b2", kHiddenWidth, 1, &b2},
           {"w3", order, kHiddenWidth, &w3},
           {"b3", order, 1, &b3},
           {"we", kFilmWidth, kEmbeddingWidth, &we},
           {"be", kFilmWidth, 1, &be}}};
}

std::array<NetworkParams::ConstTensorRef, 8> NetworkParams::tensors() const {
  auto refs = const_cast<NetworkParams*>(this)->tensors();
  std::array<ConstTensorRef, 8> out;
  for (std::size_t i = 0; i < refs.size(); ++i)
    out[i] = {refs[i].name, refs[i].rows, refs[i].cols, refs[i].values};
  return out;
}

bool NetworkParams::all_finite() const {
  for (const auto& t : tensors())
    for (double v : *t.values)
      if (!std::isfinite(v)) return false;
  return true;
}

void NetworkParams::fill(double v) {
  for (auto& t : tensors()) std::fill(t.values->begin(), t.values->end(), v);
}

std::size_t count_parameters(std::size_t order) {
  check_order(order);
  return 864 + 17 * order;
}

std::size_t count_macs(std::size_t order) {
  check_order(order);
  return 816 + 16 * order;
}

std::array<double, kEmbeddingWidth> snr_embedding(double snr_db) {
  std::array<double, kEmbeddingWidth> t{};
  for (std::size_t i = 0; i < kEmbeddingWidth / 2; ++i) {
    const double freq = std::pow(10000.0, -static_cast<double>(2 * i) / kEmbeddingWidth);
    t[2 * i] = std::sin(snr_db * freq);
    t[2 * i + 1] = std::cos(snr_db * freq);
  }
  return t;
}

namespace {

Film film_from_embedding(const NetworkParams& p, const std::array<double, kEmbeddingWidth>& e,
                         std::uint64_t* macs) {
  Film f;
  for (std::size_t r = 0; r < kFilmWidth; ++r) {
    double acc = p.be[r];
    const double* row = &p.we[r * kEmbeddingWidth];
    for (std::size_t c = 0; c < kEmbeddingWidth; ++c) acc += row[c] * e[c];
    if (r < kHiddenWidth) {
      f.scale[r] = acc;
    } else {
      f.shift[r - kHiddenWidth] = acc;
    }
  }
  if (macs) *macs += kFilmWidth * kEmbeddingWidth;
  return f;
}

}  // namespace

Film compute_film(const NetworkParams& p, double snr_db, std::uint64_t* macs) {
  return film_from_embedding(p, snr_embedding(snr_db), macs);
}

double block_forward_film(const NetworkParams& p, const Film& film, std::complex<double> s_tilde,
                          std::span<double> probs, BlockCache* cache, std::uint64_t* macs) {
  const std::size_t m = p.order;
  const double x0 = s_tilde.real();
  const double x1 = s_tilde.imag();
  const bool film_first = p.film == FilmPlacement::kAfterFirstHidden;

  std::array<double, kHiddenWidth> h1_pre, h1, g1, h2_pre, h2, g2;
  for (std::size_t i = 0; i < kHiddenWidth; ++i) {
    h1_pre[i] = p.b1[i] + p.w1[2 * i] * x0 + p.w1[2 * i + 1] * x1;
    h1[i] = relu(h1_pre[i]);
    g1[i] = film_first ? h1[i] * film.scale[i] + film.shift[i] : h1[i];
  }
  for (std::size_t i = 0; i < kHiddenWidth; ++i) {
    double acc = p.b2[i];
    const double* row = &p.w2[i * kHiddenWidth];
    for (std::size_t j = 0; j < kHiddenWidth; ++j) acc += row[j] * g1[j];
    h2_pre[i] = acc;
    h2[i] = relu(acc);
    g2[i] = film_first ? h2[i] : h2[i] * film.scale[i] + film.shift[i];
  }
  std::array<double, kMaxOrder> logits;
  double max_logit = -INFINITY;
  for (std::size_t k = 0; k < m; ++k) {
    double acc = p.b3[k];
    const double* row = &p.w3[k * kHiddenWidth];
    for (std::size_t j = 0; j < kHiddenWidth; ++j) acc += row[j] * g2[j];
    logits[k] = acc;
    max_logit = std::max(max_logit, acc);
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    probs[k] = std::exp(logits[k] - max_logit);
    sum += probs[k];
  }
  for (std::size_t k = 0; k < m; ++k) probs[k] /= sum;
  const double log_norm = max_logit + std::log(sum);

  if (macs) *macs += kHiddenWidth * kInputWidth + kHiddenWidth + kHiddenWidth * kHiddenWidth + m * kHiddenWidth;
  if (cache) {
    cache->x = {x0, x1};
    cache->h1_pre = h1_pre;
    cache->h1 = h1;
    cache->g1 = g1;
    cache->h2_pre = h2_pre;
    cache->h2 = h2;
    cache->g2 = g2;
    cache->film = film;
    std::copy_n(logits.begin(), m, cache->logits.begin());
    std::copy_n(probs.begin(), m, cache->probs.begin());
    cache->log_norm = log_norm;
  }
  return log_norm;
}

std::vector<double> block_forward(const NetworkParams& p, std::complex<double> s_tilde, double snr_db,
                                  std::uint64_t* macs) {
  if (!std::isfinite(s_tilde.real()) || !std::isfinite(s_tilde.imag()) || !std::isfinite(snr_db))
    throw DimensionError("block_forward: non-finite input");
  const Film film = compute_film(p, snr_db, macs);
  std::vector<double> probs(p.order);
  block_forward_film(p, film, s_tilde, probs, nullptr, macs);
  return probs;
}

void block_forward_cached(const NetworkParams& p, std::complex<double> s_tilde, double snr_db,
                          BlockCache& cache) {
  cache.embedding = snr_embedding(snr_db);
  const Film film = film_from_embedding(p, cache.embedding, nullptr);
  std::array<double, kMaxOrder> probs;
  block_forward_film(p, film, s_tilde, std::span<double>(probs.data(), p.order), &cache);
}

void block_backward(const NetworkParams& p, const BlockCache& cache, std::span<const double> dlogits,
                    NetworkParams& grad) {
  const std::size_t m = p.order;
  const bool film_first = p.film == FilmPlacement::kAfterFirstHidden;
  std::array<double, kHiddenWidth> dg2{}, dh2_pre{}, dg1{}, dh1_pre{};
  std::array<double, kHiddenWidth> dscale{}, dshift{};

  for (std::size_t k = 0; k < m; ++k) {
    const double d = dlogits[k];
    if (d == 0.0) continue;
    grad.b3[k] += d;
    double* grow = &grad.w3[k * kHiddenWidth];
    const double* row = &p.w3[k * kHiddenWidth];
    for (std::size_t j = 0; j < kHiddenWidth; ++j) {
      grow[j] += d * cache.g2[j];
      dg2[j] += row[j] * d;
    }
  }
  for (std::size_t i = 0; i < kHiddenWidth; ++i) {
    double dh2 = dg2[i];
    if (!film_first) {
      dscale[i] += dg2[i] * cache.h2[i];
      dshift[i] += dg2[i];
      dh2 = dg2[i] * cache.film.scale[i];
    }
    dh2_pre[i] = cache.h2_pre[i] > 0.0 ? dh2 : 0.0;
  }
  for (std::size_t i = 0; i < kHiddenWidth; ++i) {
    const double d = dh2_pre[i];
    if (d == 0.0) continue;
    grad.b2[i] += d;
    double* grow = &grad.w2[i * kHiddenWidth];
    const double* row = &p.w2[i * kHiddenWidth];
    for (std::size_t j = 0; j < kHiddenWidth; ++j) {
      grow[j] += d * cache.g1[j];
      dg1[j] += row[j] * d;
    }
  }
  for (std::size_t i = 0; i < kHiddenWidth; ++i) {
    double dh1 = dg1[i];
    if (film_first) {
      dscale[i] += dg1[i] * cache.h1[i];
      dshift[i] += dg1[i];
      dh1 = dg1[i] * cache.film.scale[i];
    }
    dh1_pre[i] = cache.h1_pre[i] > 0.0 ? dh1 : 0.0;
    grad.b1[i] += dh1_pre[i];
    grad.w1[2 * i] += dh1_pre[i] * cache.x[0];
    grad.w1[2 * i + 1] += dh1_pre[i] * cache.x[1];
  }
  for (std::size_t r = 0; r < kFilmWidth; ++r) {
    const double d = r < kHiddenWidth ? dscale[r] : dshift[r - kHiddenWidth];
    if (d == 0.0) continue;
    grad.be[r] += d;
    double* grow = &grad.we[r * kEmbeddingWidth];
    for (std::size_t c = 0; c < kEmbeddingWidth; ++c) grow[c] += d * cache.embedding[c];
  }
}

std::string weights_to_json(const NetworkParams& p) {
  nlohmann::ordered_json doc;
  doc["modulation_order"] = p.order;
  doc["layout_version"] = static_cast<int>(p.film);
  nlohmann::ordered_json tensors = nlohmann::ordered_json::object();
  for (const auto& t : p.tensors()) {
    nlohmann::ordered_json entry;
    entry["shape"] = t.cols == 1 ? nlohmann::ordered_json::array({t.rows})
                                 : nlohmann::ordered_json::array({t.rows, t.cols});
    entry["values"] = *t.values;
    tensors[std::string(t.name)] = std::move(entry);
  }
  doc["tensors"] = std::move(tensors);
  return doc.dump(1);
}

NetworkParams weights_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("weight file: ") + e.what());
  }
  try {
    for (const auto& [key, _] : doc.items())
      if (key != "modulation_order" && key != "layout_version" && key != "tensors")
        throw ParseError("weight file: unknown field '" + key + "'");
    const auto order = doc.at("modulation_order").get<std::size_t>();
    const int layout = doc.at("layout_version").get<int>();
    if (layout != 1 && layout != 2) throw ParseError("weight file: unknown layout_version " + std::to_string(layout));
    NetworkParams p = NetworkParams::zeros(order, static_cast<FilmPlacement>(layout));
    const auto& tensors = doc.at("tensors");
    if (tensors.size() != 8) throw ParseError("weight file: expected 8 tensors, found " + std::to_string(tensors.size()));
    std::size_t total = 0;
    for (auto& t : p.tensors()) {
      const std::string name(t.name);
      if (!tensors.contains(name)) throw ParseError("weight file: missing tensor '" + name + "'");
      const auto& entry = tensors.at(name);
      auto shape = entry.at("shape").get<std::vector<std::size_t>>();
      const std::vector<std::size_t> want =
          t.cols == 1 ? std::vector<std::size_t>{t.rows} : std::vector<std::size_t>{t.rows, t.cols};
      if (shape != want) throw ParseError("weight file: tensor '" + name + "' has the wrong shape");
      auto values = entry.at("values").get<std::vector<double>>();
      if (values.size() != t.rows * t.cols)
        throw ParseError("weight file: tensor '" + name + "' has " + std::to_string(values.size()) + " values");
      *t.values = std::move(values);
      total += t.values->size();
    }
    if (total != count_parameters(order))
      throw ParseError("weight file: parameter count " + std::to_string(total) + " != 864 + 17M");
    if (!p.all_finite()) throw ParseError("weight file: non-finite parameter");
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("weight file: ") + e.what());
  } catch (const ConfigError& e) {
    throw ParseError(std::string("weight file: ") + e.what());
  }
}

void save_weights(const NetworkParams& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << weights_to_json(p) << '\n';
  if (!out) throw Error("failed writing '" + path + "'");
}

NetworkParams load_weights(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open weight file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return weights_from_json(ss.str());
}

}  // namespace recursic

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

#include "recursic/channel.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "recursic/errors.hpp"

namespace recursic {

double noise_variance(double snr_db, std::size_t layers) {
  if (layers == 0) throw DimensionError("noise_variance: layer count must be >= 1");
  return 1.0 / (std::pow(10.0, snr_db / 10.0) * static_cast<double>(layers));
}

ComplexMatrix sample_rayleigh(std::size_t n, std::size_t l, Rng& rng) {
  ComplexMatrix h(n, l);
  for (auto& z : h.entries()) z = rng.complex_normal(1.0);
  return h;
}

ComplexMatrix exponential_correlation(std::size_t n, double rho) {
  ComplexMatrix r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      r(i, j) = std::pow(rho, static_cast<double>(i > j ? i - j : j - i));
  return r;
}

ComplexMatrix symmetric_sqrt(const ComplexMatrix& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw DimensionError("symmetric_sqrt: matrix must be square");
  std::vector<double> m(n * n);
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    v[i * n + i] = 1.0;
    for (std::size_t j = 0; j < n; ++j) m[i * n + j] = a(i, j).real();
  }
  // Cyclic Jacobi sweeps.
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += m[p * n + q] * m[p * n + q];
    if (off < 1e-32) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = m[p * n + q];
        if (apq == 0.0) continue;
        const double theta = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double mkp = m[k * n + p];
          const double mkq = m[k * n + q];
          m[k * n + p] = c * mkp - s * mkq;
          m[k * n + q] = s * mkp + c * mkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double mpk = m[p * n + k];
          const double mqk = m[q * n + k];
          m[p * n + k] = c * mpk - s * mqk;
          m[q * n + k] = s * mpk + c * mqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = m[k * n + k];
    if (lambda < -1e-12) throw DimensionError("symmetric_sqrt: matrix is not positive semi-definite");
    const double root = std::sqrt(std::max(lambda, 0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(i, j) += v[i * n + k] * root * v[j * n + k];
  }
  return out;
}

ComplexMatrix sample_kronecker(std::size_t n, std::size_t l, double rho_rx, double rho_tx, Rng& rng) {
  return ChannelModel({ChannelSpec::Kind::kKronecker, rho_rx, rho_tx}, n, l).sample(rng);
}

ComplexVector transmit(const ComplexMatrix& h, std::span<const Complex> s, double sigma2, Rng& rng) {
  if (!(sigma2 >= 0.0)) throw DimensionError("transmit: sigma2 must be >= 0");
  ComplexVector y = h * s;
  const double scale = std::sqrt(sigma2);
  for (auto& v : y) v += scale * rng.complex_normal(1.0);
  return y;
}

ChannelModel::ChannelModel(ChannelSpec spec, std::size_t receive, std::size_t layers)
    : spec_(spec), n_(receive), l_(layers) {
  if (n_ == 0 || l_ == 0) throw ConfigError("channel needs at least one antenna and one layer");
  if (spec_.kind == ChannelSpec::Kind::kKronecker) {
    for (double rho : {spec_.rho_rx, spec_.rho_tx})
      if (!(rho >= 0.0 && rho < 1.0)) throw ConfigError("correlation must lie in [0, 1)");
    rx_root_ = symmetric_sqrt(exponential_correlation(n_, spec_.rho_rx));
    tx_root_ = symmetric_sqrt(exponential_correlation(l_, spec_.rho_tx));
  }
}

ComplexMatrix ChannelModel::sample(Rng& rng) const {
  ComplexMatrix w = sample_rayleigh(n_, l_, rng);
  if (spec_.kind == ChannelSpec::Kind::kIid) return w;
  return rx_root_ * w * tx_root_;
}

namespace {

ChannelUse finish_use(const ChannelModel& model, const Constellation& c, double snr_db,
                      ComplexMatrix h, std::vector<std::size_t> idx, Rng& rng) {
  ChannelUse use;
  use.h = std::move(h);
  use.symbol_indices = std::move(idx);
  use.sigma2 = noise_variance(snr_db, model.layers());
  use.snr_db = snr_db;
  const std::size_t bps = c.bits_per_symbol();
  use.s.resize(model.layers());
  use.bits.resize(model.layers() * bps);
  for (std::size_t l = 0; l < model.layers(); ++l) {
    use.s[l] = c.point(use.symbol_indices[l]);
    for (std::size_t b = 0; b < bps; ++b) use.bits[l * bps + b] = c.bit(use.symbol_indices[l], b);
  }
  use.y = transmit(use.h, use.s, use.sigma2, rng);
  return use;
}

}  // namespace

ChannelUse draw_channel_use(const ChannelModel& model, const Constellation& c, double snr_db,
                            Rng& rng) {
  ComplexMatrix h = model.sample(rng);
  std::vector<std::size_t> idx(model.layers());
  for (auto& i : idx) i = static_cast<std::size_t>(rng.below(c.order()));
  return finish_use(model, c, snr_db, std::move(h), std::move(idx), rng);
}

ChannelUse draw_channel_use(const ChannelModel& model, const Constellation& c, double snr_db,
                            std::span<const std::size_t> symbol_indices, Rng& rng) {
  if (symbol_indices.size() != model.layers()) throw DimensionError("one symbol per layer expected");
  for (auto i : symbol_indices)
    if (i >= c.order()) throw DimensionError("symbol index out of range");
  ComplexMatrix h = model.sample(rng);
  return finish_use(model, c, snr_db, std::move(h),
                    std::vector<std::size_t>(symbol_indices.begin(), symbol_indices.end()), rng);
}

}  // namespace recursic

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
#include <vector>

#include "recursic/modem.hpp"
#include "recursic/numerics.hpp"
#include "recursic/rng.hpp"

namespace recursic {

/// sigma^2 = 1 / (10^(snr_db/10) * layers).
double noise_variance(double snr_db, std::size_t layers);

struct ChannelSpec {
  enum class Kind { kIid, kKronecker };
  Kind kind = Kind::kIid;
  double rho_rx = 0.0;
  double rho_tx = 0.0;
};

/// N x L matrix of i.i.d. CN(0, 1) entries.
ComplexMatrix sample_rayleigh(std::size_t n, std::size_t l, Rng& rng);

/// (R)_{ij} = rho^{|i-j|}.
ComplexMatrix exponential_correlation(std::size_t n, double rho);

/// Principal square root of a real symmetric positive semi-definite matrix
/// (Jacobi eigendecomposition). Imaginary parts of the input are ignored.
ComplexMatrix symmetric_sqrt(const ComplexMatrix& a);

/// R_rx^{1/2} W R_tx^{1/2} with W i.i.d. CN(0, 1) and exponential correlation.
ComplexMatrix sample_kronecker(std::size_t n, std::size_t l, double rho_rx, double rho_tx, Rng& rng);

/// y = h s + n with n ~ CN(0, sigma2 I).
ComplexVector transmit(const ComplexMatrix& h, std::span<const Complex> s, double sigma2, Rng& rng);

/// Channel draws for a fixed spec and size; caches the correlation roots.
class ChannelModel {
 public:
  ChannelModel(ChannelSpec spec, std::size_t receive, std::size_t layers);

  ComplexMatrix sample(Rng& rng) const;

  std::size_t receive() const { return n_; }
  std::size_t layers() const { return l_; }
  const ChannelSpec& spec() const { return spec_; }

 private:
  ChannelSpec spec_;
  std::size_t n_;
  std::size_t l_;
  ComplexMatrix rx_root_;
  ComplexMatrix tx_root_;
};

struct ChannelUse {
  ComplexMatrix h;
  std::vector<std::size_t> symbol_indices;  // per layer, original order
  ComplexVector s;
  std::vector<Bit> bits;  // L x log2(M), row-major
  ComplexVector y;
  double sigma2 = 0.0;
  double snr_db = 0.0;
};

/// Draws H, uniform symbols and noise from rng in that order. The noise is
/// drawn as unit-variance w and scaled by sqrt(sigma2), so one stream yields
/// the same (H, s, w) at every SNR.
ChannelUse draw_channel_use(const ChannelModel& model, const Constellation& c, double snr_db,
                            Rng& rng);

/// Same, but with caller-provided symbol indices (e.g. coded bits).
ChannelUse draw_channel_use(const ChannelModel& model, const Constellation& c, double snr_db,
                            std::span<const std::size_t> symbol_indices, Rng& rng);

}  // namespace recursic

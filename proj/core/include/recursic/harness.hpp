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
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "recursic/channel.hpp"
#include "recursic/detection.hpp"
#include "recursic/ldpc.hpp"
#include "recursic/modem.hpp"
#include "recursic/recursic.hpp"

namespace recursic {

enum class DetectorKind { kMl, kMmse, kZf, kZfSic, kMmseSic, kRecursic };

std::string_view to_string(DetectorKind kind);

struct DetectorSpec {
  std::string id;
  DetectorKind kind = DetectorKind::kMmse;
  std::size_t k = 1;
  double llr_max = std::numeric_limits<double>::infinity();
  std::string weights;      // resolved path, recursic only
  bool sign_only = false;   // replace LLRs by +-llr_max
  EmbeddingInput embedding = EmbeddingInput::kGlobalSnr;
};

struct SweepConfig {
  std::size_t modulation_order = 16;
  std::size_t receive_antennas = 2;
  std::size_t layers = 2;
  ChannelSpec channel;
  std::vector<double> snr_db;
  std::vector<DetectorSpec> detectors;
  std::size_t trials = 0;     // channel uses per point (uncoded)
  std::size_t codewords = 0;  // codewords per point (coded)
  std::string code;           // alist path (coded)
  std::size_t max_iters = 25;
  double norm_factor = 0.75;
  std::uint64_t seed = 0;
  std::string output;
  std::size_t workers = 1;
};

/// Parses and validates a sweep config. Relative paths (weights, code,
/// output) are resolved against base_dir. Unknown fields are rejected.
SweepConfig parse_config_json(std::string_view text, const std::string& base_dir = ".");
SweepConfig parse_config(const std::string& path);

/// Common checks plus the requirement of the given sweep kind.
void validate_config(const SweepConfig& cfg, bool coded);

struct SweepRow {
  std::string detector;
  double snr_db = 0.0;
  std::string metric;  // ber | bler | throughput
  double value = 0.0;
  std::uint64_t trials = 0;  // channel uses (ber) or codewords (bler, throughput)
  double ci95 = 0.0;         // Wilson half-width
  double seconds = 0.0;
  std::uint64_t block_evals = 0;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

inline constexpr std::string_view kCsvHeader = "detector,snr_db,metric,value,trials,ci95,seconds,block_evals";

std::string format_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_csv(std::string_view text);
void write_csv(const std::vector<SweepRow>& rows, const std::string& path);
std::vector<SweepRow> read_csv(const std::string& path);

struct Interval {
  double low = 0.0;
  double high = 0.0;
  double half_width() const { return 0.5 * (high - low); }
};

/// 95% Wilson score interval for successes out of n.
Interval wilson_interval(std::uint64_t successes, std::uint64_t n, double z = 1.959963984540054);

/// One detector of a bank. Implementations are immutable after construction.
class Detector {
 public:
  virtual ~Detector() = default;
  virtual DetectionResult detect(const ChannelUse& use) const = 0;
};

std::unique_ptr<Detector> make_detector(const DetectorSpec& spec, const Constellation& c,
                                        std::size_t layers);

struct SweepResult {
  std::vector<SweepRow> rows;
  /// Order-independent checksum of the channel uses each detector saw,
  /// keyed by (detector id, snr_db).
  std::map<std::pair<std::string, double>, std::uint64_t> stream_checksums;
  /// Raw error counts keyed by (detector id, snr_db).
  std::map<std::pair<std::string, double>, std::pair<std::uint64_t, std::uint64_t>> errors;
};

/// Uncoded BER. Trial t at SNR s draws its channel use from the stream
/// (seed, s, t), so every detector and every worker count sees the same data.
SweepResult run_uncoded_sweep(const SweepConfig& cfg);

/// Coded BLER and throughput with the given code. Codeword bits fill
/// channel uses layer-major: bit i goes to use i / (L B), layer (i / B) % L,
/// label bit i % B.
SweepResult run_coded_sweep(const SweepConfig& cfg, const ParityCheckMatrix& code);

/// Fixed-width summary table of rows, grouped by metric.
std::string format_report(const std::vector<SweepRow>& rows);

}  // namespace recursic

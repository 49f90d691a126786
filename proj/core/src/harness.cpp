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

#include "recursic/harness.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "recursic/classic.hpp"
#include "recursic/errors.hpp"
#include "recursic/network.hpp"

namespace recursic {

std::string_view to_string(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::kMl: return "ml";
    case DetectorKind::kMmse: return "mmse";
    case DetectorKind::kZf: return "zf";
    case DetectorKind::kZfSic: return "zf_sic";
    case DetectorKind::kMmseSic: return "mmse_sic";
    case DetectorKind::kRecursic: return "recursic";
  }
  return "?";
}

// ---------------------------------------------------------------- config

namespace {
void validate_common(const SweepConfig& cfg);
}  // namespace

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError(where + ": unknown field '" + key + "'");
  }
}

template <typename T>
T field(const json& obj, const std::string& name, const std::string& where) {
  if (!obj.contains(name)) throw ConfigError(where + ": missing required field '" + name + "'");
  try {
    return obj.at(name).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + ": field '" + name + "' has the wrong type");
  }
}

template <typename T>
T field_or(const json& obj, const std::string& name, T fallback, const std::string& where) {
  return obj.contains(name) ? field<T>(obj, name, where) : fallback;
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  if (path.empty()) return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

DetectorKind parse_kind(const std::string& s, const std::string& where) {
  for (auto k : {DetectorKind::kMl, DetectorKind::kMmse, DetectorKind::kZf, DetectorKind::kZfSic,
                 DetectorKind::kMmseSic, DetectorKind::kRecursic})
    if (to_string(k) == s) return k;
  throw ConfigError(where + ": unknown detector type '" + s + "'");
}

}  // namespace

SweepConfig parse_config_json(std::string_view text, const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  const std::string top = "config";
  reject_unknown(doc,
                 {"modulation_order", "receive_antennas", "layers", "channel", "snr_db", "detectors", "trials",
                  "codewords", "code", "max_iters", "norm_factor", "seed", "output", "workers"},
                 top);
  SweepConfig cfg;
  cfg.modulation_order = field<std::size_t>(doc, "modulation_order", top);
  cfg.receive_antennas = field_or<std::size_t>(doc, "receive_antennas", 2, top);
  cfg.layers = field_or<std::size_t>(doc, "layers", 2, top);
  cfg.snr_db = field<std::vector<double>>(doc, "snr_db", top);
  cfg.trials = field_or<std::size_t>(doc, "trials", 0, top);
  cfg.codewords = field_or<std::size_t>(doc, "codewords", 0, top);
  cfg.code = resolve(base_dir, field_or<std::string>(doc, "code", "", top));
  cfg.max_iters = field_or<std::size_t>(doc, "max_iters", 25, top);
  cfg.norm_factor = field_or<double>(doc, "norm_factor", 0.75, top);
  cfg.seed = field<std::uint64_t>(doc, "seed", top);
  cfg.output = resolve(base_dir, field_or<std::string>(doc, "output", "", top));
  cfg.workers = field_or<std::size_t>(doc, "workers", 1, top);

  if (doc.contains("channel")) {
    const auto& ch = doc.at("channel");
    reject_unknown(ch, {"type", "rho_rx", "rho_tx"}, "config.channel");
    const auto type = field<std::string>(ch, "type", "config.channel");
    if (type == "iid") {
      cfg.channel.kind = ChannelSpec::Kind::kIid;
    } else if (type == "kronecker") {
      cfg.channel.kind = ChannelSpec::Kind::kKronecker;
      cfg.channel.rho_rx = field_or<double>(ch, "rho_rx", 0.0, "config.channel");
      cfg.channel.rho_tx = field_or<double>(ch, "rho_tx", 0.0, "config.channel");
    } else {
      throw ConfigError("config.channel: unknown type '" + type + "'");
    }
  }

  const auto& dets = doc.at("detectors");
  if (!dets.is_array()) throw ConfigError("config: field 'detectors' must be an array");
  for (std::size_t i = 0; i < dets.size(); ++i) {
    const std::string where = "config.detectors[" + std::to_string(i) + "]";
    const auto& d = dets[i];
    reject_unknown(d, {"id", "type", "k", "llr_max", "weights", "sign_only", "embedding"}, where);
    DetectorSpec spec;
    spec.kind = parse_kind(field<std::string>(d, "type", where), where);
    spec.id = field_or<std::string>(d, "id", std::string(to_string(spec.kind)), where);
    spec.k = field_or<std::size_t>(d, "k", 1, where);
    spec.llr_max = field_or<double>(d, "llr_max", std::numeric_limits<double>::infinity(), where);
    spec.weights = resolve(base_dir, field_or<std::string>(d, "weights", "", where));
    spec.sign_only = field_or<bool>(d, "sign_only", false, where);
    const auto emb = field_or<std::string>(d, "embedding", "global", where);
    if (emb == "global") {
      spec.embedding = EmbeddingInput::kGlobalSnr;
    } else if (emb == "per_layer") {
      spec.embedding = EmbeddingInput::kPerLayerSnr;
    } else {
      throw ConfigError(where + ": unknown embedding '" + emb + "'");
    }
    cfg.detectors.push_back(std::move(spec));
  }
  validate_common(cfg);
  return cfg;
}

SweepConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const auto dir = std::filesystem::path(path).parent_path().string();
  return parse_config_json(ss.str(), dir.empty() ? "." : dir);
}

namespace {

void validate_common(const SweepConfig& cfg) {
  make_qam(cfg.modulation_order);
  if (cfg.receive_antennas == 0) throw ConfigError("config: receive_antennas must be >= 1");
  if (cfg.layers == 0) throw ConfigError("config: layers must be >= 1");
  if (cfg.snr_db.empty()) throw ConfigError("config: snr_db grid must not be empty");
  if (cfg.detectors.empty()) throw ConfigError("config: detectors must not be empty");
  if (cfg.workers == 0) throw ConfigError("config: workers must be >= 1");
  std::set<std::string> ids;
  for (const auto& d : cfg.detectors) {
    const std::string where = "config: detector '" + d.id + "'";
    if (!ids.insert(d.id).second) throw ConfigError(where + " is listed twice");
    if (d.sign_only && !std::isfinite(d.llr_max)) throw ConfigError(where + ": sign_only needs a finite llr_max");
    if (d.kind == DetectorKind::kRecursic) {
      if (d.weights.empty()) throw ConfigError(where + ": field 'weights' is required");
      if (!std::filesystem::exists(d.weights)) throw ConfigError(where + ": weight file '" + d.weights + "' not found");
      if (d.k < 1 || d.k > cfg.modulation_order) throw ConfigError(where + ": k must lie in [1, M]");
    }
  }
}

}  // namespace

void validate_config(const SweepConfig& cfg, bool coded) {
  validate_common(cfg);
  if (coded) {
    if (cfg.codewords == 0) throw ConfigError("config: field 'codewords' must be >= 1 for coded sweeps");
    if (!(cfg.norm_factor > 0.0 && cfg.norm_factor <= 1.0)) throw ConfigError("config: norm_factor must lie in (0, 1]");
  } else if (cfg.trials == 0) {
    throw ConfigError("config: field 'trials' must be >= 1 for uncoded sweeps");
  }
}

// ---------------------------------------------------------------- csv

namespace {

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <typename T>
T parse_number(std::string_view s, std::size_t line) {
  T v{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw ParseError("csv line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::string format_csv(const std::vector<SweepRow>& rows) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += r.detector + ',' + fmt_double(r.snr_db) + ',' + r.metric + ',' + fmt_double(r.value) + ',' +
           std::to_string(r.trials) + ',' + fmt_double(r.ci95) + ',' + fmt_double(r.seconds) + ',' +
           std::to_string(r.block_evals) + '\n';
  }
  return out;
}

std::vector<SweepRow> parse_csv(std::string_view text) {
  std::vector<SweepRow> rows;
  std::size_t line_no = 0;
  bool header = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header) {
      if (line != kCsvHeader) throw ParseError("csv: unexpected header '" + std::string(line) + "'");
      header = true;
      continue;
    }
    std::vector<std::string_view> f;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      f.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (f.size() != 8) throw ParseError("csv line " + std::to_string(line_no) + ": expected 8 fields");
    SweepRow r;
    r.detector = std::string(f[0]);
    r.snr_db = parse_number<double>(f[1], line_no);
    r.metric = std::string(f[2]);
    r.value = parse_number<double>(f[3], line_no);
    r.trials = parse_number<std::uint64_t>(f[4], line_no);
    r.ci95 = parse_number<double>(f[5], line_no);
    r.seconds = parse_number<double>(f[6], line_no);
    r.block_evals = parse_number<std::uint64_t>(f[7], line_no);
    rows.push_back(std::move(r));
  }
  if (!header) throw ParseError("csv: missing header");
  return rows;
}

void write_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << format_csv(rows);
  if (!out) throw Error("failed writing '" + path + "'");
}

std::vector<SweepRow> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

// ---------------------------------------------------------------- detectors

namespace {

void apply_sign_only(DetectionResult& r, double magnitude) {
  for (auto& v : r.llrs) v = v >= 0.0 ? magnitude : -magnitude;
}

class MlDetector final : public Detector {
 public:
  explicit MlDetector(Constellation c) : c_(std::move(c)) {}
  DetectionResult detect(const ChannelUse& use) const override {
    return detect_ml_maxlog(preprocess(use.h, use.y, use.sigma2), c_);
  }

 private:
  Constellation c_;
};

class LinearDetector final : public Detector {
 public:
  LinearDetector(Constellation c, LinearMode mode, bool sic) : c_(std::move(c)), mode_(mode), sic_(sic) {}
  DetectionResult detect(const ChannelUse& use) const override {
    return sic_ ? detect_sic(use.y, use.h, use.sigma2, c_, mode_) : detect_linear(use.y, use.h, use.sigma2, c_, mode_);
  }

 private:
  Constellation c_;
  LinearMode mode_;
  bool sic_;
};

class RecursicBankDetector final : public Detector {
 public:
  explicit RecursicBankDetector(RecursicDetector det) : det_(std::move(det)) {}
  DetectionResult detect(const ChannelUse& use) const override {
    return det_.detect(use.y, use.h, use.sigma2, use.snr_db);
  }

 private:
  RecursicDetector det_;
};

class SignOnly final : public Detector {
 public:
  SignOnly(std::unique_ptr<Detector> inner, double magnitude) : inner_(std::move(inner)), magnitude_(magnitude) {}
  DetectionResult detect(const ChannelUse& use) const override {
    DetectionResult r = inner_->detect(use);
    apply_sign_only(r, magnitude_);
    return r;
  }

 private:
  std::unique_ptr<Detector> inner_;
  double magnitude_;
};

}  // namespace

std::unique_ptr<Detector> make_detector(const DetectorSpec& spec, const Constellation& c, std::size_t layers) {
  std::unique_ptr<Detector> det;
  switch (spec.kind) {
    case DetectorKind::kMl: det = std::make_unique<MlDetector>(c); break;
    case DetectorKind::kMmse: det = std::make_unique<LinearDetector>(c, LinearMode::kMmse, false); break;
    case DetectorKind::kZf: det = std::make_unique<LinearDetector>(c, LinearMode::kZf, false); break;
    case DetectorKind::kZfSic: det = std::make_unique<LinearDetector>(c, LinearMode::kZf, true); break;
    case DetectorKind::kMmseSic: det = std::make_unique<LinearDetector>(c, LinearMode::kMmse, true); break;
    case DetectorKind::kRecursic: {
      NetworkParams params = load_weights(spec.weights);
      if (params.order != c.order())
        throw ConfigError("detector '" + spec.id + "': weights are for M=" + std::to_string(params.order));
      SoftConfig soft = std::isfinite(spec.llr_max) ? SoftConfig::with_clip(spec.k, spec.llr_max) : SoftConfig{};
      soft.k = spec.k;
      soft.embedding = spec.embedding;
      det = std::make_unique<RecursicBankDetector>(RecursicDetector(std::move(params), c, soft));
      break;
    }
  }
  (void)layers;
  if (spec.sign_only) det = std::make_unique<SignOnly>(std::move(det), spec.llr_max);
  return det;
}

// ---------------------------------------------------------------- sweeps

namespace {

std::uint64_t hash_use(const ChannelUse& use) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](double v) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xffu;
      h *= 0x100000001b3ull;
    }
  };
  for (const auto& z : use.h.entries()) { mix(z.real()); mix(z.imag()); }
  for (const auto& z : use.s) { mix(z.real()); mix(z.imag()); }
  for (const auto& z : use.y) { mix(z.real()); mix(z.imag()); }
  std::uint64_t s = h;
  return splitmix64(s);
}

struct Tally {
  std::uint64_t errors = 0;
  std::uint64_t observations = 0;
  std::uint64_t trials = 0;
  std::uint64_t block_evals = 0;
  std::uint64_t checksum = 0;
  double seconds = 0.0;

  Tally& operator+=(const Tally& o) {
    errors += o.errors;
    observations += o.observations;
    trials += o.trials;
    block_evals += o.block_evals;
    checksum += o.checksum;
    seconds += o.seconds;
    return *this;
  }
};

using Clock = std::chrono::steady_clock;

// Runs body(worker, begin, end) on contiguous ranges of [0, count).
template <typename Body>
void parallel_ranges(std::size_t count, std::size_t workers, Body&& body) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    body(0, 0, count);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> failures(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = count * w / workers;
    const std::size_t end = count * (w + 1) / workers;
    threads.emplace_back([&, w, begin, end] {
      try {
        body(w, begin, end);
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);
}

std::vector<std::unique_ptr<Detector>> build_bank(const SweepConfig& cfg, const Constellation& c) {
  std::vector<std::unique_ptr<Detector>> bank;
  for (const auto& spec : cfg.detectors) bank.push_back(make_detector(spec, c, cfg.layers));
  return bank;
}

}  // namespace

SweepResult run_uncoded_sweep(const SweepConfig& cfg) {
  validate_config(cfg, false);
  const Constellation c = make_qam(cfg.modulation_order);
  const ChannelModel model(cfg.channel, cfg.receive_antennas, cfg.layers);
  const auto bank = build_bank(cfg, c);
  const std::size_t nd = bank.size();

  SweepResult result;
  for (double snr : cfg.snr_db) {
    const std::uint64_t key = std::bit_cast<std::uint64_t>(snr);
    std::vector<std::vector<Tally>> per_worker(cfg.workers, std::vector<Tally>(nd));
    parallel_ranges(cfg.trials, cfg.workers, [&](std::size_t w, std::size_t begin, std::size_t end) {
      auto& tallies = per_worker[w];
      for (std::size_t t = begin; t < end; ++t) {
        Rng rng = Rng::stream(cfg.seed, key, t);
        const ChannelUse use = draw_channel_use(model, c, snr, rng);
        const std::uint64_t h = hash_use(use);
        for (std::size_t d = 0; d < nd; ++d) {
          const auto t0 = Clock::now();
          const DetectionResult r = bank[d]->detect(use);
          tallies[d].seconds += std::chrono::duration<double>(Clock::now() - t0).count();
          for (std::size_t i = 0; i < use.bits.size(); ++i) tallies[d].errors += r.hard_bits[i] != use.bits[i];
          tallies[d].observations += use.bits.size();
          tallies[d].trials += 1;
          tallies[d].block_evals += r.block_evaluations;
          tallies[d].checksum += h;
        }
      }
    });
    for (std::size_t d = 0; d < nd; ++d) {
      Tally total;
      for (const auto& wt : per_worker) total += wt[d];
      const auto& id = cfg.detectors[d].id;
      const Interval ci = wilson_interval(total.errors, total.observations);
      result.rows.push_back({id, snr, "ber",
                             static_cast<double>(total.errors) / static_cast<double>(total.observations),
                             total.trials, ci.half_width(), total.seconds, total.block_evals});
      result.stream_checksums[{id, snr}] = total.checksum;
      result.errors[{id, snr}] = {total.errors, total.observations};
    }
  }
  return result;
}

SweepResult run_coded_sweep(const SweepConfig& cfg, const ParityCheckMatrix& code) {
  validate_config(cfg, true);
  const Constellation c = make_qam(cfg.modulation_order);
  const std::size_t bps = c.bits_per_symbol();
  const std::size_t per_use = cfg.layers * bps;
  if (code.n() % per_use != 0) {
    throw ConfigError("code length " + std::to_string(code.n()) + " is not a multiple of the " +
                      std::to_string(per_use) + " bits carried per channel use");
  }
  const std::size_t uses = code.n() / per_use;
  const LdpcEncoder encoder(code);
  const ChannelModel model(cfg.channel, cfg.receive_antennas, cfg.layers);
  const auto bank = build_bank(cfg, c);
  const std::size_t nd = bank.size();

  SweepResult result;
  for (double snr : cfg.snr_db) {
    const std::uint64_t key = std::bit_cast<std::uint64_t>(snr);
    std::vector<std::vector<Tally>> per_worker(cfg.workers, std::vector<Tally>(nd));
    parallel_ranges(cfg.codewords, cfg.workers, [&](std::size_t w, std::size_t begin, std::size_t end) {
      auto& tallies = per_worker[w];
      std::vector<std::vector<double>> llrs(nd, std::vector<double>(code.n()));
      std::vector<std::size_t> idx(cfg.layers);
      for (std::size_t t = begin; t < end; ++t) {
        Rng rng = Rng::stream(cfg.seed, key, t);
        std::vector<Bit> info(encoder.k());
        for (auto& b : info) b = static_cast<Bit>(rng.below(2));
        const std::vector<Bit> cw = encoder.encode(info);
        std::uint64_t h = 0;
        for (std::size_t u = 0; u < uses; ++u) {
          for (std::size_t l = 0; l < cfg.layers; ++l)
            idx[l] = c.index_of(std::span<const Bit>(cw).subspan(u * per_use + l * bps, bps));
          const ChannelUse use = draw_channel_use(model, c, snr, idx, rng);
          h += hash_use(use);
          for (std::size_t d = 0; d < nd; ++d) {
            const auto t0 = Clock::now();
            const DetectionResult r = bank[d]->detect(use);
            tallies[d].seconds += std::chrono::duration<double>(Clock::now() - t0).count();
            std::copy(r.llrs.begin(), r.llrs.end(), llrs[d].begin() + static_cast<std::ptrdiff_t>(u * per_use));
            tallies[d].block_evals += r.block_evaluations;
          }
        }
        for (std::size_t d = 0; d < nd; ++d) {
          const auto t0 = Clock::now();
          const DecodeResult dec = decode_min_sum(code, llrs[d], cfg.max_iters, cfg.norm_factor);
          tallies[d].seconds += std::chrono::duration<double>(Clock::now() - t0).count();
          tallies[d].errors += encoder.extract_info(dec.bits) != info;
          tallies[d].observations += 1;
          tallies[d].trials += 1;
          tallies[d].checksum += h;
        }
      }
    });
    for (std::size_t d = 0; d < nd; ++d) {
      Tally total;
      for (const auto& wt : per_worker) total += wt[d];
      const auto& id = cfg.detectors[d].id;
      const Interval ci = wilson_interval(total.errors, total.observations);
      const double bler = static_cast<double>(total.errors) / static_cast<double>(total.observations);
      result.rows.push_back({id, snr, "bler", bler, total.trials, ci.half_width(), total.seconds, total.block_evals});
      result.rows.push_back(
          {id, snr, "throughput", 1.0 - bler, total.trials, ci.half_width(), total.seconds, total.block_evals});
      result.stream_checksums[{id, snr}] = total.checksum;
      result.errors[{id, snr}] = {total.errors, total.observations};
    }
  }
  return result;
}

std::string format_report(const std::vector<SweepRow>& rows) {
  std::vector<std::string> metrics;
  std::vector<double> snrs;
  std::vector<std::string> detectors;
  for (const auto& r : rows) {
    if (std::find(metrics.begin(), metrics.end(), r.metric) == metrics.end()) metrics.push_back(r.metric);
    if (std::find(snrs.begin(), snrs.end(), r.snr_db) == snrs.end()) snrs.push_back(r.snr_db);
    if (std::find(detectors.begin(), detectors.end(), r.detector) == detectors.end()) detectors.push_back(r.detector);
  }
  std::sort(snrs.begin(), snrs.end());
  std::size_t width = 8;
  for (const auto& d : detectors) width = std::max(width, d.size());

  std::ostringstream out;
  char buf[64];
  for (const auto& metric : metrics) {
    out << metric << '\n';
    out << std::string(width, ' ');
    for (double s : snrs) {
      std::snprintf(buf, sizeof buf, " %10.1f dB", s);
      out << buf;
    }
    out << '\n';
    for (const auto& det : detectors) {
      out << det << std::string(width - det.size(), ' ');
      for (double s : snrs) {
        auto it = std::find_if(rows.begin(), rows.end(), [&](const SweepRow& r) {
          return r.metric == metric && r.detector == det && r.snr_db == s;
        });
        if (it == rows.end()) {
          std::snprintf(buf, sizeof buf, " %13s", "-");
        } else {
          std::snprintf(buf, sizeof buf, " %13.3e", it->value);
        }
        out << buf;
      }
      out << '\n';
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace recursic

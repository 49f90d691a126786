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

// Command line front end: train, calibrate, sweep-uncoded, sweep-coded, report.

#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "recursic/channel.hpp"
#include "recursic/errors.hpp"
#include "recursic/harness.hpp"
#include "recursic/ldpc.hpp"
#include "recursic/modem.hpp"
#include "recursic/network.hpp"
#include "recursic/recursic.hpp"
#include "recursic/training.hpp"

namespace {

using nlohmann::json;
using namespace recursic;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<std::size_t> workers;
};

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
}

std::string base_dir(const std::string& path) {
  const auto dir = std::filesystem::path(path).parent_path();
  return dir.empty() ? "." : dir.string();
}

std::string resolve(const std::string& dir, const std::string& p) {
  if (p.empty() || std::filesystem::path(p).is_absolute()) return p;
  return (std::filesystem::path(dir) / p).lexically_normal().string();
}

void check_fields(const json& doc, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, _] : doc.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError("config: unknown field '" + key + "'");
}

ChannelSpec channel_from(const json& doc) {
  ChannelSpec spec;
  if (!doc.contains("channel")) return spec;
  const auto& ch = doc.at("channel");
  check_fields(ch, {"type", "rho_rx", "rho_tx"});
  const auto type = ch.value("type", std::string("iid"));
  if (type == "kronecker") {
    spec.kind = ChannelSpec::Kind::kKronecker;
    spec.rho_rx = ch.value("rho_rx", 0.0);
    spec.rho_tx = ch.value("rho_tx", 0.0);
  } else if (type != "iid") {
    throw ConfigError("config.channel: unknown type '" + type + "'");
  }
  return spec;
}

EmbeddingInput embedding_from(const json& doc) {
  const auto e = doc.value("embedding", std::string("global"));
  if (e == "global") return EmbeddingInput::kGlobalSnr;
  if (e == "per_layer") return EmbeddingInput::kPerLayerSnr;
  throw ConfigError("config: unknown embedding '" + e + "'");
}

std::string sidecar_log_path(const std::string& weights) {
  std::filesystem::path p(weights);
  p.replace_extension(".log.csv");
  return p.string();
}

int cmd_train(const CommonFlags& f) {
  const json doc = read_json(f.config);
  check_fields(doc, {"modulation_order", "receive_antennas", "layers", "channel", "sample_count", "snr_low_db",
                     "snr_high_db", "k_train", "batch_size", "step_size", "schedule", "epochs",
                     "holdout_fraction", "teacher_forcing_epochs", "embedding", "layout_version", "seed", "output"});
  if (!doc.contains("modulation_order")) throw ConfigError("config: missing required field 'modulation_order'");
  const Constellation c = make_qam(doc.at("modulation_order").get<std::size_t>());
  TrainConfig cfg;
  cfg.sample_count = doc.value("sample_count", cfg.sample_count);
  cfg.snr_low_db = doc.value("snr_low_db", cfg.snr_low_db);
  cfg.snr_high_db = doc.value("snr_high_db", cfg.snr_high_db);
  cfg.k_train = doc.value("k_train", cfg.k_train);
  cfg.batch_size = doc.value("batch_size", cfg.batch_size);
  cfg.step_size = doc.value("step_size", cfg.step_size);
  const auto schedule = doc.value("schedule", std::string("constant"));
  if (schedule == "cosine") {
    cfg.schedule = StepSchedule::kCosine;
  } else if (schedule != "constant") {
    throw ConfigError("config: unknown schedule '" + schedule + "'");
  }
  cfg.epochs = doc.value("epochs", cfg.epochs);
  cfg.holdout_fraction = doc.value("holdout_fraction", cfg.holdout_fraction);
  cfg.teacher_forcing_epochs = doc.value("teacher_forcing_epochs", cfg.teacher_forcing_epochs);
  cfg.embedding = embedding_from(doc);
  const int layout = doc.value("layout_version", 1);
  if (layout != 1 && layout != 2) throw ConfigError("config: layout_version must be 1 or 2");
  cfg.film = static_cast<FilmPlacement>(layout);
  cfg.seed = f.seed ? *f.seed : doc.value("seed", cfg.seed);
  cfg.validate(c.order());

  const ChannelModel model(channel_from(doc), doc.value("receive_antennas", std::size_t{2}),
                           doc.value("layers", std::size_t{2}));
  std::string out = f.out.empty() ? resolve(base_dir(f.config), doc.value("output", std::string())) : f.out;
  if (out.empty()) throw ConfigError("train: no output path (use --out or the 'output' field)");

  std::cerr << "generating " << cfg.sample_count << " samples\n";
  const auto dataset = generate_dataset(cfg, model, c);
  const TrainResult result = train(cfg, dataset, c, [](std::size_t epoch, const TrainLogEntry& e) {
    std::cerr << "epoch " << epoch << "  step " << e.step << "  train " << e.train_loss << "  heldout "
              << e.heldout_loss << "\n";
  });
  save_weights(result.params, out);
  write_train_log(result.log, sidecar_log_path(out));
  std::cerr << "best held-out loss " << result.best_heldout_loss << "\nwrote " << out << "\n";
  return 0;
}

int cmd_calibrate(const CommonFlags& f) {
  const json doc = read_json(f.config);
  check_fields(doc, {"weights", "modulation_order", "receive_antennas", "layers", "channel", "sample_count",
                     "snr_low_db", "snr_high_db", "k", "embedding", "seed", "output"});
  if (!doc.contains("weights")) throw ConfigError("config: missing required field 'weights'");
  const NetworkParams params = load_weights(resolve(base_dir(f.config), doc.at("weights").get<std::string>()));
  const Constellation c = make_qam(params.order);
  if (doc.contains("modulation_order") && doc.at("modulation_order").get<std::size_t>() != params.order)
    throw ConfigError("config: modulation_order does not match the weight file");

  TrainConfig data;
  data.sample_count = doc.value("sample_count", std::size_t{10000});
  data.snr_low_db = doc.value("snr_low_db", data.snr_low_db);
  data.snr_high_db = doc.value("snr_high_db", data.snr_high_db);
  data.seed = f.seed ? *f.seed : doc.value("seed", std::uint64_t{2});
  data.holdout_fraction = 0.0;
  const ChannelModel model(channel_from(doc), doc.value("receive_antennas", std::size_t{2}),
                           doc.value("layers", std::size_t{2}));
  const auto samples = generate_dataset(data, model, c);

  SoftConfig soft;
  soft.k = doc.value("k", std::size_t{4});  // K = 1 leaves too many bits on the fallback
  soft.embedding = embedding_from(doc);
  soft.validate(c.order());
  const double llr_max = estimate_llr_clip(params, samples, soft, c);

  json out_doc = {{"llr_max", llr_max}, {"eps_max", 0.1 * llr_max}, {"k", soft.k}, {"samples", samples.size()}};
  const std::string text = out_doc.dump(2) + "\n";
  std::cout << text;
  std::string out = f.out.empty() ? resolve(base_dir(f.config), doc.value("output", std::string())) : f.out;
  if (!out.empty()) {
    std::ofstream os(out);
    if (!os) throw Error("cannot write '" + out + "'");
    os << text;
  }
  return 0;
}

SweepConfig sweep_config(const CommonFlags& f) {
  SweepConfig cfg = parse_config(f.config);
  if (f.seed) cfg.seed = *f.seed;
  if (f.workers) cfg.workers = *f.workers;
  if (!f.out.empty()) cfg.output = f.out;
  return cfg;
}

void emit(const SweepConfig& cfg, const SweepResult& result) {
  if (cfg.output.empty()) {
    std::cout << format_csv(result.rows);
  } else {
    write_csv(result.rows, cfg.output);
    std::cerr << "wrote " << cfg.output << "\n";
  }
}

int cmd_sweep_uncoded(const CommonFlags& f) {
  const SweepConfig cfg = sweep_config(f);
  emit(cfg, run_uncoded_sweep(cfg));
  return 0;
}

int cmd_sweep_coded(const CommonFlags& f) {
  const SweepConfig cfg = sweep_config(f);
  if (cfg.code.empty()) throw ConfigError("config: field 'code' is required for coded sweeps");
  emit(cfg, run_coded_sweep(cfg, load_alist(cfg.code)));
  return 0;
}

int cmd_report(const std::vector<std::string>& paths) {
  std::vector<SweepRow> rows;
  for (const auto& p : paths) {
    auto part = read_csv(p);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  std::cout << format_report(rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"recursic: learned SIC MIMO detection toolkit"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::vector<std::string> csv_paths;
  auto add_common = [&](CLI::App* sub, bool with_workers) {
    sub->add_option("--config", flags.config, "JSON config")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", flags.seed, "override the config seed");
    sub->add_option("--out", flags.out, "output path");
    if (with_workers) sub->add_option("--workers", flags.workers, "worker threads")->check(CLI::PositiveNumber);
  };

  auto* train_cmd = app.add_subcommand("train", "train the detector block and write a weight file");
  add_common(train_cmd, false);
  auto* calib_cmd = app.add_subcommand("calibrate", "estimate the LLR clipping level of a weight file");
  add_common(calib_cmd, false);
  auto* uncoded_cmd = app.add_subcommand("sweep-uncoded", "uncoded BER sweep");
  add_common(uncoded_cmd, true);
  auto* coded_cmd = app.add_subcommand("sweep-coded", "coded BLER and throughput sweep");
  add_common(coded_cmd, true);
  auto* report_cmd = app.add_subcommand("report", "summary table of sweep CSV files");
  report_cmd->add_option("csv", csv_paths, "sweep CSV files")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train_cmd) return cmd_train(flags);
    if (*calib_cmd) return cmd_calibrate(flags);
    if (*uncoded_cmd) return cmd_sweep_uncoded(flags);
    if (*coded_cmd) return cmd_sweep_coded(flags);
    if (*report_cmd) return cmd_report(csv_paths);
  } catch (const recursic::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

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

#include <benchmark/benchmark.h>

#include "recursic/channel.hpp"
#include "recursic/classic.hpp"
#include "recursic/network.hpp"
#include "recursic/numerics.hpp"
#include "recursic/recursic.hpp"

namespace {

using namespace recursic;

std::vector<ChannelUse> draws(std::size_t order, std::size_t layers, std::size_t count) {
  const auto c = make_qam(order);
  const ChannelModel model({}, layers, layers);
  Rng rng(5);
  std::vector<ChannelUse> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(draw_channel_use(model, c, 18.0, rng));
  return out;
}

void BM_BlockForward(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  const auto p = NetworkParams::random(m, rng);
  const Film film = compute_film(p, 18.0);
  std::vector<double> probs(m);
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(block_forward_film(p, film, {x, -0.3}, probs));
    x = -x;
  }
  state.counters["macs"] = static_cast<double>(count_macs(m));
}
BENCHMARK(BM_BlockForward)->Arg(4)->Arg(16)->Arg(64);

void BM_SortedQr(benchmark::State& state) {
  const auto uses = draws(16, static_cast<std::size_t>(state.range(0)), 64);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& u = uses[i++ % uses.size()];
    benchmark::DoNotOptimize(sorted_qr_extended(u.h, std::sqrt(u.sigma2)));
  }
}
BENCHMARK(BM_SortedQr)->Arg(2)->Arg(4);

void BM_Multipath(benchmark::State& state) {
  const auto c = make_qam(16);
  const auto uses = draws(16, 2, 64);
  Rng rng(2);
  const RecursicDetector det(NetworkParams::random(16, rng), c,
                             SoftConfig::with_clip(static_cast<std::size_t>(state.range(0)), 9.0));
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& u = uses[i++ % uses.size()];
    benchmark::DoNotOptimize(det.detect(u.y, u.h, u.sigma2, u.snr_db));
  }
}
BENCHMARK(BM_Multipath)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_MlExhaustive(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto c = make_qam(m);
  const auto uses = draws(m, 2, 64);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& u = uses[i++ % uses.size()];
    benchmark::DoNotOptimize(detect_ml_maxlog(preprocess(u.h, u.y, u.sigma2), c));
  }
}
BENCHMARK(BM_MlExhaustive)->Arg(4)->Arg(16)->Arg(64);

void BM_MmseSic(benchmark::State& state) {
  const auto c = make_qam(16);
  const auto uses = draws(16, 2, 64);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& u = uses[i++ % uses.size()];
    benchmark::DoNotOptimize(detect_sic(u.y, u.h, u.sigma2, c, LinearMode::kMmse));
  }
}
BENCHMARK(BM_MmseSic);

}  // namespace

BENCHMARK_MAIN();

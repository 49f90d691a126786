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

#include "recursic/ldpc.hpp"
#include "recursic/rng.hpp"

namespace {

using namespace recursic;

void BM_MinSum(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto code = make_regular_code(n, 3, 6, 1);
  Rng rng(3);
  std::vector<std::vector<double>> frames(32, std::vector<double>(n));
  const double sigma = static_cast<double>(state.range(1)) / 100.0;
  for (auto& f : frames)
    for (auto& v : f) v = 2.0 * (1.0 + sigma * rng.normal_pair()[0]) / (sigma * sigma);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(decode_min_sum(code, frames[i++ % frames.size()]));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_MinSum)->Args({96, 60})->Args({96, 80})->Args({1008, 80});

void BM_Encode(benchmark::State& state) {
  const auto code = make_regular_code(static_cast<std::size_t>(state.range(0)), 3, 6, 1);
  const LdpcEncoder enc(code);
  std::vector<Bit> info(enc.k());
  Rng rng(4);
  for (auto& b : info) b = static_cast<Bit>(rng.below(2));
  for (auto _ : state) benchmark::DoNotOptimize(enc.encode(info));
}
BENCHMARK(BM_Encode)->Arg(96)->Arg(1008);

}  // namespace

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

// Writes a random (dv, dc)-regular parity-check matrix with full row rank
// in alist format. Usage: make_ldpc_code n dv dc seed > code.alist

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

#include "recursic/errors.hpp"
#include "recursic/ldpc.hpp"

int main(int argc, char** argv) {
  if (argc != 5) {
    std::cerr << "usage: " << argv[0] << " n dv dc seed\n";
    return 2;
  }
  const std::size_t n = std::stoul(argv[1]);
  const std::size_t dv = std::stoul(argv[2]);
  const std::size_t dc = std::stoul(argv[3]);
  std::uint64_t seed = std::stoull(argv[4]);
  for (int attempt = 0; attempt < 1000; ++attempt, ++seed) {
    const auto hm = recursic::make_regular_code(n, dv, dc, seed);
    try {
      recursic::LdpcEncoder enc(hm);
    } catch (const recursic::RankDeficientError&) {
      continue;
    }
    std::cerr << "seed " << seed << "\n";
    std::cout << recursic::to_alist(hm);
    return 0;
  }
  std::cerr << "no full-rank matrix found\n";
  return 1;
}

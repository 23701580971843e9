// Copyright (c) 2026 FEPE Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"

#include "fepe/labelgen.hpp"

namespace fepe {

struct BenchOptions {
  std::vector<int> sizes{256, 512};
  std::vector<int> mus{3, 5, 7};
  int repetitions = 3;
  std::uint64_t seed = 42;
  // When > 1, label generation is additionally timed across a batch of
  // images on this many threads.
  unsigned parallel_workers = 0;
};

struct BenchCase {
  int size = 0;
  int mu = 0;
  double naive_ms = 0.0;
  double fast_ms = 0.0;
  double speedup = 0.0;
  std::uint64_t checksum = 0;  // identical for both paths
};

struct BenchReport {
  std::vector<BenchCase> cases;
  int labelgen_size = 0;
  double labelgen_ms_per_image = 0.0;
  unsigned parallel_workers = 0;
  double parallel_ms_per_image = 0.0;
};

// Direct window count, O(H * W * mu^2).
Raster<std::uint16_t> surrounding_naive(const BinaryMap& kernel_map, int mu,
                                        const DirectionOffsets& offsets);

// FNV-1a over the little-endian bytes of every count.
std::uint64_t checksum(const Raster<std::uint16_t>& maps);

// Random blob layout resembling a kernel map.
BinaryMap random_kernel_map(int height, int width, std::uint64_t seed);

// Median-of-repetitions timings after one discarded run. Throws Error when
// the naive and integral-image outputs differ.
BenchReport run_bench(const BenchOptions& options);

nlohmann::ordered_json to_json(const BenchReport& report);

}  // namespace fepe

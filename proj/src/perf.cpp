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

#include "fepe/perf.hpp"

#include <algorithm>
#include <chrono>
#include <random>

#include "fepe/parallel.hpp"

namespace fepe {

namespace {

template <typename Fn>
double median_ms(int repetitions, Fn&& fn) {
  fn();  // discarded
  std::vector<double> times;
  times.reserve(repetitions);
  for (int i = 0; i < repetitions; ++i) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const auto stop = std::chrono::steady_clock::now();
    times.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
  }
  std::nth_element(times.begin(), times.begin() + times.size() / 2, times.end());
  return times[times.size() / 2];
}

AnnotatedImage synthetic_image(int size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(0.0, size);
  std::uniform_real_distribution<double> extent(12.0, size / 4.0);
  AnnotatedImage img{"bench", size, size, {}};
  for (int i = 0; i < 12; ++i) {
    const double x = pos(rng), y = pos(rng), w = extent(rng), h = extent(rng) / 2.0;
    img.instances.push_back({Polygon({{x, y}, {x + w, y}, {x + w, y + h}, {x, y + h}}), false});
  }
  return img;
}

}  // namespace

Raster<std::uint16_t> surrounding_naive(const BinaryMap& kernel_map, int mu,
                                        const DirectionOffsets& offsets) {
  const int h = kernel_map.height();
  const int w = kernel_map.width();
  const int half = mu / 2;
  Raster<std::uint16_t> out(h, w, 4);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      for (int n = 0; n < 4; ++n) {
        const int cx = c + offsets.offsets[n][0];
        const int cy = r + offsets.offsets[n][1];
        unsigned count = 0;
        for (int y = cy - half; y <= cy + half; ++y) {
          if (y < 0 || y >= h) continue;
          for (int x = cx - half; x <= cx + half; ++x) {
            if (x < 0 || x >= w) continue;
            count += kernel_map(y, x);
          }
        }
        out(r, c, n) = static_cast<std::uint16_t>(count);
      }
    }
  }
  return out;
}

std::uint64_t checksum(const Raster<std::uint16_t>& maps) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (std::uint16_t v : maps.data()) {
    for (int shift = 0; shift < 16; shift += 8) {
      hash ^= (v >> shift) & 0xFFu;
      hash *= 0x100000001b3ULL;
    }
  }
  return hash;
}

BinaryMap random_kernel_map(int height, int width, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  BinaryMap map(height, width);
  std::uniform_int_distribution<int> row(0, height - 1), col(0, width - 1);
  std::uniform_int_distribution<int> extent(1, std::max(2, std::min(height, width) / 6));
  const int blobs = std::max(1, height * width / 2048);
  for (int b = 0; b < blobs; ++b) {
    const int r0 = row(rng), c0 = col(rng);
    const int r1 = std::min(height, r0 + extent(rng));
    const int c1 = std::min(width, c0 + extent(rng));
    for (int r = r0; r < r1; ++r) {
      for (int c = c0; c < c1; ++c) map(r, c) = 1;
    }
  }
  return map;
}

BenchReport run_bench(const BenchOptions& options) {
  if (options.repetitions < 3) throw InputError("benchmark needs at least 3 repetitions");
  BenchReport report;
  std::uint64_t seed = options.seed;
  for (int size : options.sizes) {
    if (size <= 0) throw InputError("benchmark sizes must be positive");
    const BinaryMap map = random_kernel_map(size, size, seed++);
    for (int mu : options.mus) {
      if (mu < 1 || mu % 2 == 0) throw InputError("benchmark mu values must be odd and positive");
      const DirectionOffsets offsets = DirectionOffsets::abutting(mu);
      const auto fast = gen_surrounding_maps(map, mu, offsets);
      const auto naive = surrounding_naive(map, mu, offsets);
      BenchCase bench{size, mu, 0.0, 0.0, 0.0, checksum(fast)};
      if (checksum(naive) != bench.checksum || !(naive == fast)) {
        throw Error("surrounding map mismatch between naive and integral paths at size " +
                    std::to_string(size) + ", mu " + std::to_string(mu));
      }
      bench.naive_ms = median_ms(options.repetitions, [&] { (void)surrounding_naive(map, mu, offsets); });
      bench.fast_ms = median_ms(options.repetitions, [&] { (void)gen_surrounding_maps(map, mu, offsets); });
      bench.speedup = bench.fast_ms > 0.0 ? bench.naive_ms / bench.fast_ms : 0.0;
      report.cases.push_back(bench);
    }
  }

  if (!options.sizes.empty()) {
    const int size = *std::max_element(options.sizes.begin(), options.sizes.end());
    const AnnotatedImage img = synthetic_image(size, options.seed);
    const LabelGenConfig cfg;
    report.labelgen_size = size;
    report.labelgen_ms_per_image = median_ms(options.repetitions, [&] { (void)gen_labelset(img, cfg); });
    if (options.parallel_workers > 1) {
      constexpr std::size_t kBatch = 16;
      std::vector<AnnotatedImage> batch;
      for (std::size_t i = 0; i < kBatch; ++i) batch.push_back(synthetic_image(size, options.seed + i));
      const double total = median_ms(options.repetitions, [&] {
        parallel_for(batch.size(), options.parallel_workers, [&](std::size_t i) { (void)gen_labelset(batch[i], cfg); });
      });
      report.parallel_workers = options.parallel_workers;
      report.parallel_ms_per_image = total / kBatch;
    }
  }
  return report;
}

nlohmann::ordered_json to_json(const BenchReport& report) {
  nlohmann::ordered_json cases = nlohmann::ordered_json::array();
  for (const BenchCase& c : report.cases) {
    cases.push_back({{"size", c.size},
                     {"mu", c.mu},
                     {"naive_ms", c.naive_ms},
                     {"fast_ms", c.fast_ms},
                     {"speedup", c.speedup},
                     {"checksum_naive", c.checksum},
                     {"checksum_fast", c.checksum}});
  }
  nlohmann::ordered_json doc{{"cases", cases},
                             {"labelgen", {{"size", report.labelgen_size}, {"ms_per_image", report.labelgen_ms_per_image}}}};
  if (report.parallel_workers > 1) {
    doc["parallel"] = {{"workers", report.parallel_workers}, {"ms_per_image", report.parallel_ms_per_image}};
  }
  return doc;
}

}  // namespace fepe

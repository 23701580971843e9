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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fepe/geometry.hpp"
#include "fepe/raster.hpp"

namespace fepe {

struct TextInstance {
  Polygon polygon;
  bool ignore = false;

  friend bool operator==(const TextInstance&, const TextInstance&) = default;
};

struct AnnotatedImage {
  std::string image_id;
  int height = 0;
  int width = 0;
  std::vector<TextInstance> instances;
};

struct TargetSize {
  int height = 0;
  int width = 0;
};

struct LabelGenConfig {
  double delta = 0.4;   // shrinking ratio
  double a_min = 16.0;  // kernels with area <= a_min are dropped (px^2)
  int mu = 5;           // side of the perception window, odd
  std::optional<TargetSize> target_size;

  // Throws InputError on out-of-range fields.
  void validate() const;
};

enum Direction : int { kLeft = 0, kRight = 1, kUp = 2, kDown = 3 };

// Displacement (dx, dy) of each window center; dx moves along columns.
struct DirectionOffsets {
  std::array<std::array<int, 2>, 4> offsets{};

  // Windows abut the target pixel without containing it: the center is
  // displaced by ceil((mu + 1) / 2) along each axis direction.
  static DirectionOffsets abutting(int mu);
};

struct KernelPolygon {
  std::size_t instance = 0;
  Polygon polygon;
};

struct LabelSet {
  BinaryMap text_map;
  BinaryMap kernel_map;
  BinaryMap ignore_mask;            // 1 = excluded from supervision
  Raster<float> scale_map;          // px^2 of the owning kernel, 0 elsewhere
  Raster<std::uint16_t> surrounding;  // H x W x 4, left/right/up/down
  std::vector<KernelPolygon> kernel_polygons;
};

struct TextMaps {
  BinaryMap text_map;
  BinaryMap ignore_mask;
};

struct KernelMaps {
  BinaryMap kernel_map;
  std::vector<KernelPolygon> kernel_polygons;
};

// Inward offset used for kernels: (area / perimeter) * (1 - delta^2).
double kernel_shrink_offset(double area, double perimeter, double delta);

TextMaps gen_text_map(const AnnotatedImage& img);
KernelMaps gen_kernel_map(const AnnotatedImage& img, const LabelGenConfig& cfg);

// Every pixel of an 8-connected kernel component holds that component's
// pixel count.
Raster<float> gen_scale_map(const BinaryMap& kernel_map);

// Count of kernel pixels inside a mu x mu window centered at each pixel
// plus the direction offset, clipped to the canvas. O(H * W) in mu.
Raster<std::uint16_t> gen_surrounding_maps(const BinaryMap& kernel_map, int mu,
                                           const DirectionOffsets& offsets);

// Rescales polygons (and canvas) to cfg.target_size when set.
AnnotatedImage rescale(const AnnotatedImage& img, const TargetSize& size);

LabelSet gen_labelset(const AnnotatedImage& img, const LabelGenConfig& cfg);

}  // namespace fepe

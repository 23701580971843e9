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

#include "fepe/labelgen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fepe {

void LabelGenConfig::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InputError("delta must lie in (0, 1), got " + std::to_string(delta));
  }
  if (!(a_min >= 0.0) || !std::isfinite(a_min)) {
    throw InputError("a_min must be a finite non-negative area");
  }
  // mu^2 must fit the 16-bit surrounding counts.
  if (mu < 1 || mu % 2 == 0 || mu > 255) {
    throw InputError("mu must be an odd integer in [1, 255], got " + std::to_string(mu));
  }
  if (target_size && (target_size->height <= 0 || target_size->width <= 0)) {
    throw InputError("target size must be positive");
  }
}

DirectionOffsets DirectionOffsets::abutting(int mu) {
  const int shift = (mu + 2) / 2;
  DirectionOffsets out;
  out.offsets[kLeft] = {-shift, 0};
  out.offsets[kRight] = {shift, 0};
  out.offsets[kUp] = {0, -shift};
  out.offsets[kDown] = {0, shift};
  return out;
}

double kernel_shrink_offset(double area, double perimeter, double delta) {
  return area / perimeter * (1.0 - delta * delta);
}

TextMaps gen_text_map(const AnnotatedImage& img) {
  TextMaps out{BinaryMap(img.height, img.width), BinaryMap(img.height, img.width)};
  for (const TextInstance& inst : img.instances) {
    rasterize_into(inst.ignore ? out.ignore_mask : out.text_map, inst.polygon);
  }
  return out;
}

KernelMaps gen_kernel_map(const AnnotatedImage& img, const LabelGenConfig& cfg) {
  KernelMaps out{BinaryMap(img.height, img.width), {}};
  for (std::size_t i = 0; i < img.instances.size(); ++i) {
    const TextInstance& inst = img.instances[i];
    if (inst.ignore) continue;
    try {
      const double offset = kernel_shrink_offset(polygon_area(inst.polygon),
                                                 polygon_perimeter(inst.polygon), cfg.delta);
      for (Polygon& kernel : offset_polygon(inst.polygon, -offset)) {
        if (polygon_area(kernel) <= cfg.a_min) continue;
        rasterize_into(out.kernel_map, kernel);
        out.kernel_polygons.push_back({i, std::move(kernel)});
      }
    } catch (const InvalidPolygon& e) {
      throw InvalidPolygon("instance " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

Raster<float> gen_scale_map(const BinaryMap& kernel_map) {
  Raster<float> out(kernel_map.height(), kernel_map.width());
  const ComponentLabels comps = label_components(kernel_map);
  std::vector<std::size_t> counts(comps.count + 1, 0);
  for (std::size_t i = 0; i < comps.labels.size(); ++i) ++counts[comps.labels[i]];
  for (std::size_t i = 0; i < comps.labels.size(); ++i) {
    const int label = comps.labels[i];
    if (label) out[i] = static_cast<float>(counts[label]);
  }
  return out;
}

Raster<std::uint16_t> gen_surrounding_maps(const BinaryMap& kernel_map, int mu,
                                           const DirectionOffsets& offsets) {
  if (mu < 1 || mu % 2 == 0) throw InputError("mu must be odd and positive");
  const int h = kernel_map.height();
  const int w = kernel_map.width();

  // Summed-area table with a zero border: sums(r, c) covers rows [0, r) x cols [0, c).
  const int sw = w + 1;
  std::vector<std::uint32_t> sums(static_cast<std::size_t>(h + 1) * sw, 0);
  for (int r = 0; r < h; ++r) {
    std::uint32_t row = 0;
    for (int c = 0; c < w; ++c) {
      row += kernel_map(r, c);
      sums[(r + 1) * sw + c + 1] = sums[r * sw + c + 1] + row;
    }
  }

  const int half = mu / 2;
  Raster<std::uint16_t> out(h, w, 4);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      for (int n = 0; n < 4; ++n) {
        const int cx = c + offsets.offsets[n][0];
        const int cy = r + offsets.offsets[n][1];
        const int c0 = std::max(cx - half, 0);
        const int c1 = std::min(cx + half + 1, w);
        const int r0 = std::max(cy - half, 0);
        const int r1 = std::min(cy + half + 1, h);
        if (c0 >= c1 || r0 >= r1) continue;
        const std::uint32_t count =
            sums[r1 * sw + c1] - sums[r0 * sw + c1] - sums[r1 * sw + c0] + sums[r0 * sw + c0];
        out(r, c, n) = static_cast<std::uint16_t>(count);
      }
    }
  }
  return out;
}

AnnotatedImage rescale(const AnnotatedImage& img, const TargetSize& size) {
  const double sy = static_cast<double>(size.height) / img.height;
  const double sx = static_cast<double>(size.width) / img.width;
  AnnotatedImage out{img.image_id, size.height, size.width, {}};
  out.instances.reserve(img.instances.size());
  for (const TextInstance& inst : img.instances) {
    out.instances.push_back({scale(inst.polygon, sx, sy), inst.ignore});
  }
  return out;
}

LabelSet gen_labelset(const AnnotatedImage& img, const LabelGenConfig& cfg) {
  cfg.validate();
  if (img.height <= 0 || img.width <= 0) {
    throw InputError("image '" + img.image_id + "' has no valid dimensions");
  }
  const AnnotatedImage scaled = cfg.target_size ? rescale(img, *cfg.target_size) : img;

  TextMaps text = gen_text_map(scaled);
  KernelMaps kernels = gen_kernel_map(scaled, cfg);
  // Kernels are strictly inside their text polygons; the mask guards
  // against cell centers landing exactly on a shared boundary.
  for (std::size_t i = 0; i < kernels.kernel_map.size(); ++i) {
    kernels.kernel_map[i] &= text.text_map[i];
  }

  LabelSet out;
  out.scale_map = gen_scale_map(kernels.kernel_map);
  out.surrounding = gen_surrounding_maps(kernels.kernel_map, cfg.mu, DirectionOffsets::abutting(cfg.mu));
  out.text_map = std::move(text.text_map);
  out.ignore_mask = std::move(text.ignore_mask);
  out.kernel_map = std::move(kernels.kernel_map);
  out.kernel_polygons = std::move(kernels.kernel_polygons);
  return out;
}

}  // namespace fepe

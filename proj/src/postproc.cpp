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

#include "fepe/postproc.hpp"

#include <algorithm>
#include <cmath>

namespace fepe {

void PostprocConfig::validate() const {
  if (!(bin_thresh > 0.0 && bin_thresh < 1.0)) throw InputError("bin_thresh must lie in (0, 1)");
  if (!(expand_ratio > 0.0) || !std::isfinite(expand_ratio)) {
    throw InputError("expand_ratio must be positive");
  }
  if (!(min_kernel_area >= 0.0) || !std::isfinite(min_kernel_area)) {
    throw InputError("min_kernel_area must be non-negative");
  }
  if (!(score_thresh >= 0.0 && score_thresh <= 1.0)) {
    throw InputError("score_thresh must lie in [0, 1]");
  }
  if (!(contour_tolerance >= 0.0) || !std::isfinite(contour_tolerance)) {
    throw InputError("contour_tolerance must be non-negative");
  }
}

BinaryMap binarize(const ScoreMap& map, double thresh) {
  BinaryMap out(map.height(), map.width());
  for (std::size_t i = 0; i < map.size(); ++i) out[i] = map[i] >= thresh ? 1 : 0;
  return out;
}

double expand_distance(const Polygon& kernel, double ratio) {
  return polygon_area(kernel) * ratio / polygon_perimeter(kernel);
}

DetectionSet reconstruct(const ScoreMap& map, const PostprocConfig& cfg, std::string image_id) {
  cfg.validate();
  DetectionSet out{std::move(image_id), {}};
  const ComponentLabels comps = label_components(binarize(map, cfg.bin_thresh));

  std::vector<double> score_sum(comps.count + 1, 0.0);
  std::vector<std::size_t> pixels(comps.count + 1, 0);
  for (std::size_t i = 0; i < comps.labels.size(); ++i) {
    const int label = comps.labels[i];
    if (!label) continue;
    score_sum[label] += map[i];
    ++pixels[label];
  }

  const double height = map.height();
  const double width = map.width();
  for (int label = 1; label <= comps.count; ++label) {
    const Polygon kernel =
        simplify_polygon(trace_outer_contour(comps, label), cfg.contour_tolerance);
    if (polygon_area(kernel) <= cfg.min_kernel_area) continue;
    const double score = score_sum[label] / static_cast<double>(pixels[label]);
    if (score < cfg.score_thresh) continue;

    const auto expanded = offset_polygon(kernel, expand_distance(kernel, cfg.expand_ratio));
    if (expanded.empty()) continue;
    auto clipped = clip_to_canvas(expanded.front(), height, width);
    if (clipped.empty()) continue;
    auto largest = std::max_element(clipped.begin(), clipped.end(), [](const Polygon& a, const Polygon& b) {
      return polygon_area(a) < polygon_area(b);
    });
    out.detections.push_back({std::move(*largest), std::clamp(score, 0.0, 1.0)});
  }
  return out;
}

DetectionSet rescale(const DetectionSet& set, double sx, double sy) {
  DetectionSet out{set.image_id, {}};
  out.detections.reserve(set.detections.size());
  for (const Detection& det : set.detections) {
    out.detections.push_back({scale(det.polygon, sx, sy), det.score});
  }
  return out;
}

}  // namespace fepe

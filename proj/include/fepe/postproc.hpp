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

#include <string>
#include <vector>

#include "fepe/geometry.hpp"
#include "fepe/raster.hpp"

namespace fepe {

struct PostprocConfig {
  double bin_thresh = 0.3;
  double expand_ratio = 1.45;
  double min_kernel_area = 16.0;
  double score_thresh = 0.7;
  // Douglas-Peucker tolerance applied to traced kernel contours so the
  // perimeter follows the kernel outline instead of the pixel staircase.
  double contour_tolerance = 0.75;

  void validate() const;
};

struct Detection {
  Polygon polygon;
  double score = 0.0;
};

struct DetectionSet {
  std::string image_id;
  std::vector<Detection> detections;
};

// 1 iff probability >= thresh.
BinaryMap binarize(const ScoreMap& map, double thresh);

// Expansion distance area * ratio / perimeter for a kernel.
double expand_distance(const Polygon& kernel, double ratio);

// Binarize, trace kernels, drop small or low-scoring ones, expand the rest
// and clip them to the canvas.
DetectionSet reconstruct(const ScoreMap& map, const PostprocConfig& cfg, std::string image_id = {});

// Maps detections from label resolution back to source pixels.
DetectionSet rescale(const DetectionSet& set, double sx, double sy);

}  // namespace fepe

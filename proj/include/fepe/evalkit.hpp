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
#include "fepe/labelgen.hpp"
#include "fepe/postproc.hpp"

namespace fepe {

// How a detection is tested against "don't care" ground truth.
enum class IgnoreRule {
  kIou,            // IoU with the ignore region
  kDetectionArea,  // intersection / detection area
};

struct EvalConfig {
  double iou_thresh = 0.5;
  IgnoreRule ignore_rule = IgnoreRule::kIou;

  void validate() const;
};

struct MatchRecord {
  std::size_t det = 0;
  std::size_t gt = 0;
  double iou = 0.0;
};

struct ImageEval {
  std::string image_id;
  std::size_t tp = 0;
  std::size_t num_dets = 0;  // detections counted (ignore-matched ones removed)
  std::size_t num_gts = 0;   // non-ignore ground truths
  std::vector<std::size_t> discarded;  // detection indices dropped by ignore regions
  std::vector<MatchRecord> matches;
};

struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double fmeasure = 0.0;
  std::size_t tp = 0;
  std::size_t num_dets = 0;
  std::size_t num_gts = 0;
  std::vector<ImageEval> per_image;
};

// Area of intersection over area of union; symmetric in its arguments.
double polygon_iou(const Polygon& a, const Polygon& b);

ImageEval evaluate_image(const std::vector<Polygon>& dets, const std::vector<TextInstance>& gts,
                         const EvalConfig& cfg);

// Dataset-level precision/recall from global counts. Images are paired by
// id; any id present on only one side raises InputError.
EvalReport evaluate(const std::vector<DetectionSet>& dets, const std::vector<AnnotatedImage>& gts,
                    const EvalConfig& cfg = {});

}  // namespace fepe

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

#include "fepe/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

namespace fepe {

namespace {

bool geometry_less(const Polygon& a, const Polygon& b) {
  return std::lexicographical_compare(
      a.points().begin(), a.points().end(), b.points().begin(), b.points().end(),
      [](const Point& p, const Point& q) { return std::tie(p.x, p.y) < std::tie(q.x, q.y); });
}

double safe_ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

void EvalConfig::validate() const {
  if (!(iou_thresh > 0.0 && iou_thresh <= 1.0)) throw InputError("iou threshold must lie in (0, 1]");
}

double polygon_iou(const Polygon& a, const Polygon& b) {
  // Fixed argument order makes the result bit-identical under swapping.
  const Polygon& first = geometry_less(b, a) ? b : a;
  const Polygon& second = &first == &a ? b : a;
  const double inter = intersection_area(first, second);
  const double uni = polygon_area(first) + polygon_area(second) - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

ImageEval evaluate_image(const std::vector<Polygon>& dets, const std::vector<TextInstance>& gts,
                         const EvalConfig& cfg) {
  ImageEval out;
  std::vector<bool> kept(dets.size(), true);
  for (std::size_t d = 0; d < dets.size(); ++d) {
    for (const TextInstance& gt : gts) {
      if (!gt.ignore) continue;
      double overlap = 0.0;
      if (cfg.ignore_rule == IgnoreRule::kIou) {
        overlap = polygon_iou(dets[d], gt.polygon);
      } else {
        overlap = intersection_area(dets[d], gt.polygon) / polygon_area(dets[d]);
      }
      if (overlap > cfg.iou_thresh) {
        kept[d] = false;
        out.discarded.push_back(d);
        break;
      }
    }
  }

  std::vector<MatchRecord> candidates;
  for (std::size_t d = 0; d < dets.size(); ++d) {
    if (kept[d]) ++out.num_dets;
  }
  for (std::size_t g = 0; g < gts.size(); ++g) {
    if (gts[g].ignore) continue;
    ++out.num_gts;
    for (std::size_t d = 0; d < dets.size(); ++d) {
      if (!kept[d]) continue;
      const double iou = polygon_iou(dets[d], gts[g].polygon);
      if (iou >= cfg.iou_thresh) candidates.push_back({d, g, iou});
    }
  }

  // Greedy one-to-one matching by descending IoU. Ties fall back to the
  // detection geometry rather than its position, so reordering detections
  // cannot change the outcome.
  std::sort(candidates.begin(), candidates.end(), [&](const MatchRecord& x, const MatchRecord& y) {
    if (x.iou != y.iou) return x.iou > y.iou;
    if (geometry_less(dets[x.det], dets[y.det])) return true;
    if (geometry_less(dets[y.det], dets[x.det])) return false;
    return std::tie(x.gt, x.det) < std::tie(y.gt, y.det);
  });
  std::vector<bool> det_used(dets.size(), false), gt_used(gts.size(), false);
  for (const MatchRecord& m : candidates) {
    if (det_used[m.det] || gt_used[m.gt]) continue;
    det_used[m.det] = true;
    gt_used[m.gt] = true;
    out.matches.push_back(m);
  }
  out.tp = out.matches.size();
  return out;
}

EvalReport evaluate(const std::vector<DetectionSet>& dets, const std::vector<AnnotatedImage>& gts,
                    const EvalConfig& cfg) {
  cfg.validate();
  std::map<std::string, const AnnotatedImage*> gt_by_id;
  for (const AnnotatedImage& img : gts) {
    if (!gt_by_id.emplace(img.image_id, &img).second) {
      throw InputError("duplicate ground-truth image id '" + img.image_id + "'");
    }
  }
  std::map<std::string, const DetectionSet*> det_by_id;
  for (const DetectionSet& set : dets) {
    if (!gt_by_id.count(set.image_id)) {
      throw InputError("detections for unknown image id '" + set.image_id + "'");
    }
    if (!det_by_id.emplace(set.image_id, &set).second) {
      throw InputError("duplicate detection image id '" + set.image_id + "'");
    }
  }
  for (const auto& [id, img] : gt_by_id) {
    if (!det_by_id.count(id)) throw InputError("no detections for image id '" + id + "'");
  }

  EvalReport report;
  for (const auto& [id, set] : det_by_id) {
    std::vector<Polygon> polys;
    polys.reserve(set->detections.size());
    for (const Detection& det : set->detections) polys.push_back(det.polygon);
    ImageEval image = evaluate_image(polys, gt_by_id.at(id)->instances, cfg);
    image.image_id = id;
    report.tp += image.tp;
    report.num_dets += image.num_dets;
    report.num_gts += image.num_gts;
    report.per_image.push_back(std::move(image));
  }
  report.precision = safe_ratio(report.tp, report.num_dets);
  report.recall = safe_ratio(report.tp, report.num_gts);
  const double sum = report.precision + report.recall;
  report.fmeasure = sum > 0.0 ? 2.0 * report.precision * report.recall / sum : 0.0;
  return report;
}

}  // namespace fepe

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "fepe/error.hpp"
#include "fepe/evalkit.hpp"
#include "oracles.hpp"

using namespace fepe;

namespace {

Polygon rect(double x, double y, double w, double h) {
  return Polygon({{x, y}, {x + w, y}, {x + w, y + h}, {x, y + h}});
}

DetectionSet dets_of(const std::string& id, const std::vector<Polygon>& polys) {
  DetectionSet set{id, {}};
  for (const auto& p : polys) set.detections.push_back({p, 1.0});
  return set;
}

AnnotatedImage gts_of(const std::string& id, const std::vector<Polygon>& polys, bool ignore = false) {
  AnnotatedImage img{id, 200, 200, {}};
  for (const auto& p : polys) img.instances.push_back({p, ignore});
  return img;
}

}  // namespace

TEST_CASE("polygon_iou examples") {
  CHECK(polygon_iou(rect(0, 0, 1, 1), rect(0, 0, 1, 1)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(polygon_iou(rect(0, 0, 1, 1), rect(5, 5, 1, 1)) == 0.0);
  CHECK(polygon_iou(rect(0, 0, 1, 1), rect(0, 0.5, 1, 1)) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("polygon_iou is symmetric and agrees with sampling") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 200; ++trial) {
    const Polygon a(oracle::random_convex(rng, 100, 100, 5.0));
    const Polygon b(oracle::random_convex(rng, 110, 95, 5.0));
    const double ab = polygon_iou(a, b);
    CHECK(ab == polygon_iou(b, a));
    CHECK(std::abs(polygon_iou(a, a) - 1.0) <= 1e-9);
    if (trial < 20) {
      const double inter = oracle::sampled_overlap(a.points(), b.points(), 0, 0, 200, 200, 400);
      const double uni = polygon_area(a) + polygon_area(b) - inter;
      CHECK(ab == doctest::Approx(inter / uni).epsilon(0.02));
    }
  }
}

TEST_CASE("evaluate examples") {
  const std::vector<Polygon> two{rect(10, 10, 50, 20), rect(100, 100, 40, 30)};
  SUBCASE("identical detections") {
    const EvalReport r = evaluate({dets_of("a", two)}, {gts_of("a", two)});
    CHECK(r.precision == 1.0);
    CHECK(r.recall == 1.0);
    CHECK(r.fmeasure == 1.0);
  }
  SUBCASE("one of two found") {
    const EvalReport r = evaluate({dets_of("a", {two[0]})}, {gts_of("a", two)});
    CHECK(r.precision == 1.0);
    CHECK(r.recall == 0.5);
    CHECK(r.fmeasure == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(r.tp == 1);
  }
  SUBCASE("detection on an ignore region is discarded") {
    // IoU of the detection with the ignore region is 0.8.
    const Polygon ignore = rect(0, 0, 100, 10);
    const Polygon det = rect(0, 0, 80, 10);
    CHECK(polygon_iou(ignore, det) == doctest::Approx(0.8));
    const EvalReport r = evaluate({dets_of("a", {det})}, {gts_of("a", {ignore}, true)});
    CHECK(r.num_dets == 0);
    CHECK(r.num_gts == 0);
    CHECK(r.precision == 0.0);
    CHECK(r.recall == 0.0);
    CHECK(r.fmeasure == 0.0);
    REQUIRE(r.per_image.size() == 1);
    CHECK(r.per_image[0].discarded == std::vector<std::size_t>{0});
  }
  SUBCASE("ignore rule by detection area") {
    const Polygon ignore = rect(0, 0, 100, 100);
    const Polygon det = rect(10, 10, 20, 20);
    EvalConfig cfg;
    CHECK(evaluate({dets_of("a", {det})}, {gts_of("a", {ignore}, true)}, cfg).num_dets == 1);
    cfg.ignore_rule = IgnoreRule::kDetectionArea;
    CHECK(evaluate({dets_of("a", {det})}, {gts_of("a", {ignore}, true)}, cfg).num_dets == 0);
  }
  SUBCASE("mismatched ids") {
    CHECK_THROWS_AS(evaluate({dets_of("a", two)}, {gts_of("b", two)}), InputError);
    CHECK_THROWS_AS(evaluate({dets_of("a", two), dets_of("a", two)}, {gts_of("a", two)}), InputError);
  }
  SUBCASE("empty detections") {
    const EvalReport r = evaluate({dets_of("a", {})}, {gts_of("a", two)});
    CHECK(r.precision == 0.0);
    CHECK(r.recall == 0.0);
    CHECK(r.fmeasure == 0.0);
  }
}

TEST_CASE("matching is one-to-one at the threshold") {
  const Polygon gt = rect(0, 0, 10, 10);
  // Two detections overlap the same GT; only one may match.
  const EvalReport r = evaluate({dets_of("a", {rect(0, 0, 10, 10), rect(1, 0, 10, 10)})}, {gts_of("a", {gt})});
  CHECK(r.tp == 1);
  CHECK(r.num_dets == 2);
  REQUIRE(r.per_image[0].matches.size() == 1);
  CHECK(r.per_image[0].matches[0].det == 0);
  // IoU exactly at threshold counts.
  const Polygon half = rect(0, 0, 10, 5);
  CHECK(polygon_iou(half, gt) == doctest::Approx(0.5));
  CHECK(evaluate({dets_of("a", {half})}, {gts_of("a", {gt})}).tp == 1);
}

TEST_CASE("evaluation properties") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> pos(0.0, 160.0), size(8.0, 40.0), jitter(-6.0, 6.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Polygon> gts, dets;
    const int n = 1 + rng() % 6;
    for (int i = 0; i < n; ++i) {
      const double x = pos(rng), y = pos(rng), w = size(rng), h = size(rng);
      gts.push_back(rect(x, y, w, h));
      if (rng() % 4) dets.push_back(rect(x + jitter(rng), y + jitter(rng), w, h));
    }
    for (int i = 0; i < static_cast<int>(rng() % 3); ++i) dets.push_back(rect(pos(rng), pos(rng), size(rng), size(rng)));
    const EvalReport base = evaluate({dets_of("p", dets)}, {gts_of("p", gts)});

    // Permutation invariance.
    auto shuffled = dets;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const EvalReport perm = evaluate({dets_of("p", shuffled)}, {gts_of("p", gts)});
    CHECK(perm.precision == base.precision);
    CHECK(perm.recall == base.recall);
    CHECK(perm.fmeasure == base.fmeasure);

    // A detection far from every GT lowers P and keeps R.
    auto extra = dets;
    extra.push_back(rect(500, 500, 10, 10));
    const EvalReport more = evaluate({dets_of("p", extra)}, {gts_of("p", gts)});
    CHECK(more.recall == base.recall);
    if (base.tp > 0) CHECK(more.precision < base.precision);

    // A tighter threshold never raises F.
    EvalConfig strict;
    strict.iou_thresh = 0.75;
    CHECK(evaluate({dets_of("p", dets)}, {gts_of("p", gts)}, strict).fmeasure <= base.fmeasure);

    // Self evaluation.
    CHECK(evaluate({dets_of("p", dets.empty() ? gts : dets)}, {gts_of("p", dets.empty() ? gts : dets)}).fmeasure == 1.0);

    // F is the harmonic mean of P and R.
    if (base.precision + base.recall > 0)
      CHECK(base.fmeasure ==
            doctest::Approx(2 * base.precision * base.recall / (base.precision + base.recall)).epsilon(1e-12));
  }
}

TEST_CASE("global counts aggregate across images") {
  const EvalReport r = evaluate({dets_of("a", {rect(0, 0, 10, 10)}), dets_of("b", {})},
                                {gts_of("a", {rect(0, 0, 10, 10)}), gts_of("b", {rect(0, 0, 10, 10), rect(50, 50, 5, 5)})});
  CHECK(r.tp == 1);
  CHECK(r.num_gts == 3);
  CHECK(r.num_dets == 1);
  CHECK(r.recall == doctest::Approx(1.0 / 3.0));
}

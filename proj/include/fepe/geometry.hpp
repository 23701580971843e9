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

#include <span>
#include <vector>

#include "fepe/error.hpp"
#include "fepe/raster.hpp"

namespace fepe {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

// Simple polygon in pixel units. Construction drops consecutive duplicate
// points (including an explicit closing point), rejects fewer than three
// distinct points, non-finite coordinates or ones beyond kMaxCoordinate in
// magnitude, zero area and self-intersections, and stores the ring
// counter-clockwise (positive shoelace area).
inline constexpr double kMaxCoordinate = 1e9;

class Polygon {
 public:
  explicit Polygon(std::vector<Point> points);

  const std::vector<Point>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }

  friend bool operator==(const Polygon&, const Polygon&) = default;

 private:
  std::vector<Point> points_;
};

// Shoelace area, positive for counter-clockwise rings.
double signed_area(std::span<const Point> ring);

double polygon_area(std::span<const Point> ring);
double polygon_area(const Polygon& poly);
double polygon_perimeter(std::span<const Point> ring);
double polygon_perimeter(const Polygon& poly);

bool is_simple(std::span<const Point> ring);

// Uniform parallel offset. Negative distances shrink, positive distances
// expand. Joins are mitered up to twice the offset distance and beveled
// beyond that. A shrink may split the polygon or remove it entirely.
std::vector<Polygon> offset_polygon(const Polygon& poly, double distance);

// Cell (r, c) is set iff (c + 0.5, r + 0.5) is inside the polygon under
// the even-odd rule. Parts outside the canvas are clipped.
BinaryMap rasterize(const Polygon& poly, int height, int width);
void rasterize_into(BinaryMap& map, const Polygon& poly, std::uint8_t value = 1);

struct ComponentLabels {
  Raster<int> labels;  // 0 = background, components numbered from 1
  int count = 0;
};

// 8-connected labelling; labels follow raster order of each component's
// first pixel.
ComponentLabels label_components(const BinaryMap& map);

// Outer boundary of one labelled component. Vertices sit on the midpoints
// of the pixel cracks separating the component from the background, so
// rasterizing the result reproduces the component without its holes.
Polygon trace_outer_contour(const ComponentLabels& components, int label);

// One outer contour per 8-connected component, in label order.
std::vector<Polygon> trace_contours(const BinaryMap& map);

// Douglas-Peucker simplification; returns the input unchanged when the
// simplified ring would not be a valid polygon.
Polygon simplify_polygon(const Polygon& poly, double tolerance);

double intersection_area(const Polygon& a, const Polygon& b);

// Pieces of `poly` inside the axis-aligned box [0, width] x [0, height].
std::vector<Polygon> clip_to_canvas(const Polygon& poly, double height, double width);

Polygon translate(const Polygon& poly, double dx, double dy);
Polygon scale(const Polygon& poly, double sx, double sy);

}  // namespace fepe

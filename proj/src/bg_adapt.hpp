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

// Boost.Geometry adapters shared by the geometry translation units.

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/box.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

#include "fepe/geometry.hpp"

namespace fepe::detail {

namespace bg = boost::geometry;

using BgPoint = bg::model::d2::point_xy<double>;
using BgPolygon = bg::model::polygon<BgPoint, /*ClockWise=*/false, /*Closed=*/true>;
using BgMulti = bg::model::multi_polygon<BgPolygon>;
using BgBox = bg::model::box<BgPoint>;

inline BgPolygon to_bg(std::span<const Point> ring) {
  BgPolygon out;
  out.outer().reserve(ring.size() + 1);
  for (const Point& p : ring) out.outer().emplace_back(p.x, p.y);
  if (!ring.empty()) out.outer().emplace_back(ring.front().x, ring.front().y);
  return out;
}

inline BgPolygon to_bg(const Polygon& poly) { return to_bg(std::span<const Point>(poly.points())); }

// Outer ring without the closing point.
inline std::vector<Point> outer_points(const BgPolygon& poly) {
  std::vector<Point> pts;
  const auto& ring = poly.outer();
  if (ring.empty()) return pts;
  pts.reserve(ring.size());
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) pts.push_back({ring[i].x(), ring[i].y()});
  return pts;
}

}  // namespace fepe::detail

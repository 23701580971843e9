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

#include "fepe/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "bg_adapt.hpp"

namespace fepe {

namespace bg = boost::geometry;
using detail::BgMulti;
using detail::BgPoint;
using detail::BgPolygon;

namespace {

// Rings below this area are numerical residue of boolean operations.
constexpr double kMinRingArea = 1e-6;
constexpr double kMiterLimit = 2.0;

void drop_repeated(std::vector<Point>& pts) {
  auto last = std::unique(pts.begin(), pts.end());
  pts.erase(last, pts.end());
  while (pts.size() > 1 && pts.front() == pts.back()) pts.pop_back();
}

// Miter join that falls back to a bevel once the miter point would lie
// farther than kMiterLimit * |d| from the vertex.
struct JoinMiterBevel {
  template <typename P, typename D, typename RangeOut>
  bool apply(const P& ip, const P& vertex, const P& perp1, const P& perp2, const D& distance,
             RangeOut& out) const {
    bg::equal_to<P> equals;
    if (equals(ip, vertex) || equals(perp1, perp2)) return false;
    const double dx = bg::get<0>(ip) - bg::get<0>(vertex);
    const double dy = bg::get<1>(ip) - bg::get<1>(vertex);
    out.push_back(perp1);
    if (std::hypot(dx, dy) <= kMiterLimit * std::abs(distance)) out.push_back(ip);
    out.push_back(perp2);
    return true;
  }

  template <typename D>
  D max_distance(const D& distance) const {
    return distance * kMiterLimit;
  }
};

std::vector<Polygon> collect(const BgMulti& multi) {
  std::vector<Polygon> out;
  for (const auto& piece : multi) {
    if (std::abs(bg::area(piece.outer())) <= kMinRingArea) continue;
    auto pts = detail::outer_points(piece);
    drop_repeated(pts);
    if (pts.size() < 3) continue;
    out.emplace_back(std::move(pts));
  }
  return out;
}

}  // namespace

Polygon::Polygon(std::vector<Point> points) : points_(std::move(points)) {
  for (const Point& p : points_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw InvalidPolygon("polygon has a non-finite coordinate");
    }
    if (std::abs(p.x) > kMaxCoordinate || std::abs(p.y) > kMaxCoordinate) {
      throw InvalidPolygon("polygon coordinate exceeds 1e9 in magnitude");
    }
  }
  drop_repeated(points_);
  if (points_.size() < 3) {
    throw InvalidPolygon("polygon needs at least 3 distinct points, got " +
                         std::to_string(points_.size()));
  }
  const double area = signed_area(points_);
  if (!std::isfinite(area)) throw InvalidPolygon("polygon area is not finite");
  if (area == 0.0) throw InvalidPolygon("polygon has zero area");
  if (area < 0.0) std::reverse(points_.begin(), points_.end());
  if (!bg::is_valid(detail::to_bg(std::span<const Point>(points_)))) {
    throw InvalidPolygon("polygon is self-intersecting");
  }
}

double signed_area(std::span<const Point> ring) {
  const std::size_t n = ring.size();
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = ring[i];
    const Point& q = ring[(i + 1) % n];
    twice += p.x * q.y - q.x * p.y;
  }
  return 0.5 * twice;
}

double polygon_area(std::span<const Point> ring) {
  if (ring.size() < 3) throw InvalidPolygon("polygon needs at least 3 points");
  return std::abs(signed_area(ring));
}

double polygon_area(const Polygon& poly) { return polygon_area(std::span<const Point>(poly.points())); }

double polygon_perimeter(std::span<const Point> ring) {
  if (ring.size() < 3) throw InvalidPolygon("polygon needs at least 3 points");
  double total = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Point& p = ring[i];
    const Point& q = ring[(i + 1) % ring.size()];
    total += std::hypot(q.x - p.x, q.y - p.y);
  }
  return total;
}

double polygon_perimeter(const Polygon& poly) {
  return polygon_perimeter(std::span<const Point>(poly.points()));
}

bool is_simple(std::span<const Point> ring) {
  try {
    Polygon p(std::vector<Point>(ring.begin(), ring.end()));
    return true;
  } catch (const InvalidPolygon&) {
    return false;
  }
}

std::vector<Polygon> offset_polygon(const Polygon& poly, double distance) {
  if (!std::isfinite(distance)) throw InvalidPolygon("offset distance is not finite");
  if (distance == 0.0) return {poly};
  const BgPolygon base = detail::to_bg(poly);
  BgMulti result;
  bg::buffer(base, result, bg::strategy::buffer::distance_symmetric<double>(distance),
             bg::strategy::buffer::side_straight(), JoinMiterBevel(),
             bg::strategy::buffer::end_flat(), bg::strategy::buffer::point_square());
  return collect(result);
}

void rasterize_into(BinaryMap& map, const Polygon& poly, std::uint8_t value) {
  const auto& pts = poly.points();
  const std::size_t n = pts.size();
  const int height = map.height();
  const int width = map.width();

  double ymin = pts[0].y, ymax = pts[0].y;
  for (const Point& p : pts) {
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const int r0 = std::max(0, static_cast<int>(std::floor(ymin - 0.5)));
  const int r1 = std::min(height - 1, static_cast<int>(std::ceil(ymax)));

  std::vector<double> xs;
  for (int r = r0; r <= r1; ++r) {
    const double y = r + 0.5;
    xs.clear();
    for (std::size_t i = 0; i < n; ++i) {
      const Point& a = pts[i];
      const Point& b = pts[(i + 1) % n];
      if ((a.y <= y) == (b.y <= y)) continue;
      xs.push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
      // Centers with xs[k] <= c + 0.5 < xs[k + 1].
      const double lo = std::ceil(xs[k] - 0.5);
      const double hi = std::ceil(xs[k + 1] - 0.5);
      const int c0 = static_cast<int>(std::max(lo, 0.0));
      const int c1 = static_cast<int>(std::min(hi, static_cast<double>(width)));
      for (int c = c0; c < c1; ++c) map(r, c) = value;
    }
  }
}

BinaryMap rasterize(const Polygon& poly, int height, int width) {
  if (height <= 0 || width <= 0) throw InvalidPolygon("raster dimensions must be positive");
  BinaryMap map(height, width);
  rasterize_into(map, poly);
  return map;
}

ComponentLabels label_components(const BinaryMap& map) {
  ComponentLabels out{Raster<int>(map.height(), map.width()), 0};
  const int h = map.height();
  const int w = map.width();
  std::deque<std::pair<int, int>> queue;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (!map(r, c) || out.labels(r, c)) continue;
      const int label = ++out.count;
      out.labels(r, c) = label;
      queue.emplace_back(r, c);
      while (!queue.empty()) {
        const auto [cr, cc] = queue.front();
        queue.pop_front();
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            const int nr = cr + dr;
            const int nc = cc + dc;
            if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
            if (!map(nr, nc) || out.labels(nr, nc)) continue;
            out.labels(nr, nc) = label;
            queue.emplace_back(nr, nc);
          }
        }
      }
    }
  }
  return out;
}

Polygon trace_outer_contour(const ComponentLabels& components, int label) {
  const Raster<int>& labels = components.labels;
  const int h = labels.height();
  const int w = labels.width();

  int sx = -1, sy = -1;
  for (int r = 0; r < h && sy < 0; ++r) {
    for (int c = 0; c < w; ++c) {
      if (labels(r, c) == label) {
        sx = c;
        sy = r;
        break;
      }
    }
  }
  if (sy < 0) throw InvalidPolygon("component " + std::to_string(label) + " is empty");

  auto inside = [&](double cx, double cy) {
    const int c = static_cast<int>(std::floor(cx));
    const int r = static_cast<int>(std::floor(cy));
    return r >= 0 && r < h && c >= 0 && c < w && labels(r, c) == label;
  };

  // Walk pixel cracks on the lattice of pixel corners with the component
  // on the right-hand side (image axes, y down). Left turns take priority,
  // which keeps diagonal neighbours in the same boundary.
  int vx = sx, vy = sy;
  int dx = 1, dy = 0;
  std::vector<Point> mids;
  do {
    mids.push_back({vx + 0.5 * dx, vy + 0.5 * dy});
    vx += dx;
    vy += dy;
    const int rx = -dy, ry = dx;
    const bool ahead_left = inside(vx + 0.5 * (dx - rx), vy + 0.5 * (dy - ry));
    const bool ahead_right = inside(vx + 0.5 * (dx + rx), vy + 0.5 * (dy + ry));
    if (ahead_left) {
      const int ndx = dy, ndy = -dx;
      dx = ndx;
      dy = ndy;
    } else if (!ahead_right) {
      dx = rx;
      dy = ry;
    }
  } while (!(vx == sx && vy == sy && dx == 1 && dy == 0));

  std::vector<Point> corners;
  corners.reserve(mids.size());
  const std::size_t n = mids.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = mids[(i + n - 1) % n];
    const Point& b = mids[i];
    const Point& c = mids[(i + 1) % n];
    const double cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
    if (cross != 0.0) corners.push_back(b);
  }
  return Polygon(std::move(corners));
}

std::vector<Polygon> trace_contours(const BinaryMap& map) {
  const ComponentLabels components = label_components(map);
  std::vector<Polygon> out;
  out.reserve(components.count);
  for (int label = 1; label <= components.count; ++label) {
    out.push_back(trace_outer_contour(components, label));
  }
  return out;
}

Polygon simplify_polygon(const Polygon& poly, double tolerance) {
  if (tolerance <= 0.0) return poly;
  BgPolygon simplified;
  bg::simplify(detail::to_bg(poly), simplified, tolerance);
  auto pts = detail::outer_points(simplified);
  drop_repeated(pts);
  if (pts.size() < 3) return poly;
  try {
    return Polygon(std::move(pts));
  } catch (const InvalidPolygon&) {
    return poly;
  }
}

double intersection_area(const Polygon& a, const Polygon& b) {
  BgMulti out;
  bg::intersection(detail::to_bg(a), detail::to_bg(b), out);
  return bg::area(out);
}

std::vector<Polygon> clip_to_canvas(const Polygon& poly, double height, double width) {
  const detail::BgBox box(BgPoint(0.0, 0.0), BgPoint(width, height));
  BgMulti out;
  bg::intersection(detail::to_bg(poly), box, out);
  for (auto& piece : out) {
    for (auto& p : piece.outer()) {
      bg::set<0>(p, std::clamp(bg::get<0>(p), 0.0, width));
      bg::set<1>(p, std::clamp(bg::get<1>(p), 0.0, height));
    }
  }
  return collect(out);
}

Polygon translate(const Polygon& poly, double dx, double dy) {
  std::vector<Point> pts = poly.points();
  for (Point& p : pts) {
    p.x += dx;
    p.y += dy;
  }
  return Polygon(std::move(pts));
}

Polygon scale(const Polygon& poly, double sx, double sy) {
  std::vector<Point> pts = poly.points();
  for (Point& p : pts) {
    p.x *= sx;
    p.y *= sy;
  }
  return Polygon(std::move(pts));
}

}  // namespace fepe

// Copyright (c) 2026 The artext Authors. All Rights Reserved.
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

#include <algorithm>
#include <cmath>

#include "artext/geometry.hpp"

namespace artext {

double signed_area(const Polygon& poly) {
  const size_t n = poly.size();
  if (n < 3) return 0.0;
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % n];
    acc += a.x * b.y - b.x * a.y;
  }
  return 0.5 * acc;
}

double polygon_area(const Polygon& poly) { return std::abs(signed_area(poly)); }

void make_counter_clockwise(Polygon& poly) {
  if (signed_area(poly) < 0.0) std::reverse(poly.begin() + 1, poly.end());
}

BoundingBox bounding_box(const Polygon& poly) {
  BoundingBox box{poly.front().x, poly.front().y, poly.front().x, poly.front().y};
  for (const Point& p : poly) {
    box.min_x = std::min(box.min_x, p.x);
    box.min_y = std::min(box.min_y, p.y);
    box.max_x = std::max(box.max_x, p.x);
    box.max_y = std::max(box.max_y, p.y);
  }
  return box;
}

double perimeter(const Polygon& poly) {
  double total = 0.0;
  for (size_t i = 0; i < poly.size(); ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % poly.size()];
    total += std::hypot(b.x - a.x, b.y - a.y);
  }
  return total;
}

bool contains(const Polygon& poly, double x, double y) {
  bool inside = false;
  const size_t n = poly.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = poly[i];
    const Point& b = poly[j];
    if ((a.y > y) != (b.y > y)) {
      const double xc = a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (x < xc) inside = !inside;
    }
  }
  return inside;
}

namespace {

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(const Point& p, const Point& a, const Point& b) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_intersect(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
  const double d1 = cross(q1, q2, p1), d2 = cross(q1, q2, p2);
  const double d3 = cross(p1, p2, q1), d4 = cross(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  if (d1 == 0 && on_segment(p1, q1, q2)) return true;
  if (d2 == 0 && on_segment(p2, q1, q2)) return true;
  if (d3 == 0 && on_segment(q1, p1, p2)) return true;
  if (d4 == 0 && on_segment(q2, p1, p2)) return true;
  return false;
}

}  // namespace

bool is_simple(const Polygon& poly) {
  const size_t n = poly.size();
  if (n < 3) return false;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n])) return false;
    }
  }
  return true;
}

Polygon resample_closed(const Polygon& poly, int count) {
  Polygon out;
  if (poly.empty() || count <= 0) return out;
  const size_t n = poly.size();
  std::vector<double> cumulative(n + 1, 0.0);
  for (size_t i = 0; i < n; ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % n];
    cumulative[i + 1] = cumulative[i] + std::hypot(b.x - a.x, b.y - a.y);
  }
  const double total = cumulative[n];
  if (total <= 0.0) return Polygon(static_cast<size_t>(count), poly.front());
  size_t seg = 0;
  for (int k = 0; k < count; ++k) {
    const double target = total * k / count;
    while (seg + 1 < n && cumulative[seg + 1] <= target) ++seg;
    const double len = cumulative[seg + 1] - cumulative[seg];
    const double t = len > 0.0 ? (target - cumulative[seg]) / len : 0.0;
    const Point& a = poly[seg];
    const Point& b = poly[(seg + 1) % n];
    out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
  }
  return out;
}

std::vector<uint8_t> rasterize(const Polygon& poly, double origin_x, double origin_y, double cell,
                               int width, int height) {
  std::vector<uint8_t> out(static_cast<size_t>(width) * height, 0);
  const size_t n = poly.size();
  if (n < 3 || width <= 0 || height <= 0) return out;
  std::vector<double> xs;
  for (int i = 0; i < height; ++i) {
    const double sy = origin_y + (i + 0.5) * cell;
    xs.clear();
    for (size_t a = 0, b = n - 1; a < n; b = a++) {
      const Point& p = poly[a];
      const Point& q = poly[b];
      if ((p.y > sy) != (q.y > sy)) xs.push_back(p.x + (sy - p.y) * (q.x - p.x) / (q.y - p.y));
    }
    std::sort(xs.begin(), xs.end());
    for (size_t k = 0; k + 1 < xs.size(); k += 2) {
      // Cells whose sample lies in [xs[k], xs[k+1]).
      const int j0 = std::max(0, static_cast<int>(std::ceil((xs[k] - origin_x) / cell - 0.5)));
      const int j1 = std::min(width, static_cast<int>(std::ceil((xs[k + 1] - origin_x) / cell - 0.5)));
      for (int j = j0; j < j1; ++j) out[static_cast<size_t>(i) * width + j] = 1;
    }
  }
  return out;
}

}  // namespace artext

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

// Polygon primitives in continuous image coordinates: pixel (row i, col j)
// covers [j, j+1) x [i, i+1).

#pragma once

#include <cstdint>
#include <vector>

namespace artext {

struct Point {
  double x = 0;
  double y = 0;
  bool operator==(const Point&) const = default;
};

using Polygon = std::vector<Point>;

struct BoundingBox {
  double min_x, min_y, max_x, max_y;
};

/// Signed shoelace area; positive means counter-clockwise in the (x, y) frame.
double signed_area(const Polygon& poly);
double polygon_area(const Polygon& poly);

/// Reverses vertex order (keeping the first vertex) when the area is negative.
void make_counter_clockwise(Polygon& poly);

BoundingBox bounding_box(const Polygon& poly);
double perimeter(const Polygon& poly);

/// Even-odd containment.
bool contains(const Polygon& poly, double x, double y);

/// True when no two non-adjacent edges intersect.
bool is_simple(const Polygon& poly);

/// `count` points spaced uniformly by arc length along the closed polyline,
/// starting at its first vertex.
Polygon resample_closed(const Polygon& poly, int count);

/// Binary raster of a grid whose cell (i, j) is sampled at
/// (origin_x + (j + 0.5) * cell, origin_y + (i + 0.5) * cell) with the
/// even-odd rule. Row-major, height x width.
std::vector<uint8_t> rasterize(const Polygon& poly, double origin_x, double origin_y, double cell,
                               int width, int height);

}  // namespace artext

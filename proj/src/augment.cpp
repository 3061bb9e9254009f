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


#include "artext/augment.hpp"

#include <algorithm>
#include <cmath>

namespace artext {

Polygon rotate_polygon(const Polygon& p, double angle_deg, double cx, double cy) {
  const double a = angle_deg * M_PI / 180.0;
  const double c = std::cos(a), s = std::sin(a);
  Polygon out;
  out.reserve(p.size());
  for (const Point& q : p) {
    const double dx = q.x - cx, dy = q.y - cy;
    out.push_back({cx + c * dx - s * dy, cy + s * dx + c * dy});
  }
  return out;
}

AugmentDraw identity_draw(const AnnotatedSample& s) {
  AugmentDraw d;
  d.crop_w = s.image.width;
  d.crop_h = s.image.height;
  return d;
}

AugmentDraw draw_augment(const AnnotatedSample& s, Rng& rng, const AugmentOptions& options) {
  const double w = s.image.width, h = s.image.height;
  AugmentDraw d;
  d.angle_deg = rng.uniform(-options.max_rotation_deg, options.max_rotation_deg);
  const double frac = rng.uniform(options.min_crop, 1.0);
  d.crop_w = frac * w;
  d.crop_h = frac * h;

  std::vector<BoundingBox> boxes;
  for (size_t i = 0; i < s.polygons.size(); ++i) {
    if (s.ignore[i]) continue;
    Polygon r = rotate_polygon(s.polygons[i], d.angle_deg, w / 2, h / 2);
    BoundingBox b = bounding_box(r);
    b.min_x = std::max(b.min_x, 0.0);
    b.min_y = std::max(b.min_y, 0.0);
    b.max_x = std::min(b.max_x, w);
    b.max_y = std::min(b.max_y, h);
    if (b.max_x > b.min_x && b.max_y > b.min_y) boxes.push_back(b);
  }
  double lo_x = 0, hi_x = w - d.crop_w, lo_y = 0, hi_y = h - d.crop_h;
  if (!boxes.empty()) {
    const BoundingBox& b = boxes[static_cast<size_t>(rng.uniform_int(0, static_cast<int>(boxes.size()) - 1))];
    d.crop_w = std::min(w, std::max(d.crop_w, b.max_x - b.min_x));
    d.crop_h = std::min(h, std::max(d.crop_h, b.max_y - b.min_y));
    lo_x = std::max(0.0, b.max_x - d.crop_w);
    hi_x = std::min(b.min_x, w - d.crop_w);
    lo_y = std::max(0.0, b.max_y - d.crop_h);
    hi_y = std::min(b.min_y, h - d.crop_h);
  }
  d.crop_x = rng.uniform(lo_x, std::max(lo_x, hi_x));
  d.crop_y = rng.uniform(lo_y, std::max(lo_y, hi_y));
  d.flip = rng.bernoulli(options.flip_probability);
  return d;
}

AnnotatedSample apply_augment(const AnnotatedSample& s, const AugmentDraw& d, int size) {
  const double w = s.image.width, h = s.image.height;
  const double sx = size / d.crop_w, sy = size / d.crop_h;
  const double a = d.angle_deg * M_PI / 180.0;
  const double ca = std::cos(a), sa = std::sin(a);

  AnnotatedSample out;
  out.source = s.source;
  out.image = Image(size, size, s.image.channels);
  for (int v = 0; v < size; ++v) {
    for (int u = 0; u < size; ++u) {
      double x = (u + 0.5) / sx, y = (v + 0.5) / sy;
      if (d.flip) x = d.crop_w - x;
      x += d.crop_x;
      y += d.crop_y;
      // Inverse rotation about the center.
      const double dx = x - w / 2, dy = y - h / 2;
      const double rx = w / 2 + ca * dx + sa * dy, ry = h / 2 - sa * dx + ca * dy;
      const double fx = std::clamp(rx - 0.5, 0.0, w - 1.0), fy = std::clamp(ry - 0.5, 0.0, h - 1.0);
      const int x0 = static_cast<int>(fx), y0 = static_cast<int>(fy);
      const int x1 = std::min(x0 + 1, s.image.width - 1), y1 = std::min(y0 + 1, s.image.height - 1);
      const double tx = fx - x0, ty = fy - y0;
      for (int c = 0; c < s.image.channels; ++c) {
        const double val = (1 - ty) * ((1 - tx) * s.image.at(y0, x0, c) + tx * s.image.at(y0, x1, c)) +
                           ty * ((1 - tx) * s.image.at(y1, x0, c) + tx * s.image.at(y1, x1, c));
        out.image.at(v, u, c) = static_cast<uint8_t>(std::clamp(std::lround(val), 0L, 255L));
      }
    }
  }
  for (size_t i = 0; i < s.polygons.size(); ++i) {
    Polygon p = d.angle_deg != 0.0 ? rotate_polygon(s.polygons[i], d.angle_deg, w / 2, h / 2) : s.polygons[i];
    for (Point& q : p) {
      double x = q.x - d.crop_x, y = q.y - d.crop_y;
      if (d.flip) x = d.crop_w - x;
      q.x = std::clamp(x * sx, 0.0, static_cast<double>(size));
      q.y = std::clamp(y * sy, 0.0, static_cast<double>(size));
    }
    // A mirror reverses winding; restore the input's orientation.
    if (d.flip) std::reverse(p.begin() + 1, p.end());
    const bool degenerate = polygon_area(p) < 1.0 || !is_simple(p);
    out.polygons.push_back(std::move(p));
    out.ignore.push_back(s.ignore[i] || degenerate ? 1 : 0);
  }
  return out;
}

AnnotatedSample augment(const AnnotatedSample& s, Rng& rng, const AugmentOptions& options) {
  return apply_augment(s, draw_augment(s, rng, options), options.size);
}

}  // namespace artext

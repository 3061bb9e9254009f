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


#pragma once

#include "artext/annotation.hpp"
#include "artext/rng.hpp"

namespace artext {

struct AugmentOptions {
  double max_rotation_deg = 30.0;
  /// Smallest crop side as a fraction of the image side.
  double min_crop = 0.6;
  double flip_probability = 0.5;
  int size = 128;
};

/// One random draw. Rotation is about the image center, the crop is taken
/// from the rotated canvas, then the flip, then the resize to size x size.
struct AugmentDraw {
  double angle_deg = 0.0;
  double crop_x = 0.0;
  double crop_y = 0.0;
  double crop_w = 0.0;
  double crop_h = 0.0;
  bool flip = false;
};

AugmentDraw identity_draw(const AnnotatedSample& s);
AugmentDraw draw_augment(const AnnotatedSample& s, Rng& rng, const AugmentOptions& options);

/// Pixels and polygons go through the same map. Vertices are clamped to the
/// output; polygons that end up degenerate or self-intersecting turn into
/// ignore regions.
AnnotatedSample apply_augment(const AnnotatedSample& s, const AugmentDraw& draw, int size);

AnnotatedSample augment(const AnnotatedSample& s, Rng& rng, const AugmentOptions& options);

/// Rotation by `angle_deg` about (cx, cy).
Polygon rotate_polygon(const Polygon& p, double angle_deg, double cx, double cy);

}  // namespace artext

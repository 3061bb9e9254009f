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

#include <vector>

#include "artext/geometry.hpp"
#include "artext/seghead.hpp"

namespace artext {

struct LossWeights {
  double cls = 1.0;
  double dist = 1.0;
  double dir = 1.0;
  double points = 1.0;
  /// Hard negatives kept per positive pixel.
  double ohem_ratio = 3.0;
};

template <typename T>
struct LossTerms {
  Tensor<T> total;
  Tensor<T> cls;
  Tensor<T> dist;
  Tensor<T> dir;
  Tensor<T> points;
};

/// Pixel cross-entropy on N x 2 x h x w logits. Positives plus the hardest
/// `ratio` x positives negatives; plain mean over non-ignored pixels when the
/// batch has no positive pixel.
template <typename T>
Tensor<T> ohem_cross_entropy(const Tensor<T>& logits, const std::vector<const GroundTruthMaps*>& gt, double ratio);

/// Mean smooth-L1 (beta 1) of a N x 1 x h x w map against gt.dist on text pixels.
template <typename T>
Tensor<T> distance_loss(const Tensor<T>& dist, const std::vector<const GroundTruthMaps*>& gt);

/// Mean 1 - cos(pred, target) of a N x 2 x h x w map on text pixels.
template <typename T>
Tensor<T> direction_loss(const Tensor<T>& dir, const std::vector<const GroundTruthMaps*>& gt);

/// Smooth-L1 between K x 2 x 1 x P points and targets, in units of `scale`
/// pixels, after picking the cyclic shift and orientation of each target
/// that minimizes the loss. Mean over points.
template <typename T>
Tensor<T> aligned_point_loss(const Tensor<T>& points, const std::vector<Polygon>& targets, double scale);

/// Index map for the best alignment: aligned[p] = target[order[p]].
std::vector<int> best_alignment(const std::vector<double>& xs, const std::vector<double>& ys,
                                const Polygon& target, double scale);

/// Weighted sum of every term. `iterates` are the refinement outputs, each
/// K x 2 x 1 x P and aligned with `targets`; L_bp is their mean.
template <typename T>
LossTerms<T> detection_loss(const FieldMaps<T>& pred, const std::vector<const GroundTruthMaps*>& gt,
                            const std::vector<Tensor<T>>& iterates, const std::vector<Polygon>& targets,
                            const LossWeights& weights);

double smooth_l1(double d);

}  // namespace artext

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


// Iterative boundary refinement. Node features are sampled at every control
// point, encoded by circular 1-D convolutions over the point sequence, and
// mapped to per-point offsets. Weights are shared across iterations.

#pragma once

#include <span>
#include <vector>

#include "artext/layers.hpp"
#include "artext/model_config.hpp"
#include "artext/seghead.hpp"

namespace artext {

/// Extra channels appended to the fused features: text prob, dist, dir x/y.
inline constexpr int kFieldChannels = 4;
/// Centroid-relative coordinates are divided by this many pixels.
inline constexpr double kCoordScale = 32.0;

/// Fused features and field maps stacked into one sampling source
/// (N x (F + 4) x h x w).
template <typename T>
Tensor<T> node_source(const Tensor<T>& fused, const FieldMaps<T>& maps);

template <typename T>
class Refiner {
 public:
  Refiner() = default;
  Refiner(Builder<T>& b, const ModelConfig& config);

  /// K x C x 1 x P node features for points K x 2 x 1 x P.
  Tensor<T> node_features(const Tensor<T>& source, const Tensor<T>& points, std::span<const int> batch_index) const;

  /// Per-point offsets (K x 2 x 1 x P) from node features.
  Tensor<T> offsets(const Tensor<T>& nodes) const;

  /// Iterates P1..Pn starting from `p0`.
  std::vector<Tensor<T>> operator()(const Tensor<T>& source, const Tensor<T>& p0,
                                    std::span<const int> batch_index) const;

  int iterations() const { return iterations_; }
  bool append_coords() const { return append_coords_; }
  void set_append_coords(bool on) { append_coords_ = on; }
  Conv2d<T>& head() { return head_; }

 private:
  int iterations_ = 3;
  int kernel_ = 5;
  bool append_coords_ = true;
  std::vector<Conv2d<T>> encoder_;
  Conv2d<T> mlp1_;
  Conv2d<T> mlp2_;
  Conv2d<T> head_;
};

extern template class Refiner<float>;
extern template class Refiner<double>;

}  // namespace artext

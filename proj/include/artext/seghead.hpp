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


// Prediction head and its supervision targets. Everything lives on the
// stride-4 grid: cell (i, j) is centered at image point (4j + 2, 4i + 2).

#pragma once

#include <cstdint>
#include <vector>

#include "artext/geometry.hpp"
#include "artext/layers.hpp"
#include "artext/model_config.hpp"

namespace artext {

inline constexpr int kFieldStride = 4;

/// Head outputs: cls logits (N x 2), dist in (0, 1) (N x 1), dir (N x 2)
/// normalized per pixel where its norm exceeds 1e-6.
template <typename T>
struct FieldMaps {
  Tensor<T> cls;
  Tensor<T> dist;
  Tensor<T> dir;
};

template <typename T>
class SegHead {
 public:
  SegHead() = default;
  SegHead(Builder<T>& b, const ModelConfig& config);

  FieldMaps<T> operator()(const Tensor<T>& fused) const;
  /// Raw 5-channel output before the split.
  Tensor<T> logits(const Tensor<T>& fused) const;

  Conv2d<T>& first() { return conv1_; }
  Conv2d<T>& second() { return conv2_; }
  Conv2d<T>& out() { return out_; }
  void zero();

 private:
  Conv2d<T> conv1_;
  Conv2d<T> conv2_;
  Conv2d<T> out_;
};

/// Text probability (softmax of the two cls logits) for batch entry n.
template <typename T>
std::vector<float> text_probability(const FieldMaps<T>& maps, int n);

/// Stride-4 targets for one image.
struct GroundTruthMaps {
  int height = 0;
  int width = 0;
  std::vector<uint8_t> cls;      // 1 = text
  std::vector<float> dist;       // normalized by the instance max
  std::vector<float> dir_x;      // unit vector toward the nearest boundary cell
  std::vector<float> dir_y;
  std::vector<int32_t> instance; // polygon index + 1, 0 = none
  std::vector<uint8_t> ignore;   // excluded from every pixel loss
  /// Per input polygon: true when it is an ignore region or degenerate.
  std::vector<uint8_t> polygon_ignored;

  size_t size() const { return static_cast<size_t>(height) * width; }
};

/// Rasterizes instances at stride 4 with the even-odd rule. Later polygons
/// overwrite earlier ones. Polygons with area below one cell are ignored.
GroundTruthMaps make_gt_maps(const std::vector<Polygon>& polygons, const std::vector<uint8_t>& ignore_flags,
                             int image_height, int image_width);

extern template class SegHead<float>;
extern template class SegHead<double>;

}  // namespace artext

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

// Differentiable operations. All shapes are explicit: the only implicit
// broadcast is the per-channel bias of conv2d.

#pragma once

#include <span>
#include <vector>

#include "artext/tensor.hpp"

namespace artext {

struct Conv2dOptions {
  int stride = 1;
  int pad_h = 0;
  int pad_w = 0;
  int dilation = 1;

  static Conv2dOptions make(int stride, int pad, int dilation = 1) {
    return Conv2dOptions{stride, pad, pad, dilation};
  }
};

enum class UpsampleMode { kNearest, kBilinear };

/// Cross-correlation. `w` is C_out x C_in x kh x kw; `bias` may be undefined.
template <typename T>
Tensor<T> conv2d(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& bias,
                 Conv2dOptions options = {});

template <typename T> Tensor<T> relu(const Tensor<T>& x);
template <typename T> Tensor<T> sigmoid(const Tensor<T>& x);
template <typename T> Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b);
template <typename T> Tensor<T> sub(const Tensor<T>& a, const Tensor<T>& b);
template <typename T> Tensor<T> mul(const Tensor<T>& a, const Tensor<T>& b);
template <typename T> Tensor<T> mul_scalar(const Tensor<T>& x, T s);
template <typename T> Tensor<T> sum(const Tensor<T>& x);
template <typename T> Tensor<T> mean(const Tensor<T>& x);

/// Concatenates rank-4 tensors along channels; N, H, W must agree.
template <typename T>
Tensor<T> concat_channels(const std::vector<Tensor<T>>& xs);
template <typename T>
Tensor<T> slice_channels(const Tensor<T>& x, int begin, int count);

/// Integer-factor spatial upsampling; bilinear uses half-pixel centers.
template <typename T>
Tensor<T> upsample(const Tensor<T>& x, int factor, UpsampleMode mode = UpsampleMode::kNearest);

template <typename T>
Tensor<T> softmax_axis(const Tensor<T>& x, int axis);

/// Wraps the last axis around by `pad` on each side (circular 1-D convolution).
template <typename T>
Tensor<T> circular_pad_w(const Tensor<T>& x, int pad);

/// Divides each 2-vector along channels by its norm where the norm exceeds eps.
template <typename T>
Tensor<T> normalize_pairs(const Tensor<T>& x, T eps);

/// Criss-cross affinity, N x C x H x W pair -> N x (H+W-1) x H x W.
template <typename T>
Tensor<T> cca_affinity(const Tensor<T>& q, const Tensor<T>& k);

/// Weighted criss-cross sum of `v` plus `residual`.
template <typename T>
Tensor<T> cca_aggregate(const Tensor<T>& attn, const Tensor<T>& v, const Tensor<T>& residual);

/// Bilinear sampling of a feature map at image-space points.
///
/// `coords` is K x 2 x 1 x P (x then y, in input-image pixels); row k reads
/// from batch entry `batch_index[k]`. A point maps to grid position
/// x / stride - 0.5, clamped to the map, so cell centers sample exactly.
/// Gradients flow to both the features and the coordinates.
template <typename T>
Tensor<T> sample_points(const Tensor<T>& features, const Tensor<T>& coords,
                        std::span<const int> batch_index, int stride);

/// Subtracts the per-row mean point: K x 2 x 1 x P -> same shape.
template <typename T>
Tensor<T> center_points(const Tensor<T>& coords);

}  // namespace artext

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

#include <array>
#include <vector>

#include "artext/layers.hpp"
#include "artext/model_config.hpp"

namespace artext {

/// Four feature levels at strides 4, 8, 16, 32, ordered fine to coarse.
template <typename T>
struct PyramidFeatures {
  std::array<Tensor<T>, 4> levels;
};

inline constexpr std::array<int, 4> kPyramidStrides{4, 8, 16, 32};

template <typename T>
class ResidualBlock {
 public:
  ResidualBlock() = default;
  ResidualBlock(Builder<T>& b, const std::string& name, int in_channels, int out_channels, int stride);
  Tensor<T> operator()(const Tensor<T>& x) const;

 private:
  Conv2d<T> conv1_;
  Conv2d<T> conv2_;
  Conv2d<T> projection_;
  bool has_projection_ = false;
};

/// Small residual network with ResNet's stride and stage layout: a two-conv
/// stem down to stride 4, then four stages of two basic blocks.
template <typename T>
class Backbone {
 public:
  Backbone() = default;
  Backbone(Builder<T>& b, const ModelConfig& config);

  /// Input N x 3 x H x W with H, W divisible by 32.
  PyramidFeatures<T> operator()(const Tensor<T>& image) const;

 private:
  Conv2d<T> stem1_;
  Conv2d<T> stem2_;
  std::array<std::array<ResidualBlock<T>, 2>, 4> stages_;
};

extern template class ResidualBlock<float>;
extern template class ResidualBlock<double>;
extern template class Backbone<float>;
extern template class Backbone<double>;

}  // namespace artext

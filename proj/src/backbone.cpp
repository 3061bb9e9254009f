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

#include "artext/backbone.hpp"

#include <algorithm>

namespace artext {

template <typename T>
ResidualBlock<T>::ResidualBlock(Builder<T>& b, const std::string& name, int in_channels,
                                int out_channels, int stride) {
  conv1_ = Conv2d<T>(b, name + ".conv1", in_channels, out_channels, 3, Conv2dOptions::make(stride, 1));
  // The second conv feeds the residual sum rather than a ReLU.
  conv2_ = Conv2d<T>(b, name + ".conv2", out_channels, out_channels, 3, Conv2dOptions::make(1, 1), 1.0);
  if (stride != 1 || in_channels != out_channels) {
    has_projection_ = true;
    projection_ = Conv2d<T>(b, name + ".proj", in_channels, out_channels, 1, Conv2dOptions::make(stride, 0), 1.0);
  }
}

template <typename T>
Tensor<T> ResidualBlock<T>::operator()(const Tensor<T>& x) const {
  Tensor<T> branch = conv2_(relu(conv1_(x)));
  Tensor<T> shortcut = has_projection_ ? projection_(x) : x;
  return relu(add(branch, shortcut));
}

template <typename T>
Backbone<T>::Backbone(Builder<T>& b, const ModelConfig& config) {
  const auto& w = config.widths;
  const int stem_mid = std::max(8, w[0] / 2);
  stem1_ = Conv2d<T>(b, "backbone.stem.0", 3, stem_mid, 7, Conv2dOptions::make(2, 3));
  stem2_ = Conv2d<T>(b, "backbone.stem.1", stem_mid, w[0], 3, Conv2dOptions::make(2, 1));
  int in = w[0];
  for (int s = 0; s < 4; ++s) {
    const std::string prefix = "backbone.stage" + std::to_string(s + 1);
    const int stride = s == 0 ? 1 : 2;
    stages_[s][0] = ResidualBlock<T>(b, prefix + ".0", in, w[s], stride);
    stages_[s][1] = ResidualBlock<T>(b, prefix + ".1", w[s], w[s], 1);
    in = w[s];
  }
}

template <typename T>
PyramidFeatures<T> Backbone<T>::operator()(const Tensor<T>& image) const {
  const Shape& s = image.shape();
  if (s.rank() != 4 || s.c() != 3) {
    fail(ErrorKind::kInvalidShape, "backbone expects N x 3 x H x W, got " + s.str());
  }
  if (s.h() % 32 != 0 || s.w() % 32 != 0) {
    fail(ErrorKind::kInvalidShape, "backbone input " + s.str() + " is not divisible by 32");
  }
  PyramidFeatures<T> out;
  Tensor<T> x = relu(stem2_(relu(stem1_(image))));
  for (int i = 0; i < 4; ++i) {
    x = stages_[i][1](stages_[i][0](x));
    out.levels[i] = x;
  }
  return out;
}

template class ResidualBlock<float>;
template class ResidualBlock<double>;
template class Backbone<float>;
template class Backbone<double>;

}  // namespace artext

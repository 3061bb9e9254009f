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


#include "artext/refine.hpp"

namespace artext {

template <typename T>
Tensor<T> node_source(const Tensor<T>& fused, const FieldMaps<T>& maps) {
  Tensor<T> prob = slice_channels(softmax_axis(maps.cls, 1), 1, 1);
  return concat_channels<T>({fused, prob, maps.dist, maps.dir});
}

template <typename T>
Refiner<T>::Refiner(Builder<T>& b, const ModelConfig& config)
    : iterations_(config.refine_iterations), kernel_(config.refine_kernel), append_coords_(config.refine_coords) {
  const int in = config.fpn_width + kFieldChannels + 2;
  const int width = config.refine_width;
  const int dilations[3] = {1, 2, 4};
  for (int i = 0; i < 3; ++i) {
    encoder_.push_back(Conv2d<T>::row(b, "refine.encoder." + std::to_string(i), i == 0 ? in : width, width, kernel_,
                                      dilations[i]));
  }
  mlp1_ = Conv2d<T>(b, "refine.mlp.0", width, width, 1);
  mlp2_ = Conv2d<T>(b, "refine.mlp.1", width, width, 1, {}, 1.0);
  head_ = Conv2d<T>(b, "refine.head", width, 2, 1, {}, 1.0);
  head_.zero();
}

template <typename T>
Tensor<T> Refiner<T>::node_features(const Tensor<T>& source, const Tensor<T>& points,
                                    std::span<const int> batch_index) const {
  Tensor<T> sampled = sample_points(source, points, batch_index, kFieldStride);
  Tensor<T> coords = append_coords_ ? mul_scalar(center_points(points), static_cast<T>(1.0 / kCoordScale))
                                    : Tensor<T>(points.shape(), T(0));
  return concat_channels<T>({sampled, coords});
}

template <typename T>
Tensor<T> Refiner<T>::offsets(const Tensor<T>& nodes) const {
  Tensor<T> x = nodes;
  for (const auto& conv : encoder_) {
    const int pad = conv.options().dilation * (kernel_ - 1) / 2;
    x = relu(conv(circular_pad_w(x, pad)));
  }
  x = add(x, mlp2_(relu(mlp1_(x))));
  return mul_scalar(head_(relu(x)), static_cast<T>(kFieldStride));
}

template <typename T>
std::vector<Tensor<T>> Refiner<T>::operator()(const Tensor<T>& source, const Tensor<T>& p0,
                                              std::span<const int> batch_index) const {
  std::vector<Tensor<T>> iterates;
  Tensor<T> points = p0;
  for (int i = 0; i < iterations_; ++i) {
    points = add(points, offsets(node_features(source, points, batch_index)));
    iterates.push_back(points);
  }
  return iterates;
}

template Tensor<float> node_source(const Tensor<float>&, const FieldMaps<float>&);
template Tensor<double> node_source(const Tensor<double>&, const FieldMaps<double>&);
template class Refiner<float>;
template class Refiner<double>;

}  // namespace artext

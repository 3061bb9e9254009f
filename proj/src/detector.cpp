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


#include "artext/detector.hpp"

namespace artext {

template <typename T>
Detector<T>::Detector(const ModelConfig& config, uint64_t seed) : config_(config) {
  config_.validate();
  Builder<T> b{store_, seed};
  backbone_ = Backbone<T>(b, config_);
  if (config_.use_rcca) {
    for (int i = 0; i < 4; ++i) {
      rcca_[static_cast<size_t>(i)] = Rcca<T>(b, "rcca." + std::to_string(i), config_.widths[i], config_.cycles);
    }
  }
  rfpn_ = Rfpn<T>(b, config_);
  head_ = SegHead<T>(b, config_);
  refiner_ = Refiner<T>(b, config_);
}

template <typename T>
PyramidFeatures<T> Detector<T>::enhance(const PyramidFeatures<T>& features) const {
  if (!config_.use_rcca) return features;
  PyramidFeatures<T> out;
  for (size_t i = 0; i < 4; ++i) out.levels[i] = rcca_[i](features.levels[i]);
  return out;
}

template <typename T>
DenseOutput<T> Detector<T>::forward(const Tensor<T>& images) const {
  DenseOutput<T> out;
  out.fused = rfpn_(enhance(backbone_(images)));
  out.maps = head_(out.fused);
  out.source = node_source(out.fused, out.maps);
  return out;
}

template class Detector<float>;
template class Detector<double>;

}  // namespace artext

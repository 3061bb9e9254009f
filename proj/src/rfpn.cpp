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

#include "artext/rfpn.hpp"

namespace artext {

template <typename T>
RdbBlock<T>::RdbBlock(Builder<T>& b, const std::string& name, int channels, int growth, int layers)
    : channels_(channels) {
  for (int j = 0; j < layers; ++j) {
    layers_.push_back(Conv2d<T>(b, name + ".dense." + std::to_string(j), channels + j * growth, growth, 3,
                                Conv2dOptions::make(1, 1)));
  }
  fusion_ = Conv2d<T>(b, name + ".local_fusion", channels + layers * growth, channels, 1, {}, 1.0);
}

template <typename T>
Tensor<T> RdbBlock<T>::operator()(const Tensor<T>& x) const {
  if (x.shape().c() != channels_) {
    fail(ErrorKind::kConfig, "RDB expects " + std::to_string(channels_) + " channels, got " +
                                 std::to_string(x.shape().c()));
  }
  std::vector<Tensor<T>> features{x};
  for (const auto& layer : layers_) {
    Tensor<T> in = features.size() == 1 ? x : concat_channels(features);
    features.push_back(relu(layer(in)));
  }
  return add(x, fusion_(concat_channels(features)));
}

template <typename T>
Rfrm<T>::Rfrm(Builder<T>& b, const std::string& name, int channels, int growth, int layers) {
  const int inner = channels / 4;
  entry_ = Conv2d<T>(b, name + ".entry", channels, inner, 3, Conv2dOptions::make(1, 1));
  rdb1_ = RdbBlock<T>(b, name + ".rdb1", inner, growth, layers);
  rdb2_ = RdbBlock<T>(b, name + ".rdb2", inner, growth, layers);
  crc1_ = Conv2d<T>(b, name + ".crc.0", inner, inner, 3, Conv2dOptions::make(1, 1));
  crc2_ = Conv2d<T>(b, name + ".crc.1", inner, channels, 1);
  // Starts as an exact identity on D.
  crc2_.zero();
}

template <typename T>
RfrmTrace<T> Rfrm<T>::trace(const Tensor<T>& d) const {
  RfrmTrace<T> t;
  Tensor<T> x0 = entry_(d);
  t.noise_first = relu(rdb1_(x0));
  Tensor<T> second = relu(rdb2_(add(x0, t.noise_first)));
  t.noise_second = add(add(x0, t.noise_first), second);
  t.estimate = crc2_(relu(crc1_(add(t.noise_first, t.noise_second))));
  t.cleaned = sub(d, t.estimate);
  return t;
}

template <typename T>
void Rfrm<T>::zero_all() {
  entry_.zero();
  for (auto* rdb : {&rdb1_, &rdb2_}) {
    for (auto& l : rdb->layers()) l.zero();
    rdb->local_fusion().zero();
  }
  crc1_.zero();
  crc2_.zero();
}

template <typename T>
Rfpn<T>::Rfpn(Builder<T>& b, const ModelConfig& config)
    : use_rfpn_(config.use_rfpn),
      use_rfrm_(config.use_rfpn && config.use_rfrm),
      rfrm_level_(config.rfrm_level) {
  if (rfrm_level_ < 0 || rfrm_level_ > 3) {
    fail(ErrorKind::kConfig, "rfrm_level must be in [0, 3], got " + std::to_string(rfrm_level_));
  }
  for (int i = 0; i < 4; ++i) {
    laterals_[i] = Conv2d<T>(b, "rfpn.lateral." + std::to_string(i), config.widths[i], config.fpn_width, 1, {}, 1.0);
  }
  fuse_ = Conv2d<T>(b, "rfpn.fuse", 4 * config.fpn_width, config.fpn_width, 3, Conv2dOptions::make(1, 1));
  if (use_rfrm_) {
    rfrm_ = Rfrm<T>(b, "rfpn.rfrm", config.widths[rfrm_level_], config.rdb_growth, config.rdb_layers);
  }
}

template <typename T>
std::array<Tensor<T>, 4> Rfpn<T>::merged_levels(const PyramidFeatures<T>& enhanced) const {
  std::array<Tensor<T>, 4> lateral;
  for (int i = 0; i < 4; ++i) {
    const Tensor<T>& d = (use_rfrm_ && i == rfrm_level_) ? rfrm_(enhanced.levels[i]) : enhanced.levels[i];
    lateral[i] = laterals_[i](d);
  }
  if (!use_rfpn_) return lateral;
  std::array<Tensor<T>, 4> merged;
  merged[3] = lateral[3];
  for (int i = 2; i >= 0; --i) merged[i] = add(lateral[i], upsample(merged[i + 1], 2));
  return merged;
}

template <typename T>
Tensor<T> Rfpn<T>::operator()(const PyramidFeatures<T>& enhanced) const {
  auto merged = merged_levels(enhanced);
  std::vector<Tensor<T>> parts{merged[0]};
  for (int i = 1; i < 4; ++i) parts.push_back(upsample(merged[i], 1 << i, UpsampleMode::kBilinear));
  return relu(fuse_(concat_channels(parts)));
}

template class RdbBlock<float>;
template class RdbBlock<double>;
template class Rfrm<float>;
template class Rfrm<double>;
template class Rfpn<float>;
template class Rfpn<double>;

}  // namespace artext

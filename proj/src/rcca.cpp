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

#include "artext/rcca.hpp"

namespace artext {

template <typename T>
Tensor<T> cca_attention(const CcaProjections<T>& proj, const Tensor<T>& x) {
  return softmax_axis(cca_affinity(proj.query(x), proj.key(x)), 1);
}

template <typename T>
Tensor<T> cca_pass(const CcaProjections<T>& proj, const Tensor<T>& x) {
  return cca_aggregate(cca_attention(proj, x), proj.value(x), x);
}

template <typename T>
Rcca<T>::Rcca(Builder<T>& b, const std::string& name, int channels, int cycles) : cycles_(cycles) {
  if (channels % 8 != 0) {
    fail(ErrorKind::kConfig, name + ": channel count " + std::to_string(channels) + " is not divisible by 8");
  }
  if (cycles < 0 || cycles > 4) {
    fail(ErrorKind::kConfig, name + ": cycles must be in [0, 4], got " + std::to_string(cycles));
  }
  const int work = channels / 4;
  const int qk = channels / 8;
  reduce_ = Conv2d<T>(b, name + ".reduce", channels, work, 3, Conv2dOptions::make(1, 1));
  proj_.query = Conv2d<T>(b, name + ".q_conv", work, qk, 1, {}, 1.0);
  proj_.key = Conv2d<T>(b, name + ".k_conv", work, qk, 1, {}, 1.0);
  proj_.value = Conv2d<T>(b, name + ".v_conv", work, work, 1, {}, 1.0);
  post_ = Conv2d<T>(b, name + ".post", work, work, 3, Conv2dOptions::make(1, 1));
  fuse_ = Conv2d<T>(b, name + ".fuse", channels + work, channels, 1, {}, 1.0);
}

template <typename T>
Tensor<T> Rcca<T>::attend(const Tensor<T>& work) const {
  Tensor<T> x = work;
  for (int i = 0; i < cycles_; ++i) x = cca_pass(proj_, x);
  return x;
}

template <typename T>
Tensor<T> Rcca<T>::operator()(const Tensor<T>& input) const {
  Tensor<T> work = relu(reduce_(input));
  Tensor<T> context = relu(post_(attend(work)));
  return fuse_(concat_channels<T>({input, context}));
}

template Tensor<float> cca_pass<float>(const CcaProjections<float>&, const Tensor<float>&);
template Tensor<double> cca_pass<double>(const CcaProjections<double>&, const Tensor<double>&);
template Tensor<float> cca_attention<float>(const CcaProjections<float>&, const Tensor<float>&);
template Tensor<double> cca_attention<double>(const CcaProjections<double>&, const Tensor<double>&);
template class Rcca<float>;
template class Rcca<double>;

}  // namespace artext

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

#include "artext/layers.hpp"

#include <algorithm>

namespace artext {

template <typename T>
Conv2d<T>::Conv2d(Builder<T>& b, const std::string& name, int in_channels, int out_channels,
                  int kernel, Conv2dOptions options, double gain)
    : options_(options) {
  weight_ = b.store.create(name + ".weight", Shape{out_channels, in_channels, kernel, kernel});
  bias_ = b.store.create(name + ".bias", Shape{out_channels});
  Rng rng = b.rng_for(name);
  kaiming_uniform(weight_, rng, gain);
}

template <typename T>
Conv2d<T> Conv2d<T>::row(Builder<T>& b, const std::string& name, int in_channels,
                         int out_channels, int kernel_w, int dilation, double gain) {
  Conv2d c;
  c.options_ = Conv2dOptions{1, 0, 0, dilation};
  c.weight_ = b.store.create(name + ".weight", Shape{out_channels, in_channels, 1, kernel_w});
  c.bias_ = b.store.create(name + ".bias", Shape{out_channels});
  Rng rng = b.rng_for(name);
  kaiming_uniform(c.weight_, rng, gain);
  return c;
}

template <typename T>
void Conv2d<T>::zero() {
  std::fill(weight_.data().begin(), weight_.data().end(), T(0));
  std::fill(bias_.data().begin(), bias_.data().end(), T(0));
}

template class Conv2d<float>;
template class Conv2d<double>;

}  // namespace artext

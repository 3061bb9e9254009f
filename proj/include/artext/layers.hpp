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

#include <cmath>
#include <string>

#include "artext/ops.hpp"
#include "artext/optim.hpp"
#include "artext/rng.hpp"

namespace artext {

inline constexpr double kReluGain = 1.4142135623730951;

/// Parameter registration context shared by module constructors. Each
/// parameter draws its initial values from a stream keyed by (seed, name),
/// so enabling or disabling one module never perturbs another's init.
template <typename T>
struct Builder {
  ParameterStore<T>& store;
  uint64_t seed = 0;

  Rng rng_for(const std::string& name) const { return Rng(derive_seed({seed, fnv1a(name)})); }
};

template <typename T>
class Conv2d {
 public:
  Conv2d() = default;
  /// Square kernel with Kaiming-uniform weights (given gain) and zero bias.
  Conv2d(Builder<T>& b, const std::string& name, int in_channels, int out_channels, int kernel,
         Conv2dOptions options = {}, double gain = kReluGain);
  /// 1 x kernel_w kernel, for convolutions over point sequences.
  static Conv2d row(Builder<T>& b, const std::string& name, int in_channels, int out_channels,
                    int kernel_w, int dilation, double gain = kReluGain);

  Tensor<T> operator()(const Tensor<T>& x) const { return conv2d(x, weight_, bias_, options_); }

  Tensor<T>& weight() { return weight_; }
  Tensor<T>& bias() { return bias_; }
  const Conv2dOptions& options() const { return options_; }
  void zero();

 private:
  Tensor<T> weight_;
  Tensor<T> bias_;
  Conv2dOptions options_;
};

extern template class Conv2d<float>;
extern template class Conv2d<double>;

}  // namespace artext

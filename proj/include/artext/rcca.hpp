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

// Recycle criss-cross attention.
//
// Each position u attends to the H + W - 1 positions sharing its row or
// column. A single pass only mixes along that cross; feeding the output
// through the same pass again lets every position reach every other one.
//
//   I (C) -> 3x3 conv -> C/4 -> [cca_pass] x cycles -> 3x3 conv -> C/4
//         -> concat with I (5C/4) -> 1x1 conv -> D (C)
//
// cca_pass(x): Q = q(x), K = k(x) (C/8 each), V = v(x) (C/4),
//   A = softmax over the cross of <Q_u, K_i>, out_u = sum_i A_iu V_i + x_u.

#pragma once

#include "artext/layers.hpp"
#include "artext/model_config.hpp"

namespace artext {

/// The three 1x1 projections shared by every cycle.
template <typename T>
struct CcaProjections {
  Conv2d<T> query;
  Conv2d<T> key;
  Conv2d<T> value;
};

/// One criss-cross attention pass with residual.
template <typename T>
Tensor<T> cca_pass(const CcaProjections<T>& proj, const Tensor<T>& x);

/// Normalized attention map of one pass (N x (H+W-1) x H x W), for inspection.
template <typename T>
Tensor<T> cca_attention(const CcaProjections<T>& proj, const Tensor<T>& x);

template <typename T>
class Rcca {
 public:
  Rcca() = default;
  /// Throws kConfig unless channels is divisible by 8 and cycles is in [0, 4].
  Rcca(Builder<T>& b, const std::string& name, int channels, int cycles);

  Tensor<T> operator()(const Tensor<T>& input) const;

  /// Just the shared-weight cycles on a C/4-channel working map.
  Tensor<T> attend(const Tensor<T>& work) const;

  int cycles() const { return cycles_; }
  CcaProjections<T>& projections() { return proj_; }
  Conv2d<T>& reduce() { return reduce_; }
  Conv2d<T>& post() { return post_; }
  Conv2d<T>& fuse() { return fuse_; }

 private:
  int cycles_ = 2;
  Conv2d<T> reduce_;
  CcaProjections<T> proj_;
  Conv2d<T> post_;
  Conv2d<T> fuse_;
};

extern template class Rcca<float>;
extern template class Rcca<double>;

}  // namespace artext

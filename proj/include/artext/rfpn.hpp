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

#include "artext/backbone.hpp"
#include "artext/layers.hpp"
#include "artext/model_config.hpp"

namespace artext {

/// Residual dense block: y = x + fuse(concat(x, l1, ..., lL)), where layer j
/// sees concat(x, l1, ..., l_{j-1}) and adds `growth` channels.
template <typename T>
class RdbBlock {
 public:
  RdbBlock() = default;
  RdbBlock(Builder<T>& b, const std::string& name, int channels, int growth, int layers);
  Tensor<T> operator()(const Tensor<T>& x) const;

  std::vector<Conv2d<T>>& layers() { return layers_; }
  Conv2d<T>& local_fusion() { return fusion_; }
  int channels() const { return channels_; }

 private:
  int channels_ = 0;
  std::vector<Conv2d<T>> layers_;
  Conv2d<T> fusion_;
};

/// Intermediate maps of the noise-reduction branch, kept for tests.
template <typename T>
struct RfrmTrace {
  Tensor<T> noise_first;   // O
  Tensor<T> noise_second;  // O'
  Tensor<T> estimate;      // CRC(O + O')
  Tensor<T> cleaned;       // D' = D - CRC(O + O')
};

/// Redundant-feature reduction: estimates a background-noise map from D
/// with two residual dense blocks and subtracts it.
template <typename T>
class Rfrm {
 public:
  Rfrm() = default;
  Rfrm(Builder<T>& b, const std::string& name, int channels, int growth, int layers);

  Tensor<T> operator()(const Tensor<T>& d) const { return trace(d).cleaned; }
  RfrmTrace<T> trace(const Tensor<T>& d) const;

  Conv2d<T>& entry() { return entry_; }
  RdbBlock<T>& first() { return rdb1_; }
  RdbBlock<T>& second() { return rdb2_; }
  Conv2d<T>& crc_first() { return crc1_; }
  Conv2d<T>& crc_second() { return crc2_; }
  /// Zeroes every conv of the branch.
  void zero_all();

 private:
  Conv2d<T> entry_;
  RdbBlock<T> rdb1_;
  RdbBlock<T> rdb2_;
  Conv2d<T> crc1_;
  Conv2d<T> crc2_;
};

/// Pyramid fusion to a single stride-4 map of `fpn_width` channels.
///
/// With use_rfpn: lateral 1x1 projections, top-down nearest upsample-add
/// (the rfrm_level input replaced by Rfrm(D) when use_rfrm), then every level
/// bilinearly upsampled to stride 4, concatenated, and fused by a 3x3 conv.
/// Without use_rfpn the top-down adds are skipped.
template <typename T>
class Rfpn {
 public:
  Rfpn() = default;
  Rfpn(Builder<T>& b, const ModelConfig& config);

  Tensor<T> operator()(const PyramidFeatures<T>& enhanced) const;
  /// Top-down merged levels before the final fuse (each fpn_width channels).
  std::array<Tensor<T>, 4> merged_levels(const PyramidFeatures<T>& enhanced) const;

  bool use_rfpn() const { return use_rfpn_; }
  bool use_rfrm() const { return use_rfrm_; }
  int rfrm_level() const { return rfrm_level_; }
  Rfrm<T>& rfrm() { return rfrm_; }
  std::array<Conv2d<T>, 4>& laterals() { return laterals_; }
  Conv2d<T>& fuse() { return fuse_; }

 private:
  bool use_rfpn_ = true;
  bool use_rfrm_ = true;
  int rfrm_level_ = 2;
  std::array<Conv2d<T>, 4> laterals_;
  Conv2d<T> fuse_;
  Rfrm<T> rfrm_;
};

extern template class RdbBlock<float>;
extern template class RdbBlock<double>;
extern template class Rfrm<float>;
extern template class Rfrm<double>;
extern template class Rfpn<float>;
extern template class Rfpn<double>;

}  // namespace artext

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


// Full network: backbone -> per-level RCCA -> R-FPN -> Seg-Head, plus the
// boundary refiner that runs on sampled node features.

#pragma once

#include <array>
#include <memory>

#include "artext/backbone.hpp"
#include "artext/rcca.hpp"
#include "artext/refine.hpp"
#include "artext/rfpn.hpp"
#include "artext/seghead.hpp"

namespace artext {

template <typename T>
struct DenseOutput {
  Tensor<T> fused;
  FieldMaps<T> maps;
  /// Sampling source for the refiner: fused features plus field channels.
  Tensor<T> source;
};

template <typename T>
class Detector {
 public:
  /// Throws kConfig on an invalid configuration.
  Detector(const ModelConfig& config, uint64_t seed);
  Detector(const Detector&) = delete;
  Detector& operator=(const Detector&) = delete;

  DenseOutput<T> forward(const Tensor<T>& images) const;
  PyramidFeatures<T> enhance(const PyramidFeatures<T>& features) const;

  const ModelConfig& config() const { return config_; }
  ParameterStore<T>& store() { return store_; }
  const ParameterStore<T>& store() const { return store_; }
  Backbone<T>& backbone() { return backbone_; }
  Rcca<T>& rcca(int level) { return rcca_[static_cast<size_t>(level)]; }
  Rfpn<T>& rfpn() { return rfpn_; }
  SegHead<T>& head() { return head_; }
  Refiner<T>& refiner() { return refiner_; }
  const Refiner<T>& refiner() const { return refiner_; }

 private:
  ModelConfig config_;
  ParameterStore<T> store_;
  Backbone<T> backbone_;
  std::array<Rcca<T>, 4> rcca_;
  Rfpn<T> rfpn_;
  SegHead<T> head_;
  Refiner<T> refiner_;
};

extern template class Detector<float>;
extern template class Detector<double>;

}  // namespace artext

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

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "artext/rng.hpp"
#include "artext/tensor.hpp"

namespace artext {

template <typename T>
struct Parameter {
  std::string name;
  Tensor<T> value;
  std::vector<T> first_moment;
  std::vector<T> second_moment;
  int64_t step = 0;
};

/// Owns every trainable tensor of a model under unique dotted names.
template <typename T>
class ParameterStore {
 public:
  /// Registers a parameter; throws kConfig on duplicate names.
  Tensor<T> create(const std::string& name, Shape shape);

  Parameter<T>* find(const std::string& name);
  const Parameter<T>* find(const std::string& name) const;

  std::deque<Parameter<T>>& parameters() { return params_; }
  const std::deque<Parameter<T>>& parameters() const { return params_; }

  void zero_grad();
  int64_t total_size() const;

 private:
  // deque keeps element addresses stable while modules register.
  std::deque<Parameter<T>> params_;
};

struct AdamOptions {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// One bias-corrected Adam update of every parameter. Gradients are left in
/// place. Parameters that never received a gradient raise kUsage unless
/// `skip_missing` is set (ablated branches are simply absent, not gradless).
template <typename T>
void adam_step(ParameterStore<T>& store, const AdamOptions& options, bool skip_missing = false);

/// Kaiming-uniform fan-in initialization: U(-b, b), b = gain * sqrt(3 / fan_in).
template <typename T>
void kaiming_uniform(Tensor<T>& weight, Rng& rng, double gain);

extern template class ParameterStore<float>;
extern template class ParameterStore<double>;

}  // namespace artext

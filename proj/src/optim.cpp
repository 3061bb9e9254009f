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

#include "artext/optim.hpp"

#include <cmath>

namespace artext {

template <typename T>
Tensor<T> ParameterStore<T>::create(const std::string& name, Shape shape) {
  if (find(name)) fail(ErrorKind::kConfig, "duplicate parameter name '" + name + "'");
  Parameter<T> p;
  p.name = name;
  p.value = Tensor<T>(shape, T(0), true);
  params_.push_back(std::move(p));
  return params_.back().value;
}

template <typename T>
Parameter<T>* ParameterStore<T>::find(const std::string& name) {
  for (auto& p : params_) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

template <typename T>
const Parameter<T>* ParameterStore<T>::find(const std::string& name) const {
  for (const auto& p : params_) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

template <typename T>
void ParameterStore<T>::zero_grad() {
  for (auto& p : params_) p.value.zero_grad();
}

template <typename T>
int64_t ParameterStore<T>::total_size() const {
  int64_t n = 0;
  for (const auto& p : params_) n += p.value.numel();
  return n;
}

template <typename T>
void adam_step(ParameterStore<T>& store, const AdamOptions& options, bool skip_missing) {
  for (auto& p : store.parameters()) {
    if (!p.value.has_grad()) {
      if (skip_missing) continue;
      fail(ErrorKind::kUsage, "adam_step: parameter '" + p.name + "' has no gradient");
    }
  }
  for (auto& p : store.parameters()) {
    if (!p.value.has_grad()) continue;
    const size_t n = static_cast<size_t>(p.value.numel());
    if (p.first_moment.size() != n) {
      p.first_moment.assign(n, T(0));
      p.second_moment.assign(n, T(0));
    }
    ++p.step;
    const double bc1 = 1.0 - std::pow(options.beta1, static_cast<double>(p.step));
    const double bc2 = 1.0 - std::pow(options.beta2, static_cast<double>(p.step));
    auto values = p.value.data();
    auto grad = p.value.grad();
    const T b1 = static_cast<T>(options.beta1), b2 = static_cast<T>(options.beta2);
    for (size_t i = 0; i < n; ++i) {
      const T g = grad[i];
      p.first_moment[i] = b1 * p.first_moment[i] + (T(1) - b1) * g;
      p.second_moment[i] = b2 * p.second_moment[i] + (T(1) - b2) * g * g;
      const double m_hat = p.first_moment[i] / bc1;
      const double v_hat = p.second_moment[i] / bc2;
      values[i] -= static_cast<T>(options.lr * m_hat / (std::sqrt(v_hat) + options.eps));
    }
  }
}

template <typename T>
void kaiming_uniform(Tensor<T>& weight, Rng& rng, double gain) {
  const Shape& s = weight.shape();
  int64_t fan_in = 1;
  for (int i = 1; i < s.rank(); ++i) fan_in *= s[i];
  const double bound = gain * std::sqrt(3.0 / static_cast<double>(fan_in));
  for (auto& v : weight.data()) v = static_cast<T>(rng.uniform(-bound, bound));
}

template class ParameterStore<float>;
template class ParameterStore<double>;
template void adam_step<float>(ParameterStore<float>&, const AdamOptions&, bool);
template void adam_step<double>(ParameterStore<double>&, const AdamOptions&, bool);
template void kaiming_uniform<float>(Tensor<float>&, Rng&, double);
template void kaiming_uniform<double>(Tensor<double>&, Rng&, double);

}  // namespace artext

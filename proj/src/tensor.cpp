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

#include "artext/tensor.hpp"

#include <cmath>
#include <sstream>
#include <unordered_set>

namespace artext {

namespace {
thread_local bool g_grad_enabled = true;
}  // namespace

Shape::Shape(std::initializer_list<int> dims) {
  if (dims.size() == 0 || dims.size() > 4) {
    fail(ErrorKind::kInvalidShape, "rank must be 1..4, got " + std::to_string(dims.size()));
  }
  for (int d : dims) {
    if (d <= 0) fail(ErrorKind::kInvalidShape, "extents must be positive");
    dims_[static_cast<size_t>(rank_++)] = d;
  }
}

int64_t Shape::numel() const {
  if (rank_ == 0) return 0;
  int64_t n = 1;
  for (int i = 0; i < rank_; ++i) n *= dims_[static_cast<size_t>(i)];
  return n;
}

std::string Shape::str() const {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < rank_; ++i) {
    if (i) os << "x";
    os << dims_[static_cast<size_t>(i)];
  }
  os << ")";
  return os.str();
}

template <typename T>
Tensor<T>::Tensor(Shape shape, T fill, bool requires_grad) : node_(std::make_shared<Node<T>>()) {
  node_->data.assign(static_cast<size_t>(shape.numel()), fill);
  node_->shape = shape;
  node_->requires_grad = requires_grad;
}

template <typename T>
Tensor<T>::Tensor(Shape shape, std::vector<T> values, bool requires_grad)
    : node_(std::make_shared<Node<T>>()) {
  if (static_cast<int64_t>(values.size()) != shape.numel()) {
    fail(ErrorKind::kInvalidShape, "data length " + std::to_string(values.size()) +
                                       " does not match shape " + shape.str());
  }
  node_->shape = shape;
  node_->data = std::move(values);
  node_->requires_grad = requires_grad;
}

template <typename T>
T Tensor<T>::item() const {
  if (numel() != 1) fail(ErrorKind::kUsage, "item() on tensor of shape " + shape().str());
  return node_->data[0];
}

template <typename T>
T& Tensor<T>::at(int n, int c, int h, int w) {
  const Shape& s = node_->shape;
  return node_->data[static_cast<size_t>(((static_cast<int64_t>(n) * s.c() + c) * s.h() + h) * s.w() + w)];
}

template <typename T>
T Tensor<T>::at(int n, int c, int h, int w) const {
  const Shape& s = node_->shape;
  return node_->data[static_cast<size_t>(((static_cast<int64_t>(n) * s.c() + c) * s.h() + h) * s.w() + w)];
}

template <typename T>
Tensor<T> Tensor<T>::detach() const {
  return Tensor(node_->shape, node_->data, false);
}

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }

bool grad_enabled() { return g_grad_enabled; }

template <typename T>
void check_finite(std::span<const T> values, const char* where) {
  for (size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      fail(ErrorKind::kNumeric, std::string("non-finite value in ") + where + " at index " + std::to_string(i));
    }
  }
}

template <typename T>
Tensor<T> make_result(Shape shape, std::vector<T> data, const char* op,
                      std::vector<std::shared_ptr<Node<T>>> inputs,
                      std::function<void(Node<T>&)> backward_fn) {
  check_finite<T>(data, op);
  auto node = std::make_shared<Node<T>>();
  node->shape = shape;
  node->data = std::move(data);
  node->op = op;
  bool needs = false;
  if (g_grad_enabled) {
    for (const auto& in : inputs) needs = needs || (in && in->requires_grad);
  }
  if (needs) {
    node->requires_grad = true;
    node->inputs = std::move(inputs);
    node->backward = std::move(backward_fn);
  }
  return Tensor<T>::from_node(std::move(node));
}

template <typename T>
void backward(const Tensor<T>& loss) {
  if (!loss.defined() || loss.numel() != 1) {
    fail(ErrorKind::kUsage, "backward() requires a scalar loss");
  }
  Node<T>* root = loss.node();
  if (!root->requires_grad) return;

  // Iterative post-order DFS; `order` ends up with inputs before consumers.
  std::vector<Node<T>*> order;
  std::unordered_set<Node<T>*> seen;
  std::vector<std::pair<Node<T>*, size_t>> stack{{root, 0}};
  seen.insert(root);
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->inputs.size()) {
      Node<T>* child = node->inputs[next++].get();
      if (child && child->requires_grad && !seen.count(child)) {
        seen.insert(child);
        stack.emplace_back(child, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  for (Node<T>* node : order) {
    if (node->backward) node->grad.assign(node->data.size(), T(0));
  }
  root->grad_buffer()[0] += T(1);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node<T>* node = *it;
    if (!node->backward) continue;
    node->backward(*node);
    std::vector<T>().swap(node->grad);
  }
}

template class Tensor<float>;
template class Tensor<double>;
template void backward<float>(const Tensor<float>&);
template void backward<double>(const Tensor<double>&);
template void check_finite<float>(std::span<const float>, const char*);
template void check_finite<double>(std::span<const double>, const char*);
template Tensor<float> make_result<float>(Shape, std::vector<float>, const char*,
                                          std::vector<std::shared_ptr<Node<float>>>,
                                          std::function<void(Node<float>&)>);
template Tensor<double> make_result<double>(Shape, std::vector<double>, const char*,
                                            std::vector<std::shared_ptr<Node<double>>>,
                                            std::function<void(Node<double>&)>);

}  // namespace artext

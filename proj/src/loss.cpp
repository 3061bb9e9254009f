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


#include "artext/loss.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace artext {

namespace {

void check_batch(const Shape& s, int channels, const std::vector<const GroundTruthMaps*>& gt, const char* what) {
  if (s.rank() != 4 || s.c() != channels || static_cast<size_t>(s.n()) != gt.size()) {
    fail(ErrorKind::kInvalidShape, std::string(what) + ": prediction " + s.str() + " does not match targets");
  }
  for (const auto* g : gt) {
    if (g->height != s.h() || g->width != s.w()) {
      fail(ErrorKind::kInvalidShape, std::string(what) + ": target grid does not match prediction " + s.str());
    }
  }
}

template <typename T>
Tensor<T> zero_scalar() {
  return Tensor<T>(Shape{1}, T(0));
}

}  // namespace

double smooth_l1(double d) {
  const double a = std::abs(d);
  return a < 1.0 ? 0.5 * d * d : a - 0.5;
}

namespace {

double smooth_l1_grad(double d) { return std::abs(d) < 1.0 ? d : (d > 0 ? 1.0 : -1.0); }

}  // namespace

template <typename T>
Tensor<T> ohem_cross_entropy(const Tensor<T>& logits, const std::vector<const GroundTruthMaps*>& gt, double ratio) {
  const Shape& s = logits.shape();
  check_batch(s, 2, gt, "ohem_cross_entropy");
  const int64_t plane = s.plane();
  const int n = s.n();
  const T* z = logits.ptr();
  std::vector<double> loss(static_cast<size_t>(n * plane));
  std::vector<double> weight(loss.size(), 0.0);
  std::vector<int64_t> negatives;
  int64_t positives = 0;
  for (int b = 0; b < n; ++b) {
    for (int64_t i = 0; i < plane; ++i) {
      const double z0 = z[(b * 2) * plane + i], z1 = z[(b * 2 + 1) * plane + i];
      const double m = std::max(z0, z1);
      const double lse = m + std::log(std::exp(z0 - m) + std::exp(z1 - m));
      const uint8_t label = gt[b]->cls[i];
      const size_t k = static_cast<size_t>(b * plane + i);
      loss[k] = lse - (label ? z1 : z0);
      if (gt[b]->ignore[i]) continue;
      if (label) {
        weight[k] = 1.0;
        ++positives;
      } else {
        negatives.push_back(static_cast<int64_t>(k));
      }
    }
  }
  if (positives == 0) {
    for (int64_t k : negatives) weight[static_cast<size_t>(k)] = 1.0;
  } else {
    const size_t keep = std::min(negatives.size(), static_cast<size_t>(std::ceil(ratio * positives)));
    std::stable_sort(negatives.begin(), negatives.end(),
                     [&](int64_t a, int64_t b) { return loss[static_cast<size_t>(a)] > loss[static_cast<size_t>(b)]; });
    for (size_t j = 0; j < keep; ++j) weight[static_cast<size_t>(negatives[j])] = 1.0;
  }
  const double denom = std::accumulate(weight.begin(), weight.end(), 0.0);
  if (denom == 0.0) return zero_scalar<T>();
  double total = 0.0;
  for (size_t k = 0; k < loss.size(); ++k) total += weight[k] * loss[k];
  std::vector<uint8_t> labels(loss.size());
  for (int b = 0; b < n; ++b)
    for (int64_t i = 0; i < plane; ++i) labels[static_cast<size_t>(b * plane + i)] = gt[b]->cls[i];
  return make_result<T>(Shape{1}, {static_cast<T>(total / denom)}, "ohem_cross_entropy", {logits.shared_node()},
                        [weight = std::move(weight), labels = std::move(labels), denom, n, plane](Node<T>& self) {
                          auto& in = self.inputs[0];
                          if (!in->requires_grad) return;
                          auto& g = in->grad_buffer();
                          const double up = self.grad[0] / denom;
                          for (int b = 0; b < n; ++b) {
                            for (int64_t i = 0; i < plane; ++i) {
                              const size_t k = static_cast<size_t>(b * plane + i);
                              if (weight[k] == 0.0) continue;
                              const double z0 = in->data[(b * 2) * plane + i], z1 = in->data[(b * 2 + 1) * plane + i];
                              const double p1 = 1.0 / (1.0 + std::exp(z0 - z1));
                              const double d1 = p1 - (labels[k] ? 1.0 : 0.0);
                              g[(b * 2) * plane + i] += static_cast<T>(-up * weight[k] * d1);
                              g[(b * 2 + 1) * plane + i] += static_cast<T>(up * weight[k] * d1);
                            }
                          }
                        });
}

template <typename T>
Tensor<T> distance_loss(const Tensor<T>& dist, const std::vector<const GroundTruthMaps*>& gt) {
  const Shape& s = dist.shape();
  check_batch(s, 1, gt, "distance_loss");
  const int64_t plane = s.plane();
  std::vector<int64_t> support;
  double total = 0.0;
  for (int b = 0; b < s.n(); ++b) {
    for (int64_t i = 0; i < plane; ++i) {
      if (!gt[b]->cls[i] || gt[b]->ignore[i]) continue;
      const int64_t k = b * plane + i;
      support.push_back(k);
      total += smooth_l1(static_cast<double>(dist.ptr()[k]) - gt[b]->dist[i]);
    }
  }
  if (support.empty()) return zero_scalar<T>();
  std::vector<double> target;
  target.reserve(support.size());
  for (int64_t k : support) target.push_back(gt[k / plane]->dist[k % plane]);
  const double count = static_cast<double>(support.size());
  return make_result<T>(Shape{1}, {static_cast<T>(total / count)}, "distance_loss", {dist.shared_node()},
                        [support = std::move(support), target = std::move(target), count](Node<T>& self) {
                          auto& in = self.inputs[0];
                          if (!in->requires_grad) return;
                          auto& g = in->grad_buffer();
                          const double up = self.grad[0] / count;
                          for (size_t j = 0; j < support.size(); ++j) {
                            const int64_t k = support[j];
                            g[k] += static_cast<T>(up * smooth_l1_grad(in->data[k] - target[j]));
                          }
                        });
}

template <typename T>
Tensor<T> direction_loss(const Tensor<T>& dir, const std::vector<const GroundTruthMaps*>& gt) {
  const Shape& s = dir.shape();
  check_batch(s, 2, gt, "direction_loss");
  const int64_t plane = s.plane();
  constexpr double kEps = 1e-12;
  std::vector<std::array<int64_t, 2>> support;  // (batch, pixel)
  double total = 0.0;
  const T* p = dir.ptr();
  for (int b = 0; b < s.n(); ++b) {
    for (int64_t i = 0; i < plane; ++i) {
      if (!gt[b]->cls[i] || gt[b]->ignore[i]) continue;
      support.push_back({b, i});
      const double px = p[(b * 2) * plane + i], py = p[(b * 2 + 1) * plane + i];
      const double norm = std::max(std::hypot(px, py), kEps);
      total += 1.0 - (px * gt[b]->dir_x[i] + py * gt[b]->dir_y[i]) / norm;
    }
  }
  if (support.empty()) return zero_scalar<T>();
  std::vector<double> tx, ty;
  for (auto [b, i] : support) {
    tx.push_back(gt[b]->dir_x[i]);
    ty.push_back(gt[b]->dir_y[i]);
  }
  const double count = static_cast<double>(support.size());
  return make_result<T>(Shape{1}, {static_cast<T>(total / count)}, "direction_loss", {dir.shared_node()},
                        [support = std::move(support), tx = std::move(tx), ty = std::move(ty), count,
                         plane](Node<T>& self) {
                          auto& in = self.inputs[0];
                          if (!in->requires_grad) return;
                          auto& g = in->grad_buffer();
                          const double up = self.grad[0] / count;
                          for (size_t j = 0; j < support.size(); ++j) {
                            const auto [b, i] = support[j];
                            const int64_t ix = (b * 2) * plane + i, iy = (b * 2 + 1) * plane + i;
                            const double px = in->data[ix], py = in->data[iy];
                            const double norm = std::hypot(px, py);
                            if (norm < kEps) continue;
                            const double dot = px * tx[j] + py * ty[j];
                            const double n3 = norm * norm * norm;
                            // d(1 - cos)/dp = -(t / |p| - (p.t) p / |p|^3)
                            g[ix] += static_cast<T>(-up * (tx[j] / norm - dot * px / n3));
                            g[iy] += static_cast<T>(-up * (ty[j] / norm - dot * py / n3));
                          }
                        });
}

std::vector<int> best_alignment(const std::vector<double>& xs, const std::vector<double>& ys, const Polygon& target,
                                double scale) {
  const int n = static_cast<int>(xs.size());
  std::vector<int> best(static_cast<size_t>(n));
  double best_cost = INFINITY;
  std::vector<int> order(static_cast<size_t>(n));
  for (int dir = 0; dir < 2; ++dir) {
    for (int shift = 0; shift < n; ++shift) {
      double cost = 0.0;
      for (int p = 0; p < n; ++p) {
        const int q = dir == 0 ? (p + shift) % n : ((shift - p) % n + n) % n;
        order[static_cast<size_t>(p)] = q;
        cost += smooth_l1((xs[p] - target[q].x) / scale) + smooth_l1((ys[p] - target[q].y) / scale);
      }
      if (cost < best_cost) {
        best_cost = cost;
        best = order;
      }
    }
  }
  return best;
}

template <typename T>
Tensor<T> aligned_point_loss(const Tensor<T>& points, const std::vector<Polygon>& targets, double scale) {
  const Shape& s = points.shape();
  if (s.rank() != 4 || s.c() != 2 || s.h() != 1 || static_cast<size_t>(s.n()) != targets.size()) {
    fail(ErrorKind::kInvalidShape, "aligned_point_loss: points " + s.str() + " do not match targets");
  }
  const int k_count = s.n(), pts = s.w();
  if (k_count == 0) return zero_scalar<T>();
  std::vector<double> tx(static_cast<size_t>(k_count * pts)), ty(tx.size());
  double total = 0.0;
  for (int k = 0; k < k_count; ++k) {
    if (static_cast<int>(targets[k].size()) != pts) {
      fail(ErrorKind::kInvalidShape, "aligned_point_loss: target point count differs from proposals");
    }
    std::vector<double> xs(static_cast<size_t>(pts)), ys(xs.size());
    for (int p = 0; p < pts; ++p) {
      xs[p] = points.ptr()[(k * 2) * pts + p];
      ys[p] = points.ptr()[(k * 2 + 1) * pts + p];
    }
    const std::vector<int> order = best_alignment(xs, ys, targets[k], scale);
    for (int p = 0; p < pts; ++p) {
      const Point& t = targets[k][order[p]];
      tx[k * pts + p] = t.x;
      ty[k * pts + p] = t.y;
      total += smooth_l1((xs[p] - t.x) / scale) + smooth_l1((ys[p] - t.y) / scale);
    }
  }
  const double count = static_cast<double>(k_count) * pts;
  return make_result<T>(Shape{1}, {static_cast<T>(total / count)}, "aligned_point_loss", {points.shared_node()},
                        [tx = std::move(tx), ty = std::move(ty), count, k_count, pts, scale](Node<T>& self) {
                          auto& in = self.inputs[0];
                          if (!in->requires_grad) return;
                          auto& g = in->grad_buffer();
                          const double up = self.grad[0] / (count * scale);
                          for (int k = 0; k < k_count; ++k) {
                            for (int p = 0; p < pts; ++p) {
                              const int64_t ix = (k * 2) * pts + p, iy = (k * 2 + 1) * pts + p;
                              g[ix] += static_cast<T>(up * smooth_l1_grad((in->data[ix] - tx[k * pts + p]) / scale));
                              g[iy] += static_cast<T>(up * smooth_l1_grad((in->data[iy] - ty[k * pts + p]) / scale));
                            }
                          }
                        });
}

template <typename T>
LossTerms<T> detection_loss(const FieldMaps<T>& pred, const std::vector<const GroundTruthMaps*>& gt,
                            const std::vector<Tensor<T>>& iterates, const std::vector<Polygon>& targets,
                            const LossWeights& weights) {
  LossTerms<T> terms;
  terms.cls = ohem_cross_entropy(pred.cls, gt, weights.ohem_ratio);
  terms.dist = distance_loss(pred.dist, gt);
  terms.dir = direction_loss(pred.dir, gt);
  if (iterates.empty() || targets.empty()) {
    terms.points = zero_scalar<T>();
  } else {
    Tensor<T> acc = aligned_point_loss(iterates[0], targets, kFieldStride);
    for (size_t i = 1; i < iterates.size(); ++i) acc = add(acc, aligned_point_loss(iterates[i], targets, kFieldStride));
    terms.points = mul_scalar(acc, static_cast<T>(1.0 / iterates.size()));
  }
  terms.total = add(add(mul_scalar(terms.cls, static_cast<T>(weights.cls)), mul_scalar(terms.dist, static_cast<T>(weights.dist))),
                    add(mul_scalar(terms.dir, static_cast<T>(weights.dir)), mul_scalar(terms.points, static_cast<T>(weights.points))));
  return terms;
}

#define ARTEXT_INSTANTIATE(T)                                                                                       \
  template Tensor<T> ohem_cross_entropy(const Tensor<T>&, const std::vector<const GroundTruthMaps*>&, double);      \
  template Tensor<T> distance_loss(const Tensor<T>&, const std::vector<const GroundTruthMaps*>&);                  \
  template Tensor<T> direction_loss(const Tensor<T>&, const std::vector<const GroundTruthMaps*>&);                 \
  template Tensor<T> aligned_point_loss(const Tensor<T>&, const std::vector<Polygon>&, double);                    \
  template LossTerms<T> detection_loss(const FieldMaps<T>&, const std::vector<const GroundTruthMaps*>&,            \
                                       const std::vector<Tensor<T>>&, const std::vector<Polygon>&, const LossWeights&);
ARTEXT_INSTANTIATE(float)
ARTEXT_INSTANTIATE(double)
#undef ARTEXT_INSTANTIATE

}  // namespace artext

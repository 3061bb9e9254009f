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

#include "artext/ops.hpp"

#include <algorithm>
#include <cmath>

#include "artext/kernels.hpp"

namespace artext {

namespace {

constexpr int64_t kParallelThreshold = 1 << 15;

void require(bool ok, const std::string& message) {
  if (!ok) fail(ErrorKind::kInvalidShape, message);
}

void require_rank4(const Shape& s, const char* op) {
  require(s.rank() == 4, std::string(op) + ": expected rank-4 tensor, got " + s.str());
}

template <typename T>
bool wants_grad(const std::shared_ptr<Node<T>>& n) {
  return n && n->requires_grad;
}

}  // namespace

template <typename T>
Tensor<T> conv2d(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& bias,
                 Conv2dOptions options) {
  require_rank4(x.shape(), "conv2d input");
  require_rank4(w.shape(), "conv2d weight");
  const Shape& xs = x.shape();
  const Shape& ws = w.shape();
  require(xs.c() == ws[1], "conv2d: input has " + std::to_string(xs.c()) +
                               " channels, weight expects " + std::to_string(ws[1]));
  if (bias.defined()) {
    require(bias.numel() == ws[0], "conv2d: bias length does not match output channels");
  }
  kernels::ConvGeometry g;
  g.batch = xs.n();
  g.in_channels = xs.c();
  g.in_h = xs.h();
  g.in_w = xs.w();
  g.out_channels = ws[0];
  g.kernel_h = ws[2];
  g.kernel_w = ws[3];
  g.stride = options.stride;
  g.pad_h = options.pad_h;
  g.pad_w = options.pad_w;
  g.dilation = options.dilation;
  require(g.valid(), "conv2d: geometry admits no output for input " + xs.str() + " and kernel " + ws.str());

  Shape out_shape{g.batch, g.out_channels, g.out_h(), g.out_w()};
  std::vector<T> out(static_cast<size_t>(out_shape.numel()));
  kernels::conv2d_forward<T>(g, x.ptr(), w.ptr(), bias.defined() ? bias.ptr() : nullptr, out.data());

  std::vector<std::shared_ptr<Node<T>>> inputs{x.shared_node(), w.shared_node()};
  if (bias.defined()) inputs.push_back(bias.shared_node());
  return make_result<T>(out_shape, std::move(out), "conv2d", std::move(inputs), [g](Node<T>& self) {
    auto& xn = self.inputs[0];
    auto& wn = self.inputs[1];
    Node<T>* bn = self.inputs.size() > 2 ? self.inputs[2].get() : nullptr;
    if (xn->requires_grad) {
      kernels::conv2d_backward_input<T>(g, self.grad.data(), wn->data.data(), xn->grad_buffer().data());
    }
    const bool need_w = wn->requires_grad;
    const bool need_b = bn && bn->requires_grad;
    if (need_w || need_b) {
      std::vector<T> scratch;
      T* dw;
      if (need_w) {
        dw = wn->grad_buffer().data();
      } else {
        scratch.assign(wn->data.size(), T(0));
        dw = scratch.data();
      }
      kernels::conv2d_backward_weight<T>(g, xn->data.data(), self.grad.data(), dw,
                                         need_b ? bn->grad_buffer().data() : nullptr);
    }
  });
}

template <typename T>
Tensor<T> relu(const Tensor<T>& x) {
  const int64_t n = x.numel();
  std::vector<T> out(static_cast<size_t>(n));
  const T* xp = x.ptr();
#pragma omp parallel for if (n > kParallelThreshold)
  for (int64_t i = 0; i < n; ++i) out[i] = xp[i] > T(0) ? xp[i] : T(0);
  return make_result<T>(x.shape(), std::move(out), "relu", {x.shared_node()}, [](Node<T>& self) {
    auto& in = self.inputs[0];
    auto& g = in->grad_buffer();
    const int64_t m = static_cast<int64_t>(self.data.size());
#pragma omp parallel for if (m > kParallelThreshold)
    for (int64_t i = 0; i < m; ++i) {
      if (in->data[i] > T(0)) g[i] += self.grad[i];
    }
  });
}

template <typename T>
Tensor<T> sigmoid(const Tensor<T>& x) {
  const int64_t n = x.numel();
  std::vector<T> out(static_cast<size_t>(n));
  const T* xp = x.ptr();
#pragma omp parallel for if (n > kParallelThreshold)
  for (int64_t i = 0; i < n; ++i) out[i] = T(1) / (T(1) + std::exp(-xp[i]));
  return make_result<T>(x.shape(), std::move(out), "sigmoid", {x.shared_node()}, [](Node<T>& self) {
    auto& g = self.inputs[0]->grad_buffer();
    const int64_t m = static_cast<int64_t>(self.data.size());
    for (int64_t i = 0; i < m; ++i) g[i] += self.grad[i] * self.data[i] * (T(1) - self.data[i]);
  });
}

namespace {

template <typename T, typename F>
Tensor<T> binary(const Tensor<T>& a, const Tensor<T>& b, const char* op, F f, T sign_b) {
  require(a.shape() == b.shape(), std::string(op) + ": shape mismatch " + a.shape().str() + " vs " + b.shape().str());
  const int64_t n = a.numel();
  std::vector<T> out(static_cast<size_t>(n));
  const T* ap = a.ptr();
  const T* bp = b.ptr();
#pragma omp parallel for if (n > kParallelThreshold)
  for (int64_t i = 0; i < n; ++i) out[i] = f(ap[i], bp[i]);
  return make_result<T>(a.shape(), std::move(out), op, {a.shared_node(), b.shared_node()},
                        [sign_b](Node<T>& self) {
                          const size_t m = self.data.size();
                          if (wants_grad(self.inputs[0])) {
                            auto& g = self.inputs[0]->grad_buffer();
                            for (size_t i = 0; i < m; ++i) g[i] += self.grad[i];
                          }
                          if (wants_grad(self.inputs[1])) {
                            auto& g = self.inputs[1]->grad_buffer();
                            for (size_t i = 0; i < m; ++i) g[i] += sign_b * self.grad[i];
                          }
                        });
}

}  // namespace

template <typename T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b) {
  return binary<T>(a, b, "add", [](T u, T v) { return u + v; }, T(1));
}

template <typename T>
Tensor<T> sub(const Tensor<T>& a, const Tensor<T>& b) {
  return binary<T>(a, b, "sub", [](T u, T v) { return u - v; }, T(-1));
}

template <typename T>
Tensor<T> mul(const Tensor<T>& a, const Tensor<T>& b) {
  require(a.shape() == b.shape(), "mul: shape mismatch " + a.shape().str() + " vs " + b.shape().str());
  const int64_t n = a.numel();
  std::vector<T> out(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) out[i] = a.ptr()[i] * b.ptr()[i];
  return make_result<T>(a.shape(), std::move(out), "mul", {a.shared_node(), b.shared_node()}, [](Node<T>& self) {
    auto& an = self.inputs[0];
    auto& bn = self.inputs[1];
    const size_t m = self.data.size();
    if (an->requires_grad) {
      auto& g = an->grad_buffer();
      for (size_t i = 0; i < m; ++i) g[i] += self.grad[i] * bn->data[i];
    }
    if (bn->requires_grad) {
      auto& g = bn->grad_buffer();
      for (size_t i = 0; i < m; ++i) g[i] += self.grad[i] * an->data[i];
    }
  });
}

template <typename T>
Tensor<T> mul_scalar(const Tensor<T>& x, T s) {
  std::vector<T> out(x.data().begin(), x.data().end());
  for (auto& v : out) v *= s;
  return make_result<T>(x.shape(), std::move(out), "mul_scalar", {x.shared_node()}, [s](Node<T>& self) {
    auto& g = self.inputs[0]->grad_buffer();
    for (size_t i = 0; i < self.data.size(); ++i) g[i] += s * self.grad[i];
  });
}

template <typename T>
Tensor<T> sum(const Tensor<T>& x) {
  T acc = 0;
  for (T v : x.data()) acc += v;
  return make_result<T>(Shape{1}, {acc}, "sum", {x.shared_node()}, [](Node<T>& self) {
    auto& g = self.inputs[0]->grad_buffer();
    const T gv = self.grad[0];
    for (auto& v : g) v += gv;
  });
}

template <typename T>
Tensor<T> mean(const Tensor<T>& x) {
  return mul_scalar(sum(x), T(1) / static_cast<T>(x.numel()));
}

template <typename T>
Tensor<T> concat_channels(const std::vector<Tensor<T>>& xs) {
  require(!xs.empty(), "concat_channels: no inputs");
  const Shape& s0 = xs[0].shape();
  require_rank4(s0, "concat_channels");
  int total_c = 0;
  for (const auto& t : xs) {
    const Shape& s = t.shape();
    require_rank4(s, "concat_channels");
    require(s.n() == s0.n() && s.h() == s0.h() && s.w() == s0.w(),
            "concat_channels: N/H/W mismatch " + s.str() + " vs " + s0.str());
    total_c += s.c();
  }
  Shape out_shape{s0.n(), total_c, s0.h(), s0.w()};
  const int64_t plane = s0.plane();
  std::vector<T> out(static_cast<size_t>(out_shape.numel()));
  std::vector<int> offsets;
  std::vector<std::shared_ptr<Node<T>>> inputs;
  int off = 0;
  for (const auto& t : xs) {
    offsets.push_back(off);
    const int c = t.shape().c();
    for (int n = 0; n < s0.n(); ++n) {
      std::copy_n(t.ptr() + static_cast<int64_t>(n) * c * plane, c * plane,
                  out.data() + (static_cast<int64_t>(n) * total_c + off) * plane);
    }
    off += c;
    inputs.push_back(t.shared_node());
  }
  return make_result<T>(out_shape, std::move(out), "concat_channels", std::move(inputs),
                        [offsets, total_c, plane](Node<T>& self) {
                          const int batch = self.shape.n();
                          for (size_t i = 0; i < self.inputs.size(); ++i) {
                            auto& in = self.inputs[i];
                            if (!in->requires_grad) continue;
                            auto& g = in->grad_buffer();
                            const int c = in->shape.c();
                            for (int n = 0; n < batch; ++n) {
                              const T* src = self.grad.data() + (static_cast<int64_t>(n) * total_c + offsets[i]) * plane;
                              T* dst = g.data() + static_cast<int64_t>(n) * c * plane;
                              for (int64_t j = 0; j < c * plane; ++j) dst[j] += src[j];
                            }
                          }
                        });
}

template <typename T>
Tensor<T> slice_channels(const Tensor<T>& x, int begin, int count) {
  const Shape& s = x.shape();
  require_rank4(s, "slice_channels");
  require(begin >= 0 && count > 0 && begin + count <= s.c(), "slice_channels: range out of bounds");
  Shape out_shape{s.n(), count, s.h(), s.w()};
  const int64_t plane = s.plane();
  std::vector<T> out(static_cast<size_t>(out_shape.numel()));
  for (int n = 0; n < s.n(); ++n) {
    std::copy_n(x.ptr() + (static_cast<int64_t>(n) * s.c() + begin) * plane, count * plane,
                out.data() + static_cast<int64_t>(n) * count * plane);
  }
  return make_result<T>(out_shape, std::move(out), "slice_channels", {x.shared_node()},
                        [begin, count, plane](Node<T>& self) {
                          auto& in = self.inputs[0];
                          auto& g = in->grad_buffer();
                          const int c = in->shape.c();
                          for (int n = 0; n < self.shape.n(); ++n) {
                            const T* src = self.grad.data() + static_cast<int64_t>(n) * count * plane;
                            T* dst = g.data() + (static_cast<int64_t>(n) * c + begin) * plane;
                            for (int64_t j = 0; j < count * plane; ++j) dst[j] += src[j];
                          }
                        });
}

namespace {

struct LinearTap {
  int i0, i1;
  double w0, w1;
};

// Half-pixel-center source taps for one output coordinate.
LinearTap bilinear_tap(int out_index, int factor, int in_size) {
  double src = (out_index + 0.5) / factor - 0.5;
  src = std::clamp(src, 0.0, static_cast<double>(in_size - 1));
  int i0 = static_cast<int>(std::floor(src));
  int i1 = std::min(i0 + 1, in_size - 1);
  double f = src - i0;
  return {i0, i1, 1.0 - f, f};
}

}  // namespace

template <typename T>
Tensor<T> upsample(const Tensor<T>& x, int factor, UpsampleMode mode) {
  const Shape& s = x.shape();
  require_rank4(s, "upsample");
  require(factor >= 1, "upsample: factor must be >= 1");
  const int oh = s.h() * factor, ow = s.w() * factor;
  Shape out_shape{s.n(), s.c(), oh, ow};
  const int planes = s.n() * s.c();
  std::vector<T> out(static_cast<size_t>(out_shape.numel()));
  std::vector<LinearTap> ty, tx;
  for (int i = 0; i < oh; ++i) ty.push_back(bilinear_tap(i, factor, s.h()));
  for (int j = 0; j < ow; ++j) tx.push_back(bilinear_tap(j, factor, s.w()));
  const T* xp = x.ptr();
#pragma omp parallel for if (planes * static_cast<int64_t>(oh) * ow > kParallelThreshold)
  for (int p = 0; p < planes; ++p) {
    const T* src = xp + static_cast<int64_t>(p) * s.h() * s.w();
    T* dst = out.data() + static_cast<int64_t>(p) * oh * ow;
    for (int i = 0; i < oh; ++i) {
      for (int j = 0; j < ow; ++j) {
        if (mode == UpsampleMode::kNearest) {
          dst[i * ow + j] = src[(i / factor) * s.w() + j / factor];
        } else {
          const auto& a = ty[static_cast<size_t>(i)];
          const auto& b = tx[static_cast<size_t>(j)];
          dst[i * ow + j] = static_cast<T>(a.w0 * (b.w0 * src[a.i0 * s.w() + b.i0] + b.w1 * src[a.i0 * s.w() + b.i1]) +
                                           a.w1 * (b.w0 * src[a.i1 * s.w() + b.i0] + b.w1 * src[a.i1 * s.w() + b.i1]));
        }
      }
    }
  }
  return make_result<T>(out_shape, std::move(out), "upsample", {x.shared_node()},
                        [factor, mode, ty, tx](Node<T>& self) {
                          auto& in = self.inputs[0];
                          auto& g = in->grad_buffer();
                          const int ih = in->shape.h(), iw = in->shape.w();
                          const int oh2 = self.shape.h(), ow2 = self.shape.w();
                          const int np = self.shape.n() * self.shape.c();
#pragma omp parallel for if (np * static_cast<int64_t>(oh2) * ow2 > kParallelThreshold)
                          for (int p = 0; p < np; ++p) {
                            const T* src = self.grad.data() + static_cast<int64_t>(p) * oh2 * ow2;
                            T* dst = g.data() + static_cast<int64_t>(p) * ih * iw;
                            for (int i = 0; i < oh2; ++i) {
                              for (int j = 0; j < ow2; ++j) {
                                const T gv = src[i * ow2 + j];
                                if (mode == UpsampleMode::kNearest) {
                                  dst[(i / factor) * iw + j / factor] += gv;
                                } else {
                                  const auto& a = ty[static_cast<size_t>(i)];
                                  const auto& b = tx[static_cast<size_t>(j)];
                                  dst[a.i0 * iw + b.i0] += static_cast<T>(a.w0 * b.w0) * gv;
                                  dst[a.i0 * iw + b.i1] += static_cast<T>(a.w0 * b.w1) * gv;
                                  dst[a.i1 * iw + b.i0] += static_cast<T>(a.w1 * b.w0) * gv;
                                  dst[a.i1 * iw + b.i1] += static_cast<T>(a.w1 * b.w1) * gv;
                                }
                              }
                            }
                          }
                        });
}

template <typename T>
Tensor<T> softmax_axis(const Tensor<T>& x, int axis) {
  const Shape& s = x.shape();
  require(axis >= 0 && axis < s.rank(), "softmax_axis: axis out of range");
  int64_t outer = 1, inner = 1;
  for (int i = 0; i < axis; ++i) outer *= s[i];
  for (int i = axis + 1; i < s.rank(); ++i) inner *= s[i];
  const int len = s[axis];
  std::vector<T> out(static_cast<size_t>(s.numel()));
  const T* xp = x.ptr();
#pragma omp parallel for if (s.numel() > kParallelThreshold)
  for (int64_t o = 0; o < outer; ++o) {
    for (int64_t in = 0; in < inner; ++in) {
      const int64_t base = o * len * inner + in;
      T mx = xp[base];
      for (int i = 1; i < len; ++i) mx = std::max(mx, xp[base + i * inner]);
      T z = 0;
      for (int i = 0; i < len; ++i) {
        const T e = std::exp(xp[base + i * inner] - mx);
        out[base + i * inner] = e;
        z += e;
      }
      for (int i = 0; i < len; ++i) out[base + i * inner] /= z;
    }
  }
  return make_result<T>(s, std::move(out), "softmax_axis", {x.shared_node()},
                        [outer, inner, len](Node<T>& self) {
                          auto& g = self.inputs[0]->grad_buffer();
                          const auto& y = self.data;
                          const auto& gy = self.grad;
#pragma omp parallel for if (static_cast<int64_t>(y.size()) > kParallelThreshold)
                          for (int64_t o = 0; o < outer; ++o) {
                            for (int64_t in = 0; in < inner; ++in) {
                              const int64_t base = o * len * inner + in;
                              T dot = 0;
                              for (int i = 0; i < len; ++i) dot += gy[base + i * inner] * y[base + i * inner];
                              for (int i = 0; i < len; ++i) {
                                g[base + i * inner] += y[base + i * inner] * (gy[base + i * inner] - dot);
                              }
                            }
                          }
                        });
}

template <typename T>
Tensor<T> circular_pad_w(const Tensor<T>& x, int pad) {
  const Shape& s = x.shape();
  require_rank4(s, "circular_pad_w");
  require(pad >= 0 && pad <= s.w(), "circular_pad_w: pad must be in [0, W]");
  const int w = s.w(), ow = w + 2 * pad;
  Shape out_shape{s.n(), s.c(), s.h(), ow};
  const int64_t rows = static_cast<int64_t>(s.n()) * s.c() * s.h();
  std::vector<T> out(static_cast<size_t>(out_shape.numel()));
  for (int64_t r = 0; r < rows; ++r) {
    for (int j = 0; j < ow; ++j) out[r * ow + j] = x.ptr()[r * w + ((j - pad) % w + w) % w];
  }
  return make_result<T>(out_shape, std::move(out), "circular_pad_w", {x.shared_node()},
                        [pad, w, ow, rows](Node<T>& self) {
                          auto& g = self.inputs[0]->grad_buffer();
                          for (int64_t r = 0; r < rows; ++r) {
                            for (int j = 0; j < ow; ++j) g[r * w + ((j - pad) % w + w) % w] += self.grad[r * ow + j];
                          }
                        });
}

template <typename T>
Tensor<T> normalize_pairs(const Tensor<T>& x, T eps) {
  const Shape& s = x.shape();
  require_rank4(s, "normalize_pairs");
  require(s.c() == 2, "normalize_pairs: expected 2 channels");
  const int64_t plane = s.plane();
  std::vector<T> out(x.data().begin(), x.data().end());
  for (int n = 0; n < s.n(); ++n) {
    T* a = out.data() + n * 2 * plane;
    T* b = a + plane;
    for (int64_t i = 0; i < plane; ++i) {
      const T norm = std::sqrt(a[i] * a[i] + b[i] * b[i]);
      if (norm > eps) {
        a[i] /= norm;
        b[i] /= norm;
      }
    }
  }
  return make_result<T>(s, std::move(out), "normalize_pairs", {x.shared_node()}, [eps, plane](Node<T>& self) {
    auto& in = self.inputs[0];
    auto& g = in->grad_buffer();
    for (int n = 0; n < self.shape.n(); ++n) {
      const int64_t o = n * 2 * plane;
      for (int64_t i = 0; i < plane; ++i) {
        const T va = in->data[o + i], vb = in->data[o + plane + i];
        const T ga = self.grad[o + i], gb = self.grad[o + plane + i];
        const T norm = std::sqrt(va * va + vb * vb);
        if (norm > eps) {
          const T ua = va / norm, ub = vb / norm;
          const T dot = ua * ga + ub * gb;
          g[o + i] += (ga - ua * dot) / norm;
          g[o + plane + i] += (gb - ub * dot) / norm;
        } else {
          g[o + i] += ga;
          g[o + plane + i] += gb;
        }
      }
    }
  });
}

template <typename T>
Tensor<T> cca_affinity(const Tensor<T>& q, const Tensor<T>& k) {
  const Shape& s = q.shape();
  require_rank4(s, "cca_affinity");
  require(s == k.shape(), "cca_affinity: Q and K shapes differ " + s.str() + " vs " + k.shape().str());
  const int n = s.n(), c = s.c(), h = s.h(), w = s.w();
  Shape out_shape{n, h + w - 1, h, w};
  std::vector<T> out(static_cast<size_t>(out_shape.numel()));
  kernels::cca_affinity_forward<T>(n, c, h, w, q.ptr(), k.ptr(), out.data());
  return make_result<T>(out_shape, std::move(out), "cca_affinity", {q.shared_node(), k.shared_node()},
                        [n, c, h, w](Node<T>& self) {
                          auto& qn = self.inputs[0];
                          auto& kn = self.inputs[1];
                          kernels::cca_affinity_backward<T>(
                              n, c, h, w, qn->data.data(), kn->data.data(), self.grad.data(),
                              qn->requires_grad ? qn->grad_buffer().data() : nullptr,
                              kn->requires_grad ? kn->grad_buffer().data() : nullptr);
                        });
}

template <typename T>
Tensor<T> cca_aggregate(const Tensor<T>& attn, const Tensor<T>& v, const Tensor<T>& residual) {
  const Shape& s = v.shape();
  require_rank4(s, "cca_aggregate");
  const int n = s.n(), c = s.c(), h = s.h(), w = s.w();
  require(attn.shape() == Shape({n, h + w - 1, h, w}), "cca_aggregate: attention shape " +
                                                          attn.shape().str() + " does not fit V " + s.str());
  require(residual.shape() == s, "cca_aggregate: residual shape mismatch");
  std::vector<T> out(static_cast<size_t>(s.numel()));
  kernels::cca_aggregate_forward<T>(n, c, h, w, attn.ptr(), v.ptr(), residual.ptr(), out.data());
  return make_result<T>(s, std::move(out), "cca_aggregate",
                        {attn.shared_node(), v.shared_node(), residual.shared_node()},
                        [n, c, h, w](Node<T>& self) {
                          auto& an = self.inputs[0];
                          auto& vn = self.inputs[1];
                          auto& rn = self.inputs[2];
                          kernels::cca_aggregate_backward<T>(
                              n, c, h, w, an->data.data(), vn->data.data(), self.grad.data(),
                              an->requires_grad ? an->grad_buffer().data() : nullptr,
                              vn->requires_grad ? vn->grad_buffer().data() : nullptr);
                          if (rn->requires_grad) {
                            auto& g = rn->grad_buffer();
                            for (size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
                          }
                        });
}

namespace {

struct BilinearCell {
  int x0, x1, y0, y1;
  double fx, fy;
  bool clamp_x, clamp_y;
};

BilinearCell locate(double px, double py, int stride, int h, int w) {
  BilinearCell cell{};
  double gx = px / stride - 0.5;
  double gy = py / stride - 0.5;
  cell.clamp_x = gx < 0.0 || gx > w - 1;
  cell.clamp_y = gy < 0.0 || gy > h - 1;
  gx = std::clamp(gx, 0.0, static_cast<double>(w - 1));
  gy = std::clamp(gy, 0.0, static_cast<double>(h - 1));
  cell.x0 = static_cast<int>(std::floor(gx));
  cell.y0 = static_cast<int>(std::floor(gy));
  cell.x1 = std::min(cell.x0 + 1, w - 1);
  cell.y1 = std::min(cell.y0 + 1, h - 1);
  cell.fx = gx - cell.x0;
  cell.fy = gy - cell.y0;
  return cell;
}

}  // namespace

template <typename T>
Tensor<T> sample_points(const Tensor<T>& features, const Tensor<T>& coords,
                        std::span<const int> batch_index, int stride) {
  const Shape& fs = features.shape();
  const Shape& cs = coords.shape();
  require_rank4(fs, "sample_points features");
  require_rank4(cs, "sample_points coords");
  require(cs.c() == 2 && cs.h() == 1, "sample_points: coords must be K x 2 x 1 x P");
  require(static_cast<int>(batch_index.size()) == cs.n(), "sample_points: batch_index size mismatch");
  for (int b : batch_index) require(b >= 0 && b < fs.n(), "sample_points: batch index out of range");
  const int k_count = cs.n(), pts = cs.w(), c = fs.c(), h = fs.h(), w = fs.w();
  const int64_t plane = fs.plane();

  std::vector<BilinearCell> cells(static_cast<size_t>(k_count) * pts);
  for (int k = 0; k < k_count; ++k) {
    for (int p = 0; p < pts; ++p) {
      const T px = coords.ptr()[(k * 2 + 0) * pts + p];
      const T py = coords.ptr()[(k * 2 + 1) * pts + p];
      cells[static_cast<size_t>(k) * pts + p] = locate(px, py, stride, h, w);
    }
  }
  Shape out_shape{k_count, c, 1, pts};
  std::vector<T> out(static_cast<size_t>(out_shape.numel()));
  const T* fp = features.ptr();
  for (int k = 0; k < k_count; ++k) {
    const T* fb = fp + static_cast<int64_t>(batch_index[static_cast<size_t>(k)]) * c * plane;
    for (int ch = 0; ch < c; ++ch) {
      const T* f = fb + ch * plane;
      for (int p = 0; p < pts; ++p) {
        const auto& e = cells[static_cast<size_t>(k) * pts + p];
        const double v = (1 - e.fy) * ((1 - e.fx) * f[e.y0 * w + e.x0] + e.fx * f[e.y0 * w + e.x1]) +
                         e.fy * ((1 - e.fx) * f[e.y1 * w + e.x0] + e.fx * f[e.y1 * w + e.x1]);
        out[(static_cast<int64_t>(k) * c + ch) * pts + p] = static_cast<T>(v);
      }
    }
  }
  std::vector<int> index(batch_index.begin(), batch_index.end());
  return make_result<T>(
      out_shape, std::move(out), "sample_points", {features.shared_node(), coords.shared_node()},
      [cells, index, k_count, pts, c, h, w, plane, stride](Node<T>& self) {
        auto& fn = self.inputs[0];
        auto& cn = self.inputs[1];
        if (fn->requires_grad) {
          auto& g = fn->grad_buffer();
#pragma omp parallel for if (c > 4)
          for (int ch = 0; ch < c; ++ch) {
            for (int k = 0; k < k_count; ++k) {
              T* gf = g.data() + (static_cast<int64_t>(index[static_cast<size_t>(k)]) * c + ch) * plane;
              for (int p = 0; p < pts; ++p) {
                const auto& e = cells[static_cast<size_t>(k) * pts + p];
                const double gv = self.grad[(static_cast<int64_t>(k) * c + ch) * pts + p];
                gf[e.y0 * w + e.x0] += static_cast<T>(gv * (1 - e.fy) * (1 - e.fx));
                gf[e.y0 * w + e.x1] += static_cast<T>(gv * (1 - e.fy) * e.fx);
                gf[e.y1 * w + e.x0] += static_cast<T>(gv * e.fy * (1 - e.fx));
                gf[e.y1 * w + e.x1] += static_cast<T>(gv * e.fy * e.fx);
              }
            }
          }
        }
        if (cn->requires_grad) {
          auto& g = cn->grad_buffer();
          (void)h;
          for (int k = 0; k < k_count; ++k) {
            const T* fb = fn->data.data() + static_cast<int64_t>(index[static_cast<size_t>(k)]) * c * plane;
            for (int p = 0; p < pts; ++p) {
              const auto& e = cells[static_cast<size_t>(k) * pts + p];
              double dx = 0, dy = 0;
              for (int ch = 0; ch < c; ++ch) {
                const T* f = fb + ch * plane;
                const double gv = self.grad[(static_cast<int64_t>(k) * c + ch) * pts + p];
                const double f00 = f[e.y0 * w + e.x0], f01 = f[e.y0 * w + e.x1];
                const double f10 = f[e.y1 * w + e.x0], f11 = f[e.y1 * w + e.x1];
                dx += gv * ((1 - e.fy) * (f01 - f00) + e.fy * (f11 - f10));
                dy += gv * ((1 - e.fx) * (f10 - f00) + e.fx * (f11 - f01));
              }
              if (!e.clamp_x) g[(k * 2 + 0) * pts + p] += static_cast<T>(dx / stride);
              if (!e.clamp_y) g[(k * 2 + 1) * pts + p] += static_cast<T>(dy / stride);
            }
          }
        }
      });
}

template <typename T>
Tensor<T> center_points(const Tensor<T>& coords) {
  const Shape& s = coords.shape();
  require_rank4(s, "center_points");
  require(s.h() == 1, "center_points: expected K x C x 1 x P");
  const int rows = s.n() * s.c(), pts = s.w();
  std::vector<T> out(coords.data().begin(), coords.data().end());
  for (int r = 0; r < rows; ++r) {
    T m = 0;
    for (int p = 0; p < pts; ++p) m += out[r * pts + p];
    m /= static_cast<T>(pts);
    for (int p = 0; p < pts; ++p) out[r * pts + p] -= m;
  }
  return make_result<T>(s, std::move(out), "center_points", {coords.shared_node()}, [rows, pts](Node<T>& self) {
    auto& g = self.inputs[0]->grad_buffer();
    for (int r = 0; r < rows; ++r) {
      T m = 0;
      for (int p = 0; p < pts; ++p) m += self.grad[r * pts + p];
      m /= static_cast<T>(pts);
      for (int p = 0; p < pts; ++p) g[r * pts + p] += self.grad[r * pts + p] - m;
    }
  });
}

#define ARTEXT_OPS(T)                                                                                 \
  template Tensor<T> conv2d<T>(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, Conv2dOptions); \
  template Tensor<T> relu<T>(const Tensor<T>&);                                                       \
  template Tensor<T> sigmoid<T>(const Tensor<T>&);                                                    \
  template Tensor<T> add<T>(const Tensor<T>&, const Tensor<T>&);                                      \
  template Tensor<T> sub<T>(const Tensor<T>&, const Tensor<T>&);                                      \
  template Tensor<T> mul<T>(const Tensor<T>&, const Tensor<T>&);                                      \
  template Tensor<T> mul_scalar<T>(const Tensor<T>&, T);                                              \
  template Tensor<T> sum<T>(const Tensor<T>&);                                                        \
  template Tensor<T> mean<T>(const Tensor<T>&);                                                       \
  template Tensor<T> concat_channels<T>(const std::vector<Tensor<T>>&);                               \
  template Tensor<T> slice_channels<T>(const Tensor<T>&, int, int);                                   \
  template Tensor<T> upsample<T>(const Tensor<T>&, int, UpsampleMode);                                \
  template Tensor<T> softmax_axis<T>(const Tensor<T>&, int);                                          \
  template Tensor<T> circular_pad_w<T>(const Tensor<T>&, int);                                        \
  template Tensor<T> normalize_pairs<T>(const Tensor<T>&, T);                                         \
  template Tensor<T> cca_affinity<T>(const Tensor<T>&, const Tensor<T>&);                             \
  template Tensor<T> cca_aggregate<T>(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&);          \
  template Tensor<T> sample_points<T>(const Tensor<T>&, const Tensor<T>&, std::span<const int>, int); \
  template Tensor<T> center_points<T>(const Tensor<T>&);

ARTEXT_OPS(float)
ARTEXT_OPS(double)

}  // namespace artext

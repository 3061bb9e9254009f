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

#include "artext/kernels.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cstring>
#include <vector>

namespace artext::kernels {

bool ConvGeometry::valid() const {
  return batch > 0 && in_channels > 0 && out_channels > 0 && kernel_h > 0 && kernel_w > 0 &&
         stride > 0 && dilation > 0 && pad_h >= 0 && pad_w >= 0 &&
         in_h + 2 * pad_h - dilation * (kernel_h - 1) - 1 >= 0 &&
         in_w + 2 * pad_w - dilation * (kernel_w - 1) - 1 >= 0;
}

template <typename T>
void gemm(bool trans_a, bool trans_b, int m, int n, int k, const T* a, const T* b, T* c,
          bool accumulate) {
  using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<Mat> cm(c, m, n);
  Eigen::Map<const Mat> am(a, trans_a ? k : m, trans_a ? m : k);
  Eigen::Map<const Mat> bm(b, trans_b ? n : k, trans_b ? k : n);
  if (!accumulate) cm.setZero();
  if (!trans_a && !trans_b) {
    cm.noalias() += am * bm;
  } else if (trans_a && !trans_b) {
    cm.noalias() += am.transpose() * bm;
  } else if (!trans_a && trans_b) {
    cm.noalias() += am * bm.transpose();
  } else {
    cm.noalias() += am.transpose() * bm.transpose();
  }
}

namespace {

template <typename T>
void im2col(const ConvGeometry& g, const T* x, T* col) {
  const int oh = g.out_h(), ow = g.out_w();
  for (int ci = 0; ci < g.in_channels; ++ci) {
    const T* plane = x + static_cast<int64_t>(ci) * g.in_h * g.in_w;
    for (int ky = 0; ky < g.kernel_h; ++ky) {
      for (int kx = 0; kx < g.kernel_w; ++kx) {
        T* row = col + ((static_cast<int64_t>(ci) * g.kernel_h + ky) * g.kernel_w + kx) * oh * ow;
        for (int oy = 0; oy < oh; ++oy) {
          const int iy = oy * g.stride - g.pad_h + ky * g.dilation;
          T* dst = row + static_cast<int64_t>(oy) * ow;
          if (iy < 0 || iy >= g.in_h) {
            std::fill(dst, dst + ow, T(0));
            continue;
          }
          const T* src = plane + static_cast<int64_t>(iy) * g.in_w;
          for (int ox = 0; ox < ow; ++ox) {
            const int ix = ox * g.stride - g.pad_w + kx * g.dilation;
            dst[ox] = (ix >= 0 && ix < g.in_w) ? src[ix] : T(0);
          }
        }
      }
    }
  }
}

template <typename T>
void col2im_add(const ConvGeometry& g, const T* col, T* x) {
  const int oh = g.out_h(), ow = g.out_w();
  for (int ci = 0; ci < g.in_channels; ++ci) {
    T* plane = x + static_cast<int64_t>(ci) * g.in_h * g.in_w;
    for (int ky = 0; ky < g.kernel_h; ++ky) {
      for (int kx = 0; kx < g.kernel_w; ++kx) {
        const T* row = col + ((static_cast<int64_t>(ci) * g.kernel_h + ky) * g.kernel_w + kx) * oh * ow;
        for (int oy = 0; oy < oh; ++oy) {
          const int iy = oy * g.stride - g.pad_h + ky * g.dilation;
          if (iy < 0 || iy >= g.in_h) continue;
          const T* src = row + static_cast<int64_t>(oy) * ow;
          T* dst = plane + static_cast<int64_t>(iy) * g.in_w;
          for (int ox = 0; ox < ow; ++ox) {
            const int ix = ox * g.stride - g.pad_w + kx * g.dilation;
            if (ix >= 0 && ix < g.in_w) dst[ix] += src[ox];
          }
        }
      }
    }
  }
}

}  // namespace

template <typename T>
void conv2d_forward(const ConvGeometry& g, const T* x, const T* w, const T* bias, T* y) {
  const int oh = g.out_h(), ow = g.out_w();
  const int64_t plane_out = static_cast<int64_t>(oh) * ow;
  const int64_t in_size = static_cast<int64_t>(g.in_channels) * g.in_h * g.in_w;
  const int k = g.in_channels * g.kernel_h * g.kernel_w;
  const bool direct = g.pointwise();
#pragma omp parallel for schedule(static) if (g.batch > 1)
  for (int n = 0; n < g.batch; ++n) {
    std::vector<T> col;
    const T* cols = x + n * in_size;
    if (!direct) {
      col.resize(static_cast<size_t>(k) * plane_out);
      im2col(g, cols, col.data());
      cols = col.data();
    }
    T* yn = y + n * g.out_channels * plane_out;
    gemm<T>(false, false, g.out_channels, static_cast<int>(plane_out), k, w, cols, yn, false);
    if (bias) {
      for (int co = 0; co < g.out_channels; ++co) {
        T* p = yn + co * plane_out;
        const T b = bias[co];
        for (int64_t i = 0; i < plane_out; ++i) p[i] += b;
      }
    }
  }
}

template <typename T>
void conv2d_backward_input(const ConvGeometry& g, const T* dy, const T* w, T* dx) {
  const int64_t plane_out = static_cast<int64_t>(g.out_h()) * g.out_w();
  const int64_t in_size = static_cast<int64_t>(g.in_channels) * g.in_h * g.in_w;
  const int k = g.in_channels * g.kernel_h * g.kernel_w;
  const bool direct = g.pointwise();
#pragma omp parallel for schedule(static) if (g.batch > 1)
  for (int n = 0; n < g.batch; ++n) {
    const T* dyn = dy + n * g.out_channels * plane_out;
    T* dxn = dx + n * in_size;
    if (direct) {
      gemm<T>(true, false, k, static_cast<int>(plane_out), g.out_channels, w, dyn, dxn, true);
      continue;
    }
    std::vector<T> col(static_cast<size_t>(k) * plane_out);
    gemm<T>(true, false, k, static_cast<int>(plane_out), g.out_channels, w, dyn, col.data(), false);
    col2im_add(g, col.data(), dxn);
  }
}

template <typename T>
void conv2d_backward_weight(const ConvGeometry& g, const T* x, const T* dy, T* dw, T* db) {
  const int64_t plane_out = static_cast<int64_t>(g.out_h()) * g.out_w();
  const int64_t in_size = static_cast<int64_t>(g.in_channels) * g.in_h * g.in_w;
  const int k = g.in_channels * g.kernel_h * g.kernel_w;
  const size_t wsize = static_cast<size_t>(g.out_channels) * k;
  const bool direct = g.pointwise();
  std::vector<T> partial(wsize * static_cast<size_t>(g.batch));
#pragma omp parallel for schedule(static) if (g.batch > 1)
  for (int n = 0; n < g.batch; ++n) {
    std::vector<T> col;
    const T* cols = x + n * in_size;
    if (!direct) {
      col.resize(static_cast<size_t>(k) * plane_out);
      im2col(g, cols, col.data());
      cols = col.data();
    }
    gemm<T>(false, true, g.out_channels, k, static_cast<int>(plane_out),
            dy + n * g.out_channels * plane_out, cols, partial.data() + wsize * n, false);
  }
  for (int n = 0; n < g.batch; ++n) {
    const T* p = partial.data() + wsize * n;
    for (size_t i = 0; i < wsize; ++i) dw[i] += p[i];
  }
  if (db) {
    for (int n = 0; n < g.batch; ++n) {
      for (int co = 0; co < g.out_channels; ++co) {
        const T* p = dy + (static_cast<int64_t>(n) * g.out_channels + co) * plane_out;
        T s = 0;
        for (int64_t i = 0; i < plane_out; ++i) s += p[i];
        db[co] += s;
      }
    }
  }
}

template <typename T>
void cca_affinity_forward(int n, int c, int h, int w, const T* q, const T* k, T* out) {
  const int64_t plane = static_cast<int64_t>(h) * w;
  const int slots = h + w - 1;
#pragma omp parallel for collapse(2) schedule(static)
  for (int b = 0; b < n; ++b) {
    for (int y = 0; y < h; ++y) {
      const T* qb = q + static_cast<int64_t>(b) * c * plane;
      const T* kb = k + static_cast<int64_t>(b) * c * plane;
      T* ob = out + static_cast<int64_t>(b) * slots * plane;
      for (int x = 0; x < w; ++x) {
        for (int s = 0; s < slots; ++s) {
          int sy, sx;
          cross_source(h, w, y, x, s, &sy, &sx);
          T acc = 0;
          for (int ch = 0; ch < c; ++ch) {
            acc += qb[ch * plane + y * w + x] * kb[ch * plane + sy * w + sx];
          }
          ob[s * plane + y * w + x] = acc;
        }
      }
    }
  }
}

template <typename T>
void cca_affinity_backward(int n, int c, int h, int w, const T* q, const T* k, const T* dout,
                           T* dq, T* dk) {
  const int64_t plane = static_cast<int64_t>(h) * w;
  const int slots = h + w - 1;
#pragma omp parallel for collapse(2) schedule(static)
  for (int b = 0; b < n; ++b) {
    for (int y = 0; y < h; ++y) {
      const T* qb = q + static_cast<int64_t>(b) * c * plane;
      const T* kb = k + static_cast<int64_t>(b) * c * plane;
      const T* gb = dout + static_cast<int64_t>(b) * slots * plane;
      T* dqb = dq ? dq + static_cast<int64_t>(b) * c * plane : nullptr;
      T* dkb = dk ? dk + static_cast<int64_t>(b) * c * plane : nullptr;
      for (int x = 0; x < w; ++x) {
        if (dqb) {
          for (int s = 0; s < slots; ++s) {
            int sy, sx;
            cross_source(h, w, y, x, s, &sy, &sx);
            const T gv = gb[s * plane + y * w + x];
            for (int ch = 0; ch < c; ++ch) dqb[ch * plane + y * w + x] += gv * kb[ch * plane + sy * w + sx];
          }
        }
        if (dkb) {
          // (y, x) is a key for every query in its column and its row.
          for (int yy = 0; yy < h; ++yy) {
            const T gv = gb[static_cast<int64_t>(y) * plane + yy * w + x];
            for (int ch = 0; ch < c; ++ch) dkb[ch * plane + y * w + x] += gv * qb[ch * plane + yy * w + x];
          }
          for (int xx = 0; xx < w; ++xx) {
            if (xx == x) continue;
            const int s = h + (x < xx ? x : x - 1);
            const T gv = gb[s * plane + y * w + xx];
            for (int ch = 0; ch < c; ++ch) dkb[ch * plane + y * w + x] += gv * qb[ch * plane + y * w + xx];
          }
        }
      }
    }
  }
}

template <typename T>
void cca_aggregate_forward(int n, int c, int h, int w, const T* attn, const T* v,
                           const T* residual, T* out) {
  const int64_t plane = static_cast<int64_t>(h) * w;
  const int slots = h + w - 1;
#pragma omp parallel for collapse(2) schedule(static)
  for (int b = 0; b < n; ++b) {
    for (int y = 0; y < h; ++y) {
      const T* ab = attn + static_cast<int64_t>(b) * slots * plane;
      const T* vb = v + static_cast<int64_t>(b) * c * plane;
      T* ob = out + static_cast<int64_t>(b) * c * plane;
      const T* rb = residual ? residual + static_cast<int64_t>(b) * c * plane : nullptr;
      for (int x = 0; x < w; ++x) {
        for (int ch = 0; ch < c; ++ch) {
          T acc = 0;
          for (int s = 0; s < slots; ++s) {
            int sy, sx;
            cross_source(h, w, y, x, s, &sy, &sx);
            acc += ab[s * plane + y * w + x] * vb[ch * plane + sy * w + sx];
          }
          ob[ch * plane + y * w + x] = acc + (rb ? rb[ch * plane + y * w + x] : T(0));
        }
      }
    }
  }
}

template <typename T>
void cca_aggregate_backward(int n, int c, int h, int w, const T* attn, const T* v,
                            const T* dout, T* dattn, T* dv) {
  const int64_t plane = static_cast<int64_t>(h) * w;
  const int slots = h + w - 1;
#pragma omp parallel for collapse(2) schedule(static)
  for (int b = 0; b < n; ++b) {
    for (int y = 0; y < h; ++y) {
      const T* ab = attn + static_cast<int64_t>(b) * slots * plane;
      const T* vb = v + static_cast<int64_t>(b) * c * plane;
      const T* gb = dout + static_cast<int64_t>(b) * c * plane;
      T* dab = dattn ? dattn + static_cast<int64_t>(b) * slots * plane : nullptr;
      T* dvb = dv ? dv + static_cast<int64_t>(b) * c * plane : nullptr;
      for (int x = 0; x < w; ++x) {
        if (dab) {
          for (int s = 0; s < slots; ++s) {
            int sy, sx;
            cross_source(h, w, y, x, s, &sy, &sx);
            T acc = 0;
            for (int ch = 0; ch < c; ++ch) acc += gb[ch * plane + y * w + x] * vb[ch * plane + sy * w + sx];
            dab[s * plane + y * w + x] += acc;
          }
        }
        if (dvb) {
          for (int yy = 0; yy < h; ++yy) {
            const T a = ab[static_cast<int64_t>(y) * plane + yy * w + x];
            for (int ch = 0; ch < c; ++ch) dvb[ch * plane + y * w + x] += a * gb[ch * plane + yy * w + x];
          }
          for (int xx = 0; xx < w; ++xx) {
            if (xx == x) continue;
            const int s = h + (x < xx ? x : x - 1);
            const T a = ab[s * plane + y * w + xx];
            for (int ch = 0; ch < c; ++ch) dvb[ch * plane + y * w + x] += a * gb[ch * plane + y * w + xx];
          }
        }
      }
    }
  }
}

namespace reference {

template <typename T>
void conv2d_forward(const ConvGeometry& g, const T* x, const T* w, const T* bias, T* y) {
  const int oh = g.out_h(), ow = g.out_w();
  for (int n = 0; n < g.batch; ++n)
    for (int co = 0; co < g.out_channels; ++co)
      for (int oy = 0; oy < oh; ++oy)
        for (int ox = 0; ox < ow; ++ox) {
          T acc = bias ? bias[co] : T(0);
          for (int ci = 0; ci < g.in_channels; ++ci)
            for (int ky = 0; ky < g.kernel_h; ++ky)
              for (int kx = 0; kx < g.kernel_w; ++kx) {
                const int iy = oy * g.stride - g.pad_h + ky * g.dilation;
                const int ix = ox * g.stride - g.pad_w + kx * g.dilation;
                if (iy < 0 || iy >= g.in_h || ix < 0 || ix >= g.in_w) continue;
                acc += x[((static_cast<int64_t>(n) * g.in_channels + ci) * g.in_h + iy) * g.in_w + ix] *
                       w[((static_cast<int64_t>(co) * g.in_channels + ci) * g.kernel_h + ky) * g.kernel_w + kx];
              }
          y[((static_cast<int64_t>(n) * g.out_channels + co) * oh + oy) * ow + ox] = acc;
        }
}

template <typename T>
void conv2d_backward_input(const ConvGeometry& g, const T* dy, const T* w, T* dx) {
  const int oh = g.out_h(), ow = g.out_w();
  for (int n = 0; n < g.batch; ++n)
    for (int co = 0; co < g.out_channels; ++co)
      for (int oy = 0; oy < oh; ++oy)
        for (int ox = 0; ox < ow; ++ox) {
          const T gv = dy[((static_cast<int64_t>(n) * g.out_channels + co) * oh + oy) * ow + ox];
          for (int ci = 0; ci < g.in_channels; ++ci)
            for (int ky = 0; ky < g.kernel_h; ++ky)
              for (int kx = 0; kx < g.kernel_w; ++kx) {
                const int iy = oy * g.stride - g.pad_h + ky * g.dilation;
                const int ix = ox * g.stride - g.pad_w + kx * g.dilation;
                if (iy < 0 || iy >= g.in_h || ix < 0 || ix >= g.in_w) continue;
                dx[((static_cast<int64_t>(n) * g.in_channels + ci) * g.in_h + iy) * g.in_w + ix] +=
                    gv * w[((static_cast<int64_t>(co) * g.in_channels + ci) * g.kernel_h + ky) * g.kernel_w + kx];
              }
        }
}

template <typename T>
void conv2d_backward_weight(const ConvGeometry& g, const T* x, const T* dy, T* dw, T* db) {
  const int oh = g.out_h(), ow = g.out_w();
  for (int n = 0; n < g.batch; ++n)
    for (int co = 0; co < g.out_channels; ++co)
      for (int oy = 0; oy < oh; ++oy)
        for (int ox = 0; ox < ow; ++ox) {
          const T gv = dy[((static_cast<int64_t>(n) * g.out_channels + co) * oh + oy) * ow + ox];
          if (db) db[co] += gv;
          for (int ci = 0; ci < g.in_channels; ++ci)
            for (int ky = 0; ky < g.kernel_h; ++ky)
              for (int kx = 0; kx < g.kernel_w; ++kx) {
                const int iy = oy * g.stride - g.pad_h + ky * g.dilation;
                const int ix = ox * g.stride - g.pad_w + kx * g.dilation;
                if (iy < 0 || iy >= g.in_h || ix < 0 || ix >= g.in_w) continue;
                dw[((static_cast<int64_t>(co) * g.in_channels + ci) * g.kernel_h + ky) * g.kernel_w + kx] +=
                    gv * x[((static_cast<int64_t>(n) * g.in_channels + ci) * g.in_h + iy) * g.in_w + ix];
              }
        }
}

template <typename T>
void cca_affinity_forward(int n, int c, int h, int w, const T* q, const T* k, T* out) {
  const int64_t plane = static_cast<int64_t>(h) * w;
  const int slots = h + w - 1;
  for (int b = 0; b < n; ++b)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        for (int s = 0; s < slots; ++s) {
          int sy, sx;
          cross_source(h, w, y, x, s, &sy, &sx);
          T acc = 0;
          for (int ch = 0; ch < c; ++ch)
            acc += q[(b * c + ch) * plane + y * w + x] * k[(b * c + ch) * plane + sy * w + sx];
          out[(b * slots + s) * plane + y * w + x] = acc;
        }
}

template <typename T>
void cca_aggregate_forward(int n, int c, int h, int w, const T* attn, const T* v,
                           const T* residual, T* out) {
  const int64_t plane = static_cast<int64_t>(h) * w;
  const int slots = h + w - 1;
  for (int b = 0; b < n; ++b)
    for (int ch = 0; ch < c; ++ch)
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
          T acc = residual ? residual[(b * c + ch) * plane + y * w + x] : T(0);
          for (int s = 0; s < slots; ++s) {
            int sy, sx;
            cross_source(h, w, y, x, s, &sy, &sx);
            acc += attn[(b * slots + s) * plane + y * w + x] * v[(b * c + ch) * plane + sy * w + sx];
          }
          out[(b * c + ch) * plane + y * w + x] = acc;
        }
}

}  // namespace reference

#define ARTEXT_INSTANTIATE(T)                                                                    \
  template void gemm<T>(bool, bool, int, int, int, const T*, const T*, T*, bool);                \
  template void conv2d_forward<T>(const ConvGeometry&, const T*, const T*, const T*, T*);        \
  template void conv2d_backward_input<T>(const ConvGeometry&, const T*, const T*, T*);           \
  template void conv2d_backward_weight<T>(const ConvGeometry&, const T*, const T*, T*, T*);      \
  template void cca_affinity_forward<T>(int, int, int, int, const T*, const T*, T*);             \
  template void cca_affinity_backward<T>(int, int, int, int, const T*, const T*, const T*, T*,   \
                                         T*);                                                     \
  template void cca_aggregate_forward<T>(int, int, int, int, const T*, const T*, const T*, T*);  \
  template void cca_aggregate_backward<T>(int, int, int, int, const T*, const T*, const T*, T*,  \
                                          T*);                                                    \
  template void reference::conv2d_forward<T>(const ConvGeometry&, const T*, const T*, const T*,  \
                                             T*);                                                 \
  template void reference::conv2d_backward_input<T>(const ConvGeometry&, const T*, const T*, T*); \
  template void reference::conv2d_backward_weight<T>(const ConvGeometry&, const T*, const T*, T*, \
                                                     T*);                                         \
  template void reference::cca_affinity_forward<T>(int, int, int, int, const T*, const T*, T*);  \
  template void reference::cca_aggregate_forward<T>(int, int, int, int, const T*, const T*,      \
                                                    const T*, T*);

ARTEXT_INSTANTIATE(float)
ARTEXT_INSTANTIATE(double)

}  // namespace artext::kernels

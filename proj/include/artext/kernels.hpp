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

// Raw compute kernels on contiguous NCHW buffers.
//
// Every kernel in `artext::kernels` is OpenMP-parallel over an outer axis in
// which each output element is written by exactly one thread, and reductions
// over the batch are summed in a fixed order, so results do not depend on the
// thread count. `artext::kernels::reference` holds plain serial loops with the
// same contracts; tests and the benchmark compare the two.

#pragma once

#include <cstdint>

namespace artext::kernels {

struct ConvGeometry {
  int batch = 1;
  int in_channels = 1;
  int in_h = 1;
  int in_w = 1;
  int out_channels = 1;
  int kernel_h = 1;
  int kernel_w = 1;
  int stride = 1;
  int pad_h = 0;
  int pad_w = 0;
  int dilation = 1;

  int out_h() const { return (in_h + 2 * pad_h - dilation * (kernel_h - 1) - 1) / stride + 1; }
  int out_w() const { return (in_w + 2 * pad_w - dilation * (kernel_w - 1) - 1) / stride + 1; }
  bool valid() const;
  /// 1x1, stride 1, no padding: the input plane is already the im2col matrix.
  bool pointwise() const {
    return kernel_h == 1 && kernel_w == 1 && stride == 1 && pad_h == 0 && pad_w == 0;
  }
};

/// C (M x N) = op(A) * op(B) (+ C if accumulate); all row-major.
template <typename T>
void gemm(bool trans_a, bool trans_b, int m, int n, int k, const T* a, const T* b, T* c,
          bool accumulate);

template <typename T>
void conv2d_forward(const ConvGeometry& g, const T* x, const T* w, const T* bias, T* y);

/// dx += conv2d^T(dy).
template <typename T>
void conv2d_backward_input(const ConvGeometry& g, const T* dy, const T* w, T* dx);

/// dw += sum_n dy_n * col(x_n)^T ; db += sum of dy over batch and plane (db may be null).
template <typename T>
void conv2d_backward_weight(const ConvGeometry& g, const T* x, const T* dy, T* dw, T* db);

/// Criss-cross affinity. q, k: N x C x H x W. out: N x (H+W-1) x H x W where,
/// for position (y, x), slots [0, H) hold column entries y' = 0..H-1 (own
/// position included) and slots [H, H+W-1) hold row entries x' != x in order.
template <typename T>
void cca_affinity_forward(int n, int c, int h, int w, const T* q, const T* k, T* out);

template <typename T>
void cca_affinity_backward(int n, int c, int h, int w, const T* q, const T* k, const T* dout,
                           T* dq, T* dk);

/// out = sum over cross of attn * v, plus residual (residual may be null).
template <typename T>
void cca_aggregate_forward(int n, int c, int h, int w, const T* attn, const T* v,
                           const T* residual, T* out);

template <typename T>
void cca_aggregate_backward(int n, int c, int h, int w, const T* attn, const T* v,
                            const T* dout, T* dattn, T* dv);

namespace reference {

template <typename T>
void conv2d_forward(const ConvGeometry& g, const T* x, const T* w, const T* bias, T* y);
template <typename T>
void conv2d_backward_input(const ConvGeometry& g, const T* dy, const T* w, T* dx);
template <typename T>
void conv2d_backward_weight(const ConvGeometry& g, const T* x, const T* dy, T* dw, T* db);
template <typename T>
void cca_affinity_forward(int n, int c, int h, int w, const T* q, const T* k, T* out);
template <typename T>
void cca_aggregate_forward(int n, int c, int h, int w, const T* attn, const T* v,
                           const T* residual, T* out);

}  // namespace reference

/// Maps (row slot of the cross, position) to the source pixel. Shared by
/// kernels and oracles so that the layout is defined once.
inline void cross_source(int h, [[maybe_unused]] int w, int y, int x, int slot, int* sy, int* sx) {
  if (slot < h) {
    *sy = slot;
    *sx = x;
  } else {
    int j = slot - h;
    *sy = y;
    *sx = j < x ? j : j + 1;
  }
}

}  // namespace artext::kernels

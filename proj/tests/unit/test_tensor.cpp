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


#include <cmath>
#include <vector>

#include "artext/error.hpp"
#include "artext/kernels.hpp"
#include "artext/ops.hpp"
#include "artext/rng.hpp"
#include "doctest.h"

using namespace artext;

namespace {

Tensor<double> filled(Shape s, Rng& rng, bool grad = false) {
  Tensor<double> t(s, 0.0, grad);
  for (double& v : t.data()) v = rng.uniform(-1, 1);
  return t;
}

// Direct-definition convolution, independent of the im2col path.
double conv_at(const Tensor<double>& x, const Tensor<double>& w, int n, int co, int oy, int ox, int stride, int pad,
               int dil) {
  double acc = 0;
  for (int ci = 0; ci < x.shape().c(); ++ci)
    for (int ky = 0; ky < w.shape().h(); ++ky)
      for (int kx = 0; kx < w.shape().w(); ++kx) {
        const int iy = oy * stride - pad + ky * dil, ix = ox * stride - pad + kx * dil;
        if (iy < 0 || ix < 0 || iy >= x.shape().h() || ix >= x.shape().w()) continue;
        acc += x.at(n, ci, iy, ix) * w.at(co, ci, ky, kx);
      }
  return acc;
}

}  // namespace

TEST_CASE("shape and construction") {
  Shape s{2, 3, 4, 5};
  CHECK(s.numel() == 120);
  CHECK(s.plane() == 20);
  CHECK(s.str() == "(2x3x4x5)");
  Tensor<float> t(s, 1.5f);
  CHECK(t.numel() == 120);
  CHECK(t.at(1, 2, 3, 4) == 1.5f);
  CHECK_THROWS_AS(Tensor<float>(Shape{2, 2}, std::vector<float>(3)), Error);
}

TEST_CASE("conv2d matches the direct definition") {
  Rng rng(1);
  for (auto [stride, pad, dil] : std::vector<std::array<int, 3>>{{1, 1, 1}, {2, 1, 1}, {1, 2, 2}, {2, 0, 1}}) {
    auto x = filled({2, 3, 7, 6}, rng), w = filled({4, 3, 3, 3}, rng);
    Tensor<double> none;
    auto y = conv2d(x, w, none, Conv2dOptions::make(stride, pad, dil));
    for (int n = 0; n < 2; ++n)
      for (int c = 0; c < 4; ++c)
        for (int i = 0; i < y.shape().h(); ++i)
          for (int j = 0; j < y.shape().w(); ++j)
            CHECK(y.at(n, c, i, j) == doctest::Approx(conv_at(x, w, n, c, i, j, stride, pad, dil)).epsilon(1e-12));
  }
}

TEST_CASE("conv2d rejects channel mismatch") {
  Tensor<float> x(Shape{1, 3, 4, 4}), w(Shape{2, 2, 3, 3}), b;
  CHECK_THROWS_AS(conv2d(x, w, b), Error);
}

TEST_CASE("parallel kernels agree with the serial reference") {
  Rng rng(2);
  kernels::ConvGeometry g{3, 5, 9, 8, 6, 3, 3, 2, 1, 1, 1};
  auto rand = [&](size_t n) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(-1, 1);
    return v;
  };
  const size_t xs = 3 * 5 * 9 * 8, ws = 6 * 5 * 9, ys = static_cast<size_t>(3) * 6 * g.out_h() * g.out_w();
  auto x = rand(xs), w = rand(ws), b = rand(6), dy = rand(ys);
  std::vector<double> y1(ys), y2(ys), dx1(xs), dx2(xs), dw1(ws), dw2(ws), db1(6), db2(6);
  kernels::conv2d_forward(g, x.data(), w.data(), b.data(), y1.data());
  kernels::reference::conv2d_forward(g, x.data(), w.data(), b.data(), y2.data());
  kernels::conv2d_backward_input(g, dy.data(), w.data(), dx1.data());
  kernels::reference::conv2d_backward_input(g, dy.data(), w.data(), dx2.data());
  kernels::conv2d_backward_weight(g, x.data(), dy.data(), dw1.data(), db1.data());
  kernels::reference::conv2d_backward_weight(g, x.data(), dy.data(), dw2.data(), db2.data());
  for (size_t i = 0; i < ys; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-12));
  for (size_t i = 0; i < xs; ++i) CHECK(dx1[i] == doctest::Approx(dx2[i]).epsilon(1e-12));
  for (size_t i = 0; i < ws; ++i) CHECK(dw1[i] == doctest::Approx(dw2[i]).epsilon(1e-12));
  for (size_t i = 0; i < 6; ++i) CHECK(db1[i] == doctest::Approx(db2[i]).epsilon(1e-12));

  const int n = 2, c = 3, h = 4, wd = 5, slots = h + wd - 1;
  auto q = rand(static_cast<size_t>(n) * c * h * wd), k = rand(q.size()), v = rand(q.size());
  auto attn = rand(static_cast<size_t>(n) * slots * h * wd);
  std::vector<double> a1(attn.size()), a2(attn.size()), o1(q.size()), o2(q.size());
  kernels::cca_affinity_forward(n, c, h, wd, q.data(), k.data(), a1.data());
  kernels::reference::cca_affinity_forward(n, c, h, wd, q.data(), k.data(), a2.data());
  kernels::cca_aggregate_forward(n, c, h, wd, attn.data(), v.data(), q.data(), o1.data());
  kernels::reference::cca_aggregate_forward(n, c, h, wd, attn.data(), v.data(), q.data(), o2.data());
  CHECK(a1 == a2);
  for (size_t i = 0; i < o1.size(); ++i) CHECK(o1[i] == doctest::Approx(o2[i]).epsilon(1e-12));
}

TEST_CASE("cross layout covers the row and column once") {
  const int h = 4, w = 5;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      std::vector<int> hits(h * w, 0);
      for (int s = 0; s < h + w - 1; ++s) {
        int sy, sx;
        kernels::cross_source(h, w, y, x, s, &sy, &sx);
        REQUIRE((sy == y || sx == x));
        ++hits[sy * w + sx];
      }
      for (int yy = 0; yy < h; ++yy)
        for (int xx = 0; xx < w; ++xx) CHECK(hits[yy * w + xx] == ((yy == y || xx == x) ? 1 : 0));
    }
}

TEST_CASE("elementwise ops and reductions") {
  Tensor<double> a(Shape{1, 1, 1, 3}, {-1.0, 0.5, 2.0}), b(Shape{1, 1, 1, 3}, {3.0, -2.0, 1.0});
  CHECK(relu(a).data()[0] == 0.0);
  CHECK(relu(a).data()[2] == 2.0);
  CHECK(sigmoid(a).data()[1] == doctest::Approx(1 / (1 + std::exp(-0.5))));
  CHECK(add(a, b).data()[0] == 2.0);
  CHECK(sub(a, b).data()[1] == 2.5);
  CHECK(mul(a, b).data()[2] == 2.0);
  CHECK(mul_scalar(a, 2.0).data()[1] == 1.0);
  CHECK(sum(a).item() == 1.5);
  CHECK(mean(a).item() == 0.5);
  CHECK_THROWS_AS(add(a, Tensor<double>(Shape{1, 1, 1, 4})), Error);
}

TEST_CASE("softmax rows sum to one") {
  Rng rng(3);
  auto x = filled({2, 7, 3, 2}, rng);
  auto s = softmax_axis(x, 1);
  for (int n = 0; n < 2; ++n)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 2; ++j) {
        double acc = 0;
        for (int c = 0; c < 7; ++c) acc += s.at(n, c, i, j);
        CHECK(acc == doctest::Approx(1.0).epsilon(1e-12));
      }
}

TEST_CASE("circular pad wraps the last axis") {
  Tensor<double> x(Shape{1, 1, 1, 4}, {1, 2, 3, 4});
  auto p = circular_pad_w(x, 2);
  CHECK(std::vector<double>(p.data().begin(), p.data().end()) == std::vector<double>{3, 4, 1, 2, 3, 4, 1, 2});
}

TEST_CASE("upsample nearest repeats and bilinear preserves constants") {
  Tensor<double> x(Shape{1, 1, 2, 2}, {1, 2, 3, 4});
  auto u = upsample(x, 2);
  CHECK(u.at(0, 0, 0, 1) == 1);
  CHECK(u.at(0, 0, 3, 3) == 4);
  Tensor<double> c(Shape{1, 1, 3, 3}, 0.7);
  const auto ub = upsample(c, 4, UpsampleMode::kBilinear);
  for (double v : ub.data()) CHECK(v == doctest::Approx(0.7));
}

TEST_CASE("sample_points hits cell centers exactly") {
  Rng rng(4);
  auto f = filled({1, 2, 4, 5}, rng);
  // Cell (i, j) at stride 4 is centered on image point (4j + 2, 4i + 2).
  Tensor<double> pts(Shape{1, 2, 1, 2}, {2.0, 14.0, 6.0, 10.0});
  const std::vector<int> idx{0};
  auto s = sample_points(f, pts, idx, 4);
  CHECK(s.at(0, 1, 0, 0) == doctest::Approx(f.at(0, 1, 1, 0)));
  CHECK(s.at(0, 0, 0, 1) == doctest::Approx(f.at(0, 0, 2, 3)));
}

TEST_CASE("backward accumulates through shared inputs") {
  Tensor<double> x(Shape{1, 1, 1, 2}, {2.0, 3.0}, true);
  backward(sum(mul(x, x)));
  CHECK(x.grad()[0] == 4.0);
  CHECK(x.grad()[1] == 6.0);
  {
    NoGradGuard g;
    auto y = mul(x, x);
    CHECK_FALSE(y.requires_grad());
  }
}

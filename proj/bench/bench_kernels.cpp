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


// Times the OpenMP kernels against the serial reference loops on detector-sized
// shapes, checks they agree, and times one desk-profile training step.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

#include "artext/augment.hpp"
#include "artext/config.hpp"
#include "artext/kernels.hpp"
#include "artext/pipeline.hpp"
#include "artext/synth.hpp"

using namespace artext;
namespace k = artext::kernels;

namespace {

double time_ms(const std::function<void()>& f, int reps) {
  f();
  double best = 1e30;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

std::vector<float> random_buffer(size_t n, Rng& rng) {
  std::vector<float> v(n);
  for (float& x : v) x = static_cast<float>(rng.uniform(-1, 1));
  return v;
}

float max_diff(const std::vector<float>& a, const std::vector<float>& b) {
  float m = 0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void row(const char* name, double par, double ref, float diff) {
  std::printf("%-34s %10.3f %10.3f %8.2fx %10.2e\n", name, par, ref, ref / par, diff);
}

void bench_conv(const char* name, k::ConvGeometry g, Rng& rng) {
  const size_t xs = static_cast<size_t>(g.batch) * g.in_channels * g.in_h * g.in_w;
  const size_t ws = static_cast<size_t>(g.out_channels) * g.in_channels * g.kernel_h * g.kernel_w;
  const size_t ys = static_cast<size_t>(g.batch) * g.out_channels * g.out_h() * g.out_w();
  const auto x = random_buffer(xs, rng), w = random_buffer(ws, rng), b = random_buffer(g.out_channels, rng);
  const auto dy = random_buffer(ys, rng);
  std::vector<float> y1(ys), y2(ys), dx1(xs), dx2(xs), dw1(ws), dw2(ws);
  const double pf = time_ms([&] { k::conv2d_forward(g, x.data(), w.data(), b.data(), y1.data()); }, 5);
  const double rf = time_ms([&] { k::reference::conv2d_forward(g, x.data(), w.data(), b.data(), y2.data()); }, 2);
  row((std::string(name) + " fwd").c_str(), pf, rf, max_diff(y1, y2));
  const double pi = time_ms([&] {
    std::fill(dx1.begin(), dx1.end(), 0.f);
    k::conv2d_backward_input(g, dy.data(), w.data(), dx1.data());
  }, 5);
  const double ri = time_ms([&] {
    std::fill(dx2.begin(), dx2.end(), 0.f);
    k::reference::conv2d_backward_input(g, dy.data(), w.data(), dx2.data());
  }, 2);
  row((std::string(name) + " bwd-input").c_str(), pi, ri, max_diff(dx1, dx2));
  const double pw = time_ms([&] {
    std::fill(dw1.begin(), dw1.end(), 0.f);
    k::conv2d_backward_weight(g, x.data(), dy.data(), dw1.data(), static_cast<float*>(nullptr));
  }, 5);
  const double rw = time_ms([&] {
    std::fill(dw2.begin(), dw2.end(), 0.f);
    k::reference::conv2d_backward_weight(g, x.data(), dy.data(), dw2.data(), static_cast<float*>(nullptr));
  }, 2);
  row((std::string(name) + " bwd-weight").c_str(), pw, rw, max_diff(dw1, dw2));
}

void bench_cca(int n, int c, int h, int w, Rng& rng) {
  const size_t fs = static_cast<size_t>(n) * c * h * w, as = static_cast<size_t>(n) * (h + w - 1) * h * w;
  const auto q = random_buffer(fs, rng), kk = random_buffer(fs, rng), v = random_buffer(fs, rng);
  const auto attn = random_buffer(as, rng);
  std::vector<float> a1(as), a2(as), o1(fs), o2(fs);
  char name[64];
  std::snprintf(name, sizeof name, "cca_affinity %dx%dx%dx%d", n, c, h, w);
  row(name, time_ms([&] { k::cca_affinity_forward(n, c, h, w, q.data(), kk.data(), a1.data()); }, 5),
      time_ms([&] { k::reference::cca_affinity_forward(n, c, h, w, q.data(), kk.data(), a2.data()); }, 2),
      max_diff(a1, a2));
  std::snprintf(name, sizeof name, "cca_aggregate %dx%dx%dx%d", n, c, h, w);
  row(name, time_ms([&] { k::cca_aggregate_forward(n, c, h, w, attn.data(), v.data(), v.data(), o1.data()); }, 5),
      time_ms([&] { k::reference::cca_aggregate_forward(n, c, h, w, attn.data(), v.data(), v.data(), o2.data()); }, 2),
      max_diff(o1, o2));
}

void bench_train_step() {
  const RunConfig config = profile_defaults("desk");
  Detector<float> model(config.model, 0);
  std::vector<AnnotatedSample> batch;
  for (int i = 0; i < config.batch; ++i) {
    AnnotatedSample s = synth_sample(0, i, config.train_size, Difficulty::kMixed);
    batch.push_back(apply_augment(s, identity_draw(s), config.train_size));
  }
  const double fwd = time_ms([&] { training_loss(model, batch, config); }, 3);
  const double step = time_ms([&] {
    TrainOutput<float> out = training_loss(model, batch, config);
    backward(out.terms.total);
    model.store().zero_grad();
  }, 3);
  std::printf("\ndesk train step, batch %d at %dx%d, %lld parameters\n", config.batch, config.train_size,
              config.train_size, static_cast<long long>(model.store().total_size()));
  std::printf("  forward+loss %.1f ms, forward+backward %.1f ms\n", fwd, step);
  std::printf("  projected epoch on 200 images: %.1f s\n", step * 200.0 / config.batch / 1000.0);
}

}  // namespace

int main() {
  Rng rng(7);
  std::printf("threads %d\n", omp_get_max_threads());
  std::printf("%-34s %10s %10s %9s %10s\n", "kernel", "omp ms", "serial ms", "speedup", "max|diff|");
  k::ConvGeometry g{4, 16, 32, 32, 16, 3, 3, 1, 1, 1, 1};
  bench_conv("conv3x3 4x16x32x32", g, rng);
  g = {4, 32, 16, 16, 64, 3, 3, 2, 1, 1, 1};
  bench_conv("conv3x3/s2 4x32x16x16", g, rng);
  g = {4, 64, 16, 16, 32, 1, 1, 1, 0, 0, 1};
  bench_conv("conv1x1 4x64x16x16", g, rng);
  g = {4, 32, 32, 32, 32, 3, 3, 1, 2, 2, 2};
  bench_conv("conv3x3/d2 4x32x32x32", g, rng);
  bench_cca(4, 16, 16, 16, rng);
  bench_cca(4, 32, 8, 8, rng);
  bench_train_step();
  return 0;
}

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


#include "artext/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "artext/detector.hpp"
#include "artext/loss.hpp"
#include "artext/ops.hpp"
#include "artext/pipeline.hpp"

namespace artext {

GradcheckResult check_gradients(const std::string& name, const std::function<Tensor<double>()>& loss,
                                const std::vector<GradProbe>& probes, double step, int max_coords, Rng& rng,
                                double tolerance) {
  GradcheckResult result;
  result.name = name;
  for (const auto& p : probes) p.tensor.node()->grad.clear();
  Tensor<double> l = loss();
  backward(l);
  for (const auto& probe : probes) {
    Tensor<double> t = probe.tensor;
    const int64_t n = t.numel();
    std::vector<int64_t> coords(static_cast<size_t>(n));
    for (int64_t i = 0; i < n; ++i) coords[static_cast<size_t>(i)] = i;
    if (n > max_coords) {
      for (int64_t i = 0; i < max_coords; ++i) {
        const int64_t j = i + static_cast<int64_t>(rng.next() % static_cast<uint64_t>(n - i));
        std::swap(coords[static_cast<size_t>(i)], coords[static_cast<size_t>(j)]);
      }
      coords.resize(static_cast<size_t>(max_coords));
    }
    double diff2 = 0.0, a2 = 0.0, n2 = 0.0;
    for (int64_t c : coords) {
      const double analytic = t.has_grad() ? t.grad()[static_cast<size_t>(c)] : 0.0;
      double& x = t.data()[static_cast<size_t>(c)];
      const double saved = x;
      double plus, minus;
      {
        NoGradGuard guard;
        x = saved + step;
        plus = loss().item();
        x = saved - step;
        minus = loss().item();
      }
      x = saved;
      const double numeric = (plus - minus) / (2 * step);
      diff2 += (analytic - numeric) * (analytic - numeric);
      a2 += analytic * analytic;
      n2 += numeric * numeric;
      result.max_abs_error = std::max(result.max_abs_error, std::abs(analytic - numeric));
      ++result.coordinates;
    }
    const double scale = std::max(std::sqrt(a2), std::sqrt(n2));
    const double rel = scale > 1e-12 ? std::sqrt(diff2) / scale : std::sqrt(diff2);
    result.relative_error = std::max(result.relative_error, rel);
  }
  result.passed = result.relative_error < tolerance;
  return result;
}

namespace {

using TD = Tensor<double>;

TD random_tensor(Shape shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
  TD t(shape, 0.0, true);
  for (double& v : t.data()) v = rng.uniform(lo, hi);
  return t;
}

// Values bounded away from zero so relu kinks are never crossed.
TD random_away_from_zero(Shape shape, Rng& rng) {
  TD t(shape, 0.0, true);
  for (double& v : t.data()) v = (rng.bernoulli(0.5) ? 1 : -1) * rng.uniform(0.1, 1.0);
  return t;
}

// sum(x * w) with fixed random w.
TD dot_loss(const TD& x, const TD& w) { return sum(mul(x, w)); }

TD weights_like(const Shape& s, Rng& rng) {
  TD w(s);
  for (double& v : w.data()) v = rng.uniform(-1.0, 1.0);
  return w;
}

Polygon square(double x0, double y0, double side) {
  return {{x0, y0}, {x0 + side, y0}, {x0 + side, y0 + side}, {x0, y0 + side}};
}

}  // namespace

std::vector<GradcheckResult> run_gradcheck_suite(uint64_t seed, double tolerance) {
  Rng rng(derive_seed({seed, fnv1a("gradcheck")}));
  std::vector<GradcheckResult> out;
  auto run = [&](const std::string& name, const std::function<TD()>& f, const std::vector<GradProbe>& probes,
                 double step = 1e-3, int max_coords = 40) {
    out.push_back(check_gradients(name, f, probes, step, max_coords, rng, tolerance));
  };

  {
    TD x = random_tensor({1, 2, 5, 5}, rng), w = random_tensor({3, 2, 3, 3}, rng), b = random_tensor({3}, rng);
    TD wl = weights_like({1, 3, 5, 5}, rng);
    run("conv2d", [&] { return dot_loss(conv2d(x, w, b, Conv2dOptions::make(1, 1)), wl); },
        {{"x", x}, {"w", w}, {"b", b}});
  }
  {
    TD x = random_tensor({2, 3, 8, 8}, rng), w = random_tensor({4, 3, 3, 3}, rng), b = random_tensor({4}, rng);
    TD wl = weights_like({2, 4, 4, 4}, rng);
    run("conv2d_stride2_dilation2", [&] { return dot_loss(conv2d(x, w, b, Conv2dOptions::make(2, 2, 2)), wl); },
        {{"x", x}, {"w", w}, {"b", b}});
  }
  {
    TD x = random_away_from_zero({2, 3, 4, 4}, rng);
    TD wl = weights_like(x.shape(), rng);
    run("relu", [&] { return dot_loss(relu(x), wl); }, {{"x", x}});
    run("sigmoid", [&] { return dot_loss(sigmoid(x), wl); }, {{"x", x}});
  }
  {
    TD a = random_tensor({1, 2, 3, 3}, rng), b = random_tensor({1, 2, 3, 3}, rng);
    TD wl = weights_like(a.shape(), rng);
    run("add", [&] { return dot_loss(add(a, b), wl); }, {{"a", a}, {"b", b}});
    run("sub", [&] { return dot_loss(sub(a, b), wl); }, {{"a", a}, {"b", b}});
    run("mul", [&] { return dot_loss(mul(a, b), wl); }, {{"a", a}, {"b", b}});
    run("mul_scalar", [&] { return dot_loss(mul_scalar(a, 1.7), wl); }, {{"a", a}});
    run("mean", [&] { return mean(mul(a, b)); }, {{"a", a}, {"b", b}});
  }
  {
    TD a = random_tensor({2, 2, 3, 4}, rng), b = random_tensor({2, 3, 3, 4}, rng);
    TD wl = weights_like({2, 5, 3, 4}, rng), ws = weights_like({2, 2, 3, 4}, rng);
    run("concat_channels", [&] { return dot_loss(concat_channels<double>({a, b}), wl); }, {{"a", a}, {"b", b}});
    run("slice_channels", [&] { return dot_loss(slice_channels(b, 1, 2), ws); }, {{"b", b}});
  }
  {
    TD x = random_tensor({1, 2, 3, 4}, rng);
    TD wn = weights_like({1, 2, 6, 8}, rng), wb = weights_like({1, 2, 12, 16}, rng);
    run("upsample_nearest", [&] { return dot_loss(upsample(x, 2), wn); }, {{"x", x}});
    run("upsample_bilinear", [&] { return dot_loss(upsample(x, 4, UpsampleMode::kBilinear), wb); }, {{"x", x}});
  }
  {
    TD x = random_tensor({2, 5, 3, 2}, rng, -2.0, 2.0);
    TD wl = weights_like(x.shape(), rng);
    run("softmax_axis", [&] { return dot_loss(softmax_axis(x, 1), wl); }, {{"x", x}});
  }
  {
    TD x = random_tensor({2, 3, 1, 7}, rng);
    TD wl = weights_like({2, 3, 1, 13}, rng);
    run("circular_pad_w", [&] { return dot_loss(circular_pad_w(x, 3), wl); }, {{"x", x}});
    TD c = random_tensor({2, 2, 1, 7}, rng, 0.0, 50.0);
    TD wc = weights_like(c.shape(), rng);
    run("center_points", [&] { return dot_loss(center_points(c), wc); }, {{"c", c}});
  }
  {
    TD x = random_away_from_zero({2, 2, 3, 3}, rng);
    TD wl = weights_like(x.shape(), rng);
    run("normalize_pairs", [&] { return dot_loss(normalize_pairs(x, 1e-6), wl); }, {{"x", x}});
  }
  {
    TD q = random_tensor({2, 3, 4, 5}, rng), k = random_tensor({2, 3, 4, 5}, rng);
    TD wl = weights_like({2, 8, 4, 5}, rng);
    run("cca_affinity", [&] { return dot_loss(cca_affinity(q, k), wl); }, {{"q", q}, {"k", k}});
    TD a = random_tensor({2, 8, 4, 5}, rng), v = random_tensor({2, 3, 4, 5}, rng), r = random_tensor({2, 3, 4, 5}, rng);
    TD wa = weights_like({2, 3, 4, 5}, rng);
    run("cca_aggregate", [&] { return dot_loss(cca_aggregate(a, v, r), wa); }, {{"attn", a}, {"v", v}, {"residual", r}});
  }
  {
    TD f = random_tensor({2, 3, 6, 5}, rng);
    TD c(Shape{3, 2, 1, 4}, 0.0, true);
    for (int64_t i = 0; i < c.numel(); ++i) c.data()[static_cast<size_t>(i)] = rng.uniform(3.0, 17.0) + 0.37;
    const std::vector<int> index{0, 1, 1};
    TD wl = weights_like({3, 3, 1, 4}, rng);
    run("sample_points", [&] { return dot_loss(sample_points(f, c, index, 4), wl); }, {{"features", f}, {"coords", c}});
  }
  {
    // Pixel losses against hand-made targets.
    std::vector<Polygon> polys{square(3, 3, 12), square(18, 14, 9)};
    GroundTruthMaps gt = make_gt_maps(polys, {0, 0}, 32, 32);
    std::vector<const GroundTruthMaps*> gts{&gt};
    TD logits = random_tensor({1, 2, 8, 8}, rng, -2.0, 2.0);
    TD dist = random_tensor({1, 1, 8, 8}, rng, 0.05, 0.95);
    TD dir = random_away_from_zero({1, 2, 8, 8}, rng);
    run("ohem_cross_entropy", [&] { return ohem_cross_entropy(logits, gts, 3.0); }, {{"logits", logits}});
    run("distance_loss", [&] { return distance_loss(dist, gts); }, {{"dist", dist}});
    run("direction_loss", [&] { return direction_loss(dir, gts); }, {{"dir", dir}});
    TD pts(Shape{2, 2, 1, 6}, 0.0, true);
    std::vector<Polygon> targets;
    for (int k = 0; k < 2; ++k) {
      Polygon t;
      for (int p = 0; p < 6; ++p) {
        const double a = 2 * M_PI * p / 6;
        t.push_back({16 + 8 * std::cos(a), 16 + 8 * std::sin(a)});
        pts.at(k, 0, 0, p) = t.back().x + rng.uniform(-9, 9);
        pts.at(k, 1, 0, p) = t.back().y + rng.uniform(-9, 9);
      }
      targets.push_back(t);
    }
    run("aligned_point_loss", [&] { return aligned_point_loss(pts, targets, 4.0); }, {{"points", pts}});
  }

  // Composed modules on a tiny configuration.
  ModelConfig mc;
  mc.widths = {8, 8, 16, 16};
  mc.fpn_width = 8;
  mc.rdb_growth = 4;
  mc.rdb_layers = 2;
  mc.refine_width = 8;
  mc.control_points = 8;
  mc.refine_kernel = 3;
  Detector<double> model(mc, seed);
  // Zero-initialized layers get small random values so their inputs receive gradient.
  for (auto& p : model.store().parameters()) {
    auto v = p.value.data();
    if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; }) && p.value.shape().rank() == 4)
      for (double& x : v) x = rng.uniform(-0.2, 0.2);
  }
  auto param = [&](const std::string& name) {
    Parameter<double>* p = model.store().find(name);
    if (!p) fail(ErrorKind::kUsage, "gradcheck: no parameter " + name);
    return GradProbe{name, p->value};
  };
  {
    Rcca<double>& r = model.rcca(2);
    TD x = random_tensor({1, 16, 5, 4}, rng);
    TD wl = weights_like(x.shape(), rng);
    run("rcca", [&] { return dot_loss(r(x), wl); },
        {{"x", x}, param("rcca.2.q_conv.weight"), param("rcca.2.k_conv.weight"), param("rcca.2.v_conv.weight"),
         param("rcca.2.reduce.weight"), param("rcca.2.fuse.weight")},
        1e-5, 30);
  }
  {
    Rfrm<double>& r = model.rfpn().rfrm();
    TD d = random_tensor({1, 16, 4, 4}, rng);
    TD wl = weights_like(d.shape(), rng);
    run("rfrm", [&] { return dot_loss(r(d), wl); },
        {{"d", d}, param("rfpn.rfrm.entry.weight"), param("rfpn.rfrm.rdb1.dense.0.weight"),
         param("rfpn.rfrm.crc.0.weight"), param("rfpn.rfrm.crc.1.weight")},
        1e-5, 30);
  }
  {
    SegHead<double>& h = model.head();
    TD f = random_tensor({1, 8, 8, 8}, rng);
    TD wl = weights_like({1, 5, 8, 8}, rng);
    run("seghead", [&] { return dot_loss(h.logits(f), wl); },
        {{"fused", f}, param("seghead.conv1.weight"), param("seghead.conv2.weight"), param("seghead.out.weight")},
        1e-5, 30);
  }
  {
    const Refiner<double>& ref = model.refiner();
    TD src = random_tensor({1, 8 + kFieldChannels, 8, 8}, rng);
    TD p0(Shape{1, 2, 1, 8});
    std::vector<Polygon> targets(1);
    for (int p = 0; p < 8; ++p) {
      const double a = 2 * M_PI * p / 8;
      p0.at(0, 0, 0, p) = 16 + 7 * std::cos(a) + 0.3;
      p0.at(0, 1, 0, p) = 16 + 7 * std::sin(a) + 0.3;
      targets[0].push_back({16 + 10 * std::cos(a), 16 + 10 * std::sin(a)});
    }
    const std::vector<int> index{0};
    run("refine_point_loss",
        [&] {
          auto its = ref(src, p0, index);
          TD acc = aligned_point_loss(its[0], targets, 4.0);
          for (size_t i = 1; i < its.size(); ++i) acc = add(acc, aligned_point_loss(its[i], targets, 4.0));
          return acc;
        },
        {{"source", src}, param("refine.encoder.0.weight"), param("refine.mlp.1.weight"), param("refine.head.weight")},
        1e-5, 30);
  }
  {
    // Image -> backbone -> RCCA -> R-FPN -> Seg-Head -> refine -> full loss.
    AnnotatedSample s;
    s.image = Image(32, 32, 3);
    for (auto& v : s.image.pixels) v = static_cast<uint8_t>(rng.uniform_int(0, 255));
    s.polygons = {square(4, 5, 14), square(20, 18, 10)};
    s.ignore = {0, 0};
    const GroundTruthMaps gt = make_gt_maps(s.polygons, s.ignore, 32, 32);
    std::vector<const GroundTruthMaps*> gts{&gt};
    TD image = images_to_tensor<double>({&s.image});
    image.set_requires_grad(true);
    std::vector<BoundaryProposal> props;
    std::vector<Polygon> targets;
    for (int id = 1; id <= 2; ++id) {
      props.push_back(fallback_proposal(gt, id, s.polygons[id - 1], ProposalOptions{0.3, 8, 16.0}));
      Polygon t = resample_closed(s.polygons[id - 1], 8);
      make_counter_clockwise(t);
      targets.push_back(t);
    }
    const TD p0 = proposals_to_tensor<double>(props, 8);
    const std::vector<int> index{0, 0};
    run("detector_loss",
        [&] {
          DenseOutput<double> dense = model.forward(image);
          auto its = model.refiner()(dense.source, p0, index);
          return detection_loss(dense.maps, gts, its, targets, LossWeights{}).total;
        },
        {{"image", image}, param("backbone.stem.0.weight"), param("rcca.0.q_conv.weight"), param("rcca.3.v_conv.weight"),
         param("rfpn.rfrm.crc.1.weight"), param("rfpn.fuse.weight"), param("seghead.out.weight"),
         param("refine.encoder.2.weight"), param("refine.head.weight")},
        1e-6, 16);
  }
  return out;
}

}  // namespace artext

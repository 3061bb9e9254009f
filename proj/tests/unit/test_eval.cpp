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

#include "artext/geomeval.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace artext;

namespace {

Polygon square(double x, double y, double s) { return {{x, y}, {x + s, y}, {x + s, y + s}, {x, y + s}}; }

}  // namespace

TEST_CASE("polygon iou on closed-form cases") {
  CHECK(polygon_iou(square(0, 0, 1), square(0, 0, 1)) == 1.0);
  CHECK(polygon_iou(square(0, 0, 1), square(3, 0, 1)) == 0.0);
  CHECK(polygon_iou(square(0, 0, 1), square(0.5, 0.5, 1)) == doctest::Approx(0.25 / 1.75).epsilon(0.01));
  CHECK(polygon_iou(square(0, 0, 10), square(5, 0, 10)) == doctest::Approx(1.0 / 3.0).epsilon(0.01));
  CHECK(polygon_iou({{0, 0}, {1, 1}, {2, 2}}, square(0, 0, 2)) == 0.0);
}

TEST_CASE("polygon iou tracks a fine sampling oracle") {
  Rng rng(21);
  for (int t = 0; t < 30; ++t) {
    Polygon a, b;
    for (Polygon* p : {&a, &b}) {
      const double cx = rng.uniform(10, 20), cy = rng.uniform(10, 20);
      const int n = rng.uniform_int(4, 10);
      for (int k = 0; k < n; ++k) {
        const double ang = 2 * M_PI * k / n, r = rng.uniform(4, 9);
        p->push_back({cx + r * std::cos(ang), cy + r * std::sin(ang)});
      }
    }
    CHECK(std::abs(polygon_iou(a, b) - oracle::sampled_iou(a, b, 16)) < 0.03);
  }
}

TEST_CASE("greedy matching is one-to-one by descending iou") {
  const std::vector<std::vector<double>> iou{{0.9, 0.6}, {0.7, 0.0}, {0.55, 0.0}};
  const auto rec = match_iou_matrix(iou, {0, 0}, 0.5);
  const auto s = compute_prf(rec);
  // det0-gt0 (0.9) first, then det1 and det2 have nothing left except det0's second choice.
  CHECK(s.tp == 1);
  CHECK(s.fp == 2);
  CHECK(s.fn == 1);
}

TEST_CASE("ignore regions absorb detections and never become misses") {
  const std::vector<Polygon> gts{square(0, 0, 10), square(20, 0, 10)};
  const std::vector<Polygon> dets{square(20, 0, 10)};
  const auto rec = match_detections(dets, gts, {0, 1}, 0.5);
  const auto s = compute_prf(rec);
  CHECK(s.tp == 0);
  CHECK(s.fp == 0);
  CHECK(s.fn == 1);
  bool ignored = false;
  for (const auto& r : rec) ignored = ignored || r.outcome == MatchOutcome::kIgnored;
  CHECK(ignored);
}

TEST_CASE("precision, recall and f-measure") {
  CHECK(f_measure(0.8889, 0.8585) == doctest::Approx(0.8734).epsilon(1e-4));
  CHECK(f_measure(0, 0) == 0.0);
  const auto s = compute_prf(0, 0, 5);
  CHECK(s.precision == 0.0);
  CHECK(s.recall == 0.0);
  CHECK(s.f_measure == 0.0);
}

TEST_CASE("three-image fixture with two hits, one false alarm, one miss") {
  std::vector<EvalImage> images(3);
  images[0] = {"a", {square(0, 0, 10)}, {square(0, 0, 10)}, {0}};
  images[1] = {"b", {square(0, 0, 10), square(50, 50, 5)}, {square(1, 0, 10)}, {0}};
  images[2] = {"c", {}, {square(0, 0, 10)}, {0}};
  const EvalReport r = evaluate_dataset(images, {0.5, 0.75});
  for (const auto& t : r.thresholds) {
    CHECK(t.scores.tp == 2);
    CHECK(t.scores.fp == 1);
    CHECK(t.scores.fn == 1);
    CHECK(t.scores.f_measure == doctest::Approx(2.0 / 3.0));
  }
  const std::string text = format_report(r);
  CHECK(report_metric(text, "iou_0.50.precision") == doctest::Approx(2.0 / 3.0).epsilon(1e-5));
  CHECK(report_metric(text, "iou_0.75.fn") == 1.0);
  CHECK(text.find("[matches]") != std::string::npos);
  CHECK(std::isnan(report_metric(text, "iou_0.90.recall")));
}

TEST_CASE("complexity buckets and dataset statistics") {
  CHECK(complexity_of(9) == Complexity::kSimple);
  CHECK(complexity_of(10) == Complexity::kComplex);
  CHECK(complexity_of(14) == Complexity::kComplex);
  CHECK(complexity_of(15) == Complexity::kModeratelyComplex);
  CHECK(complexity_of(29) == Complexity::kModeratelyComplex);
  CHECK(complexity_of(30) == Complexity::kExtremelyComplex);
  const std::vector<std::vector<Polygon>> polys{{square(0, 0, 5), square(0, 0, 30)}, {square(0, 0, 400)}};
  const auto s = dataset_stats(polys, {{0, 1}, {0}});
  CHECK(s.polygons == 3);
  CHECK(s.ignored == 1);
  CHECK(s.complexity[0] == 3);
  CHECK(s.area[0] == 1);
  CHECK(s.area[2] == 1);
  CHECK(s.area[6] == 1);
}

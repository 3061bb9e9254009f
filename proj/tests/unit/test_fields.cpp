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
#include <limits>

#include "artext/loss.hpp"
#include "artext/ops.hpp"
#include "artext/proposals.hpp"
#include "artext/seghead.hpp"
#include "doctest.h"

using namespace artext;

namespace {

Polygon rect(double x0, double y0, double x1, double y1) { return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}; }

}  // namespace

TEST_CASE("ground-truth maps satisfy the field invariants") {
  const std::vector<Polygon> polys{rect(8, 8, 56, 40), rect(70, 60, 120, 100), rect(0, 0, 2, 2)};
  const GroundTruthMaps gt = make_gt_maps(polys, {0, 0, 0}, 128, 128);
  CHECK(gt.height == 32);
  CHECK(gt.width == 32);
  CHECK(gt.polygon_ignored == std::vector<uint8_t>{0, 0, 1});
  for (int id = 1; id <= 2; ++id) {
    float mx = 0;
    for (size_t i = 0; i < gt.size(); ++i) {
      if (gt.instance[i] != id) continue;
      CHECK(gt.cls[i] == 1);
      CHECK(gt.dist[i] >= 0.0f);
      CHECK(gt.dist[i] <= 1.0f);
      CHECK(std::hypot(gt.dir_x[i], gt.dir_y[i]) == doctest::Approx(1.0).epsilon(1e-5));
      mx = std::max(mx, gt.dist[i]);
    }
    CHECK(mx == 1.0f);
  }
  for (size_t i = 0; i < gt.size(); ++i)
    if (!gt.cls[i]) CHECK(gt.dist[i] == 0.0f);
  // Boundary cells sit at distance zero; interior cells do not.
  for (int y = 2; y < 10; ++y)
    for (int x = 2; x < 14; ++x) {
      const size_t i = static_cast<size_t>(y) * 32 + x;
      const bool edge = y == 2 || y == 9 || x == 2 || x == 13;
      CHECK((gt.dist[i] == 0.0f) == edge);
    }
  // Left part of the first box: the nearest boundary is to the left.
  const size_t c = static_cast<size_t>(6) * 32 + 3;
  REQUIRE(gt.instance[c] == 1);
  CHECK(gt.dir_x[c] < -0.9f);
}

TEST_CASE("ignore regions go to the ignore mask only") {
  const GroundTruthMaps gt = make_gt_maps({rect(8, 8, 40, 40)}, {1}, 64, 64);
  for (size_t i = 0; i < gt.size(); ++i) CHECK(gt.cls[i] == 0);
  int ignored = 0;
  for (uint8_t v : gt.ignore) ignored += v;
  CHECK(ignored == 64);
}

TEST_CASE("components are 8-connected") {
  MaskMap m(4, 4);
  m.set(0, 0, true);
  m.set(1, 1, true);
  m.set(3, 3, true);
  int count = 0;
  const auto labels = label_components(m, &count);
  CHECK(count == 2);
  CHECK(labels[0] == labels[5]);
  CHECK(labels[15] != labels[0]);
}

TEST_CASE("contour of a filled rectangle visits its border cells") {
  MaskMap m(6, 7);
  for (int y = 1; y <= 3; ++y)
    for (int x = 2; x <= 5; ++x) m.set(y, x, true);
  int count = 0;
  const auto labels = label_components(m, &count);
  const auto contour = trace_contour(labels, 6, 7, 1, 1, 2);
  CHECK(contour.size() == 10);
  CHECK(contour.front() == Point{2, 1});
  for (const Point& p : contour) CHECK((p.x == 2 || p.x == 5 || p.y == 1 || p.y == 3));
}

TEST_CASE("proposals are counter-clockwise with the configured point count") {
  MaskMap m(16, 16);
  for (int y = 3; y < 12; ++y)
    for (int x = 2; x < 10; ++x) m.set(y, x, true);
  m.set(14, 14, true);  // below min_area
  const auto props = proposals_from_mask(m, nullptr, ProposalOptions{});
  REQUIRE(props.size() == 1);
  CHECK(props[0].points.size() == 20);
  CHECK(signed_area(props[0].points) > 0.0);
  const BoundingBox b = bounding_box(props[0].points);
  CHECK(b.min_x == doctest::Approx(4 * 2 + 2));
  CHECK(b.max_y == doctest::Approx(4 * 11 + 2));
}

TEST_CASE("boundary discrimination keeps ratios inside the closed band") {
  const std::vector<double> ratios{0.10, 0.249, 0.25, 1.0, 1.75, 1.751};
  const std::vector<bool> keep{false, false, true, true, true, false};
  for (size_t i = 0; i < ratios.size(); ++i) CHECK(bdm_keep(ratios[i]) == keep[i]);
  CHECK(bdm_keep(0.3, BdmThresholds{0.5, 2.0}) == false);
}

TEST_CASE("bdm swaps a proposal of the wrong size for a ground-truth one") {
  const Polygon gt_poly = rect(16, 16, 80, 64);
  const GroundTruthMaps gt = make_gt_maps({gt_poly}, {0}, 96, 96);
  BoundaryProposal small;
  small.points = resample_closed(rect(40, 36, 48, 44), 20);
  CHECK(match_instance(small, gt) == 1);
  const BdmDecision d = bdm_select(small, gt, 1, gt_poly, ProposalOptions{});
  CHECK_FALSE(d.kept);
  CHECK(d.ratio < 0.25);
  CHECK(d.proposal.source == ProposalSource::kGtFallback);
  CHECK(d.proposal.points.size() == 20);

  BoundaryProposal good;
  good.points = resample_closed(gt_poly, 20);
  const BdmDecision k = bdm_select(good, gt, 1, gt_poly, ProposalOptions{});
  CHECK(k.kept);
  CHECK(k.ratio == doctest::Approx(1.0).epsilon(0.05));
  CHECK(k.proposal.source == ProposalSource::kPredicted);
}

TEST_CASE("smooth l1 and point alignment") {
  CHECK(smooth_l1(0.5) == 0.125);
  CHECK(smooth_l1(-3.0) == 2.5);
  const Polygon target{{0, 0}, {8, 0}, {8, 8}, {0, 8}};
  // The same square starting at another vertex, and traversed the other way.
  const std::vector<double> xs{8, 8, 0, 0}, ys{0, 8, 8, 0};
  CHECK(best_alignment(xs, ys, target, 4.0) == std::vector<int>{1, 2, 3, 0});
  const std::vector<double> rx{0, 0, 8, 8}, ry{0, 8, 8, 0};
  CHECK(best_alignment(rx, ry, target, 4.0) == std::vector<int>{0, 3, 2, 1});
  Tensor<double> pts(Shape{1, 2, 1, 4}, {8, 8, 0, 0, 0, 8, 8, 0});
  CHECK(aligned_point_loss(pts, {target}, 4.0).item() == 0.0);
}

TEST_CASE("pixel losses vanish at the target") {
  const GroundTruthMaps gt = make_gt_maps({rect(8, 8, 56, 40)}, {0}, 64, 64);
  std::vector<const GroundTruthMaps*> gts{&gt};
  Tensor<double> dist(Shape{1, 1, 16, 16}), dir(Shape{1, 2, 16, 16});
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      const size_t k = static_cast<size_t>(i) * 16 + j;
      dist.at(0, 0, i, j) = gt.dist[k];
      dir.at(0, 0, i, j) = gt.dir_x[k];
      dir.at(0, 1, i, j) = gt.dir_y[k];
    }
  CHECK(distance_loss(dist, gts).item() == 0.0);
  CHECK(direction_loss(dir, gts).item() == doctest::Approx(0.0).epsilon(1e-7));
  // Confident correct logits give a small loss; flipped ones a large one.
  Tensor<double> good(Shape{1, 2, 16, 16}), bad(Shape{1, 2, 16, 16});
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      const double s = gt.cls[static_cast<size_t>(i) * 16 + j] ? 8.0 : -8.0;
      good.at(0, 1, i, j) = s;
      bad.at(0, 1, i, j) = -s;
    }
  CHECK(ohem_cross_entropy(good, gts, 3.0).item() < 1e-3);
  CHECK(ohem_cross_entropy(bad, gts, 3.0).item() > 7.0);
}

TEST_CASE("ohem keeps three negatives per positive") {
  GroundTruthMaps gt;
  gt.height = 1;
  gt.width = 8;
  gt.cls = {1, 0, 0, 0, 0, 0, 0, 0};
  gt.ignore.assign(8, 0);
  gt.dist.assign(8, 0.f);
  gt.dir_x.assign(8, 0.f);
  gt.dir_y.assign(8, 0.f);
  gt.instance = {1, 0, 0, 0, 0, 0, 0, 0};
  std::vector<const GroundTruthMaps*> gts{&gt};
  Tensor<double> logits(Shape{1, 2, 1, 8});
  // Negative j has text logit j: the three hardest are 7, 6, 5.
  for (int j = 1; j < 8; ++j) logits.at(0, 1, 0, j) = j;
  const auto ce = [](double z_text, bool positive) {
    const double p = 1.0 / (1.0 + std::exp(-z_text));
    return -std::log(positive ? p : 1.0 - p);
  };
  const double want = (ce(0, true) + ce(7, false) + ce(6, false) + ce(5, false)) / 4.0;
  CHECK(ohem_cross_entropy(logits, gts, 3.0).item() == doctest::Approx(want).epsilon(1e-12));
}

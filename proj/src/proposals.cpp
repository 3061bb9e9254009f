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


#include "artext/proposals.hpp"

#include <algorithm>
#include <cmath>

namespace artext {

namespace {

// Clockwise in image coordinates (y down), starting west.
constexpr int kMooreDx[8] = {-1, -1, 0, 1, 1, 1, 0, -1};
constexpr int kMooreDy[8] = {0, -1, -1, -1, 0, 1, 1, 1};

}  // namespace

std::vector<int32_t> label_components(const MaskMap& mask, int* count) {
  const int h = mask.height(), w = mask.width();
  std::vector<int32_t> labels(static_cast<size_t>(h) * w, 0);
  int next = 0;
  std::vector<int> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask(y, x) || labels[static_cast<size_t>(y) * w + x]) continue;
      ++next;
      labels[static_cast<size_t>(y) * w + x] = next;
      stack.assign(1, y * w + x);
      while (!stack.empty()) {
        const int cur = stack.back();
        stack.pop_back();
        const int cy = cur / w, cx = cur % w;
        for (int k = 0; k < 8; ++k) {
          const int ny = cy + kMooreDy[k], nx = cx + kMooreDx[k];
          if (ny < 0 || ny >= h || nx < 0 || nx >= w) continue;
          const size_t ni = static_cast<size_t>(ny) * w + nx;
          if (!mask(ny, nx) || labels[ni]) continue;
          labels[ni] = next;
          stack.push_back(ny * w + nx);
        }
      }
    }
  }
  if (count) *count = next;
  return labels;
}

std::vector<Point> trace_contour(const std::vector<int32_t>& labels, int height, int width, int label, int start_y,
                                 int start_x) {
  auto in = [&](int y, int x) {
    return y >= 0 && y < height && x >= 0 && x < width && labels[static_cast<size_t>(y) * width + x] == label;
  };
  std::vector<Point> contour{{static_cast<double>(start_x), static_cast<double>(start_y)}};
  // The start is the first pixel in raster order, so its west neighbor is outside.
  int cy = start_y, cx = start_x;
  int back = 0;
  int first_dir = -1;
  const size_t limit = static_cast<size_t>(height) * width * 4 + 8;
  while (contour.size() < limit) {
    int found = -1;
    for (int step = 1; step <= 8; ++step) {
      const int d = (back + step) % 8;
      if (in(cy + kMooreDy[d], cx + kMooreDx[d])) {
        found = d;
        break;
      }
    }
    if (found < 0) break;  // isolated pixel
    if (cy == start_y && cx == start_x) {
      if (first_dir == found) break;  // back at the start, leaving the same way
      if (first_dir < 0) first_dir = found;
    }
    cy += kMooreDy[found];
    cx += kMooreDx[found];
    // The last outside neighbor seen, expressed from the new pixel.
    back = found % 2 == 0 ? (found + 6) % 8 : (found + 5) % 8;
    contour.push_back({static_cast<double>(cx), static_cast<double>(cy)});
  }
  if (contour.size() > 1 && contour.back() == contour.front()) contour.pop_back();
  return contour;
}

namespace {

Polygon to_image(const std::vector<Point>& cells) {
  Polygon poly;
  poly.reserve(cells.size());
  for (const Point& c : cells) poly.push_back({(c.x + 0.5) * kFieldStride, (c.y + 0.5) * kFieldStride});
  return poly;
}

}  // namespace

std::vector<BoundaryProposal> proposals_from_mask(const MaskMap& mask, const std::vector<float>* prob,
                                                  const ProposalOptions& options) {
  std::vector<BoundaryProposal> out;
  if (mask.count() == 0) return out;
  const int h = mask.height(), w = mask.width();
  int count = 0;
  const std::vector<int32_t> labels = label_components(mask, &count);
  std::vector<int> start(static_cast<size_t>(count) + 1, -1);
  std::vector<double> score(static_cast<size_t>(count) + 1, 0.0);
  std::vector<int64_t> size(static_cast<size_t>(count) + 1, 0);
  for (int i = 0; i < h * w; ++i) {
    const int l = labels[static_cast<size_t>(i)];
    if (!l) continue;
    if (start[l] < 0) start[l] = i;
    ++size[l];
    if (prob) score[l] += (*prob)[static_cast<size_t>(i)];
  }
  for (int l = 1; l <= count; ++l) {
    Polygon poly = to_image(trace_contour(labels, h, w, l, start[l] / w, start[l] % w));
    if (polygon_area(poly) < options.min_area) continue;
    make_counter_clockwise(poly);
    BoundaryProposal p;
    p.points = resample_closed(poly, options.control_points);
    make_counter_clockwise(p.points);
    p.score = prob ? score[l] / static_cast<double>(size[l]) : 1.0;
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<BoundaryProposal> extract_proposals(const std::vector<float>& text_prob, const std::vector<float>& dist,
                                                int height, int width, const ProposalOptions& options) {
  MaskMap mask(height, width, MaskSource::kPredicted);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const size_t i = static_cast<size_t>(y) * width + x;
      if (static_cast<double>(text_prob[i]) * dist[i] > options.threshold) mask.set(y, x, true);
    }
  }
  return proposals_from_mask(mask, &text_prob, options);
}

bool bdm_keep(double ratio, const BdmThresholds& th) { return ratio >= th.lower && ratio <= th.upper; }

int64_t proposal_cells(const BoundaryProposal& p, int height, int width) {
  const auto raster = rasterize(p.points, 0.0, 0.0, kFieldStride, width, height);
  return std::count(raster.begin(), raster.end(), uint8_t{1});
}

int match_instance(const BoundaryProposal& p, const GroundTruthMaps& gt) {
  const auto raster = rasterize(p.points, 0.0, 0.0, kFieldStride, gt.width, gt.height);
  std::vector<int64_t> overlap;
  for (size_t i = 0; i < raster.size(); ++i) {
    if (!raster[i] || gt.instance[i] <= 0) continue;
    const size_t id = static_cast<size_t>(gt.instance[i]);
    if (overlap.size() <= id) overlap.resize(id + 1, 0);
    ++overlap[id];
  }
  int best = 0;
  int64_t best_count = 0;
  for (size_t id = 1; id < overlap.size(); ++id) {
    if (overlap[id] > best_count) {
      best_count = overlap[id];
      best = static_cast<int>(id);
    }
  }
  return best;
}

BoundaryProposal fallback_proposal(const GroundTruthMaps& gt, int id, const Polygon& gt_polygon,
                                   const ProposalOptions& options) {
  MaskMap kernel(gt.height, gt.width, MaskSource::kGroundTruth);
  MaskMap full(gt.height, gt.width, MaskSource::kGroundTruth);
  for (int y = 0; y < gt.height; ++y) {
    for (int x = 0; x < gt.width; ++x) {
      const size_t i = static_cast<size_t>(y) * gt.width + x;
      if (gt.instance[i] != id) continue;
      full.set(y, x, true);
      if (gt.dist[i] > options.threshold) kernel.set(y, x, true);
    }
  }
  // Largest component of the kernel, then of the whole instance, then the polygon itself.
  for (const MaskMap* m : {&kernel, &full}) {
    auto found = proposals_from_mask(*m, nullptr, options);
    if (found.empty()) continue;
    auto best = std::max_element(found.begin(), found.end(), [](const auto& a, const auto& b) {
      return polygon_area(a.points) < polygon_area(b.points);
    });
    best->instance_id = id;
    best->source = ProposalSource::kGtFallback;
    return *best;
  }
  BoundaryProposal p;
  p.points = resample_closed(gt_polygon, options.control_points);
  make_counter_clockwise(p.points);
  p.instance_id = id;
  p.source = ProposalSource::kGtFallback;
  p.score = 1.0;
  return p;
}

BdmDecision bdm_select(const BoundaryProposal& p0, const GroundTruthMaps& gt, int id, const Polygon& gt_polygon,
                       const ProposalOptions& options, const BdmThresholds& th) {
  int64_t gt_cells = 0;
  for (int32_t v : gt.instance) gt_cells += v == id;
  BdmDecision d;
  d.ratio = gt_cells > 0 ? static_cast<double>(proposal_cells(p0, gt.height, gt.width)) / gt_cells : 0.0;
  d.kept = bdm_keep(d.ratio, th);
  d.proposal = d.kept ? p0 : fallback_proposal(gt, id, gt_polygon, options);
  d.proposal.instance_id = id;
  return d;
}

}  // namespace artext

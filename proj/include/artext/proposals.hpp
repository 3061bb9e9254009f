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


// Coarse boundary proposals from stride-4 maps, and the training-time
// area-ratio check that swaps bad proposals for ones built from the
// ground truth.

#pragma once

#include <vector>

#include "artext/edt.hpp"
#include "artext/geometry.hpp"
#include "artext/seghead.hpp"

namespace artext {

enum class ProposalSource { kPredicted, kGtFallback };

struct BoundaryProposal {
  Polygon points;
  int instance_id = 0;
  ProposalSource source = ProposalSource::kPredicted;
  double score = 0.0;
};

struct ProposalOptions {
  double threshold = 0.3;
  int control_points = 20;
  /// Proposals whose traced contour encloses less than this many image px^2 are dropped.
  double min_area = 16.0;
};

/// 8-connected components of `mask`; labels are 1-based, 0 = background.
std::vector<int32_t> label_components(const MaskMap& mask, int* count);

/// Moore-neighbor trace of the outer boundary of the component holding
/// (start_y, start_x), which must be its first pixel in raster order.
/// Returns grid cells as (x, y) in tracing order.
std::vector<Point> trace_contour(const std::vector<int32_t>& labels, int height, int width, int label, int start_y,
                                 int start_x);

/// Contours of every component in `mask`, resampled to control points in
/// image coordinates. `prob` (same grid, optional) supplies the score.
std::vector<BoundaryProposal> proposals_from_mask(const MaskMap& mask, const std::vector<float>* prob,
                                                  const ProposalOptions& options);

/// The predicted-map route: binarize text probability x distance.
std::vector<BoundaryProposal> extract_proposals(const std::vector<float>& text_prob, const std::vector<float>& dist,
                                                int height, int width, const ProposalOptions& options);

struct BdmThresholds {
  double lower = 0.25;
  double upper = 1.75;
};

/// True when the proposal is kept: lower <= ratio <= upper.
bool bdm_keep(double ratio, const BdmThresholds& th = {});

/// Area of the filled proposal on the stride-4 grid, in cells.
int64_t proposal_cells(const BoundaryProposal& p, int height, int width);

/// Ground-truth instance (1-based id) with the largest overlap, 0 when none.
int match_instance(const BoundaryProposal& p, const GroundTruthMaps& gt);

/// Proposal regenerated from instance `id` of the ground truth, through
/// its normalized distance field and the same extraction as predictions.
BoundaryProposal fallback_proposal(const GroundTruthMaps& gt, int id, const Polygon& gt_polygon,
                                   const ProposalOptions& options);

struct BdmDecision {
  double ratio = 0.0;
  bool kept = true;
  BoundaryProposal proposal;
};

/// Area-ratio test of a proposal matched to ground-truth instance `id`.
BdmDecision bdm_select(const BoundaryProposal& p0, const GroundTruthMaps& gt, int id, const Polygon& gt_polygon,
                       const ProposalOptions& options, const BdmThresholds& th = {});

}  // namespace artext

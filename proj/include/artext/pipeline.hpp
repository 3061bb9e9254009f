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


#pragma once

#include <string>
#include <vector>

#include "artext/annotation.hpp"
#include "artext/config.hpp"
#include "artext/detector.hpp"
#include "artext/loss.hpp"
#include "artext/proposals.hpp"

namespace artext {

/// N x 3 x H x W tensor, (v / 255 - 0.5) / 0.25 per channel. All images must
/// share one size; gray images are replicated to three channels.
template <typename T>
Tensor<T> images_to_tensor(const std::vector<const Image*>& images);

/// Pads on the right and bottom to multiples of 32 (edge replication).
Image pad_to_multiple(const Image& image, int multiple = 32);

struct BatchStats {
  int proposals = 0;   // proposals entering the point loss
  int predicted = 0;   // extracted from the predicted maps
  int fallbacks = 0;   // replaced or added from ground truth
  int unmatched = 0;   // predicted proposals with no ground-truth overlap
};

template <typename T>
struct TrainOutput {
  LossTerms<T> terms;
  BatchStats stats;
};

/// Forward pass and loss for a batch of equally sized samples.
template <typename T>
TrainOutput<T> training_loss(const Detector<T>& model, const std::vector<AnnotatedSample>& batch,
                             const RunConfig& config);

/// Proposals of one image that enter the point loss, with their targets.
struct TrainingProposals {
  std::vector<BoundaryProposal> proposals;
  std::vector<Polygon> targets;
  BatchStats stats;
};

TrainingProposals select_training_proposals(const std::vector<BoundaryProposal>& predicted,
                                            const GroundTruthMaps& gt, const std::vector<Polygon>& polygons,
                                            const RunConfig& config);

struct Detection {
  Polygon points;
  double score = 0.0;
  bool operator==(const Detection&) const = default;
};

/// Coarse proposals and refined detections for each image of a batch.
template <typename T>
std::vector<std::vector<Detection>> detect(const Detector<T>& model, const Tensor<T>& images,
                                           const ProposalOptions& options);

/// Pads, runs the network and the configured post-filter, clamps to the image.
std::vector<Detection> infer_image(const Detector<float>& model, const Image& image, const RunConfig& config);

/// off: identity. heuristic: drops detections covering < 0.2 % of the image
/// or with mean text probability < 0.5.
std::vector<Detection> artistic_filter(const std::vector<Detection>& dets, int image_height, int image_width,
                                       FilterMode mode);

/// K x 2 x 1 x P tensor of proposal points.
template <typename T>
Tensor<T> proposals_to_tensor(const std::vector<BoundaryProposal>& proposals, int points);

}  // namespace artext

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


#include "artext/pipeline.hpp"

#include <algorithm>

namespace artext {

template <typename T>
Tensor<T> images_to_tensor(const std::vector<const Image*>& images) {
  if (images.empty()) fail(ErrorKind::kInvalidShape, "empty image batch");
  const int h = images[0]->height, w = images[0]->width;
  Tensor<T> t(Shape{static_cast<int>(images.size()), 3, h, w});
  T* p = t.ptr();
  for (size_t n = 0; n < images.size(); ++n) {
    const Image& img = *images[n];
    if (img.height != h || img.width != w) fail(ErrorKind::kInvalidShape, "images in a batch must share one size");
    for (int c = 0; c < 3; ++c) {
      const int src = img.channels == 1 ? 0 : c;
      T* plane = p + (static_cast<int64_t>(n) * 3 + c) * h * w;
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) plane[y * w + x] = static_cast<T>((img.at(y, x, src) / 255.0 - 0.5) / 0.25);
    }
  }
  return t;
}

Image pad_to_multiple(const Image& image, int multiple) {
  const int h = (image.height + multiple - 1) / multiple * multiple;
  const int w = (image.width + multiple - 1) / multiple * multiple;
  if (h == image.height && w == image.width) return image;
  Image out(h, w, image.channels);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < image.channels; ++c)
        out.at(y, x, c) = image.at(std::min(y, image.height - 1), std::min(x, image.width - 1), c);
  return out;
}

template <typename T>
Tensor<T> proposals_to_tensor(const std::vector<BoundaryProposal>& proposals, int points) {
  Tensor<T> t(Shape{static_cast<int>(proposals.size()), 2, 1, points});
  T* p = t.ptr();
  for (size_t k = 0; k < proposals.size(); ++k) {
    for (int i = 0; i < points; ++i) {
      p[(k * 2) * points + i] = static_cast<T>(proposals[k].points[static_cast<size_t>(i)].x);
      p[(k * 2 + 1) * points + i] = static_cast<T>(proposals[k].points[static_cast<size_t>(i)].y);
    }
  }
  return t;
}

TrainingProposals select_training_proposals(const std::vector<BoundaryProposal>& predicted,
                                            const GroundTruthMaps& gt, const std::vector<Polygon>& polygons,
                                            const RunConfig& config) {
  TrainingProposals out;
  const int n = config.model.control_points;
  std::vector<uint8_t> covered(polygons.size() + 1, 0);
  auto target_of = [&](int id) {
    Polygon t = resample_closed(polygons[static_cast<size_t>(id - 1)], n);
    make_counter_clockwise(t);
    return t;
  };
  for (const auto& p : predicted) {
    ++out.stats.predicted;
    const int id = match_instance(p, gt);
    if (id == 0) {
      ++out.stats.unmatched;
      continue;
    }
    covered[static_cast<size_t>(id)] = 1;
    BoundaryProposal chosen = p;
    chosen.instance_id = id;
    if (config.use_bdm) {
      BdmDecision d = bdm_select(p, gt, id, polygons[static_cast<size_t>(id - 1)], config.proposals, config.bdm);
      if (!d.kept) ++out.stats.fallbacks;
      chosen = std::move(d.proposal);
    }
    out.proposals.push_back(std::move(chosen));
    out.targets.push_back(target_of(id));
  }
  if (config.use_bdm) {
    // Instances without any proposal count as ratio 0.
    for (size_t i = 0; i < polygons.size(); ++i) {
      const int id = static_cast<int>(i + 1);
      if (gt.polygon_ignored[i] || covered[i + 1]) continue;
      if (std::find(gt.instance.begin(), gt.instance.end(), id) == gt.instance.end()) continue;
      out.proposals.push_back(fallback_proposal(gt, id, polygons[i], config.proposals));
      out.targets.push_back(target_of(id));
      ++out.stats.fallbacks;
    }
  }
  const size_t cap = static_cast<size_t>(config.max_train_proposals);
  if (out.proposals.size() > cap) {
    out.proposals.resize(cap);
    out.targets.resize(cap);
  }
  out.stats.proposals = static_cast<int>(out.proposals.size());
  return out;
}

template <typename T>
TrainOutput<T> training_loss(const Detector<T>& model, const std::vector<AnnotatedSample>& batch,
                             const RunConfig& config) {
  std::vector<const Image*> images;
  for (const auto& s : batch) images.push_back(&s.image);
  const Tensor<T> input = images_to_tensor<T>(images);
  std::vector<GroundTruthMaps> gts(batch.size());
#pragma omp parallel for schedule(dynamic)
  for (size_t b = 0; b < batch.size(); ++b) {
    gts[b] = make_gt_maps(batch[b].polygons, batch[b].ignore, batch[b].image.height, batch[b].image.width);
  }
  std::vector<const GroundTruthMaps*> gt_ptrs;
  for (const auto& g : gts) gt_ptrs.push_back(&g);

  const DenseOutput<T> dense = model.forward(input);
  TrainOutput<T> out;
  std::vector<BoundaryProposal> proposals;
  std::vector<Polygon> targets;
  std::vector<int> batch_index;
  for (size_t b = 0; b < batch.size(); ++b) {
    const auto prob = text_probability(dense.maps, static_cast<int>(b));
    const int64_t plane = dense.maps.dist.shape().plane();
    std::vector<float> dist(static_cast<size_t>(plane));
    for (int64_t i = 0; i < plane; ++i) dist[static_cast<size_t>(i)] = static_cast<float>(dense.maps.dist.ptr()[b * plane + i]);
    const auto predicted = extract_proposals(prob, dist, gts[b].height, gts[b].width, config.proposals);
    TrainingProposals sel = select_training_proposals(predicted, gts[b], batch[b].polygons, config);
    out.stats.proposals += sel.stats.proposals;
    out.stats.predicted += sel.stats.predicted;
    out.stats.fallbacks += sel.stats.fallbacks;
    out.stats.unmatched += sel.stats.unmatched;
    for (size_t k = 0; k < sel.proposals.size(); ++k) {
      proposals.push_back(std::move(sel.proposals[k]));
      targets.push_back(std::move(sel.targets[k]));
      batch_index.push_back(static_cast<int>(b));
    }
  }
  std::vector<Tensor<T>> iterates;
  if (!proposals.empty()) {
    const Tensor<T> p0 = proposals_to_tensor<T>(proposals, config.model.control_points);
    iterates = model.refiner()(dense.source, p0, batch_index);
  }
  out.terms = detection_loss(dense.maps, gt_ptrs, iterates, targets, config.loss);
  return out;
}

template <typename T>
std::vector<std::vector<Detection>> detect(const Detector<T>& model, const Tensor<T>& images,
                                           const ProposalOptions& options) {
  NoGradGuard no_grad;
  const DenseOutput<T> dense = model.forward(images);
  const int n = images.shape().n();
  const int gh = dense.maps.dist.shape().h(), gw = dense.maps.dist.shape().w();
  const int64_t plane = dense.maps.dist.shape().plane();
  std::vector<BoundaryProposal> proposals;
  std::vector<int> batch_index;
  for (int b = 0; b < n; ++b) {
    const auto prob = text_probability(dense.maps, b);
    std::vector<float> dist(static_cast<size_t>(plane));
    for (int64_t i = 0; i < plane; ++i) dist[static_cast<size_t>(i)] = static_cast<float>(dense.maps.dist.ptr()[b * plane + i]);
    for (auto& p : extract_proposals(prob, dist, gh, gw, options)) {
      proposals.push_back(std::move(p));
      batch_index.push_back(b);
    }
  }
  std::vector<std::vector<Detection>> out(static_cast<size_t>(n));
  if (proposals.empty()) return out;
  const int pts = options.control_points;
  const auto iterates = model.refiner()(dense.source, proposals_to_tensor<T>(proposals, pts), batch_index);
  const Tensor<T>& last = iterates.back();
  for (size_t k = 0; k < proposals.size(); ++k) {
    Detection d;
    d.score = proposals[k].score;
    for (int i = 0; i < pts; ++i) {
      d.points.push_back({static_cast<double>(last.ptr()[(k * 2) * pts + i]),
                          static_cast<double>(last.ptr()[(k * 2 + 1) * pts + i])});
    }
    out[static_cast<size_t>(batch_index[k])].push_back(std::move(d));
  }
  return out;
}

std::vector<Detection> artistic_filter(const std::vector<Detection>& dets, int image_height, int image_width,
                                       FilterMode mode) {
  if (mode == FilterMode::kOff) return dets;
  const double image_area = static_cast<double>(image_height) * image_width;
  std::vector<Detection> out;
  for (const auto& d : dets) {
    if (polygon_area(d.points) < 0.002 * image_area || d.score < 0.5) continue;
    out.push_back(d);
  }
  return out;
}

std::vector<Detection> infer_image(const Detector<float>& model, const Image& image, const RunConfig& config) {
  const Image padded = pad_to_multiple(image, 32);
  const Tensor<float> input = images_to_tensor<float>({&padded});
  auto dets = detect(model, input, config.proposals)[0];
  for (auto& d : dets) {
    for (Point& p : d.points) {
      p.x = std::clamp(p.x, 0.0, static_cast<double>(image.width));
      p.y = std::clamp(p.y, 0.0, static_cast<double>(image.height));
    }
  }
  return artistic_filter(dets, image.height, image.width, config.filter);
}

#define ARTEXT_INSTANTIATE(T)                                                                                     \
  template Tensor<T> images_to_tensor<T>(const std::vector<const Image*>&);                                       \
  template Tensor<T> proposals_to_tensor<T>(const std::vector<BoundaryProposal>&, int);                           \
  template TrainOutput<T> training_loss(const Detector<T>&, const std::vector<AnnotatedSample>&, const RunConfig&); \
  template std::vector<std::vector<Detection>> detect(const Detector<T>&, const Tensor<T>&, const ProposalOptions&);
ARTEXT_INSTANTIATE(float)
ARTEXT_INSTANTIATE(double)
#undef ARTEXT_INSTANTIATE

}  // namespace artext

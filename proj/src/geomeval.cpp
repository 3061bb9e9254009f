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


#include "artext/geomeval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace artext {

double polygon_iou(const Polygon& a, const Polygon& b, int supersample) {
  if (a.size() < 3 || b.size() < 3 || polygon_area(a) <= 0.0 || polygon_area(b) <= 0.0) return 0.0;
  const BoundingBox ba = bounding_box(a), bb = bounding_box(b);
  const double x0 = std::floor(std::min(ba.min_x, bb.min_x));
  const double y0 = std::floor(std::min(ba.min_y, bb.min_y));
  const double x1 = std::ceil(std::max(ba.max_x, bb.max_x));
  const double y1 = std::ceil(std::max(ba.max_y, bb.max_y));
  const double cell = 1.0 / supersample;
  const int w = static_cast<int>(std::lround((x1 - x0) * supersample));
  const int h = static_cast<int>(std::lround((y1 - y0) * supersample));
  if (w <= 0 || h <= 0) return 0.0;
  const auto ra = rasterize(a, x0, y0, cell, w, h);
  const auto rb = rasterize(b, x0, y0, cell, w, h);
  int64_t inter = 0, uni = 0;
  for (size_t i = 0; i < ra.size(); ++i) {
    inter += ra[i] & rb[i];
    uni += ra[i] | rb[i];
  }
  return uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
}

const char* to_string(MatchOutcome outcome) {
  switch (outcome) {
    case MatchOutcome::kTruePositive: return "true_positive";
    case MatchOutcome::kFalsePositive: return "false_positive";
    case MatchOutcome::kFalseNegative: return "false_negative";
    case MatchOutcome::kIgnored: return "ignored";
  }
  return "?";
}

std::vector<MatchRecord> match_iou_matrix(const std::vector<std::vector<double>>& iou,
                                          const std::vector<uint8_t>& ignore_flags, double threshold,
                                          const std::string& image) {
  const int nd = static_cast<int>(iou.size());
  const int ng = static_cast<int>(ignore_flags.size());
  auto ignored = [&](int g) { return ignore_flags[static_cast<size_t>(g)] != 0; };

  struct Pair {
    double iou;
    int det, gt;
  };
  std::vector<Pair> pairs;
  std::vector<uint8_t> det_hits_care(static_cast<size_t>(nd), 0), det_hits_ignore(static_cast<size_t>(nd), 0);
  std::vector<double> det_ignore_iou(static_cast<size_t>(nd), 0.0);
  std::vector<int> det_ignore_gt(static_cast<size_t>(nd), -1);
  for (int d = 0; d < nd; ++d) {
    for (int g = 0; g < ng; ++g) {
      const double v = iou[d][g];
      if (v < threshold) continue;
      if (ignored(g)) {
        det_hits_ignore[d] = 1;
        if (v > det_ignore_iou[d]) {
          det_ignore_iou[d] = v;
          det_ignore_gt[d] = g;
        }
      } else {
        det_hits_care[d] = 1;
        pairs.push_back({v, d, g});
      }
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
    if (x.iou != y.iou) return x.iou > y.iou;
    if (x.det != y.det) return x.det < y.det;
    return x.gt < y.gt;
  });
  std::vector<int> det_match(static_cast<size_t>(nd), -1), gt_match(static_cast<size_t>(ng), -1);
  std::vector<double> det_iou(static_cast<size_t>(nd), 0.0);
  for (const Pair& p : pairs) {
    if (det_match[p.det] >= 0 || gt_match[p.gt] >= 0) continue;
    det_match[p.det] = p.gt;
    gt_match[p.gt] = p.det;
    det_iou[p.det] = p.iou;
  }
  std::vector<MatchRecord> out;
  for (int d = 0; d < nd; ++d) {
    MatchRecord r;
    r.image = image;
    r.detection = d;
    if (det_match[d] >= 0) {
      r.gt = det_match[d];
      r.iou = det_iou[d];
      r.outcome = MatchOutcome::kTruePositive;
    } else if (det_hits_ignore[d] && !det_hits_care[d]) {
      r.gt = det_ignore_gt[d];
      r.iou = det_ignore_iou[d];
      r.outcome = MatchOutcome::kIgnored;
    } else {
      r.outcome = MatchOutcome::kFalsePositive;
    }
    out.push_back(r);
  }
  for (int g = 0; g < ng; ++g) {
    if (ignored(g) || gt_match[g] >= 0) continue;
    MatchRecord r;
    r.image = image;
    r.gt = g;
    r.outcome = MatchOutcome::kFalseNegative;
    out.push_back(r);
  }
  return out;
}

std::vector<MatchRecord> match_detections(const std::vector<Polygon>& dets, const std::vector<Polygon>& gts,
                                          const std::vector<uint8_t>& ignore_flags, double threshold,
                                          const std::string& image) {
  std::vector<std::vector<double>> iou(dets.size(), std::vector<double>(gts.size(), 0.0));
  for (size_t d = 0; d < dets.size(); ++d)
    for (size_t g = 0; g < gts.size(); ++g) iou[d][g] = polygon_iou(dets[d], gts[g]);
  std::vector<uint8_t> flags(gts.size(), 0);
  std::copy_n(ignore_flags.begin(), std::min(ignore_flags.size(), flags.size()), flags.begin());
  return match_iou_matrix(iou, flags, threshold, image);
}

double f_measure(double precision, double recall) {
  return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

PrfScores compute_prf(int64_t tp, int64_t fp, int64_t fn) {
  PrfScores s;
  s.tp = tp;
  s.fp = fp;
  s.fn = fn;
  s.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  s.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  s.f_measure = f_measure(s.precision, s.recall);
  return s;
}

PrfScores compute_prf(const std::vector<MatchRecord>& records) {
  int64_t tp = 0, fp = 0, fn = 0;
  for (const auto& r : records) {
    tp += r.outcome == MatchOutcome::kTruePositive;
    fp += r.outcome == MatchOutcome::kFalsePositive;
    fn += r.outcome == MatchOutcome::kFalseNegative;
  }
  return compute_prf(tp, fp, fn);
}

EvalReport evaluate_dataset(const std::vector<EvalImage>& images, const std::vector<double>& thresholds) {
  EvalReport report;
  const int n = static_cast<int>(images.size());
  // IoU matrices are shared across thresholds.
  std::vector<std::vector<std::vector<double>>> ious(images.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    const auto& img = images[static_cast<size_t>(i)];
    auto& m = ious[static_cast<size_t>(i)];
    m.assign(img.detections.size(), std::vector<double>(img.gts.size(), 0.0));
    for (size_t d = 0; d < img.detections.size(); ++d)
      for (size_t g = 0; g < img.gts.size(); ++g) m[d][g] = polygon_iou(img.detections[d], img.gts[g]);
  }
  for (double t : thresholds) {
    ThresholdReport tr;
    tr.threshold = t;
    for (size_t i = 0; i < images.size(); ++i) {
      std::vector<uint8_t> flags(images[i].gts.size(), 0);
      std::copy_n(images[i].ignore.begin(), std::min(flags.size(), images[i].ignore.size()), flags.begin());
      auto records = match_iou_matrix(ious[i], flags, t, images[i].name);
      tr.records.insert(tr.records.end(), records.begin(), records.end());
    }
    tr.scores = compute_prf(tr.records);
    report.thresholds.push_back(std::move(tr));
  }
  return report;
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string format_report(const EvalReport& report, const std::string& preamble) {
  std::string out = preamble;
  out += "IoU     P        R        F        TP     FP     FN\n";
  for (const auto& t : report.thresholds) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-7.2f %-8.4f %-8.4f %-8.4f %-6lld %-6lld %-6lld\n", t.threshold,
                  t.scores.precision, t.scores.recall, t.scores.f_measure, static_cast<long long>(t.scores.tp),
                  static_cast<long long>(t.scores.fp), static_cast<long long>(t.scores.fn));
    out += line;
  }
  out += "\n[metrics]\n";
  for (const auto& t : report.thresholds) {
    const std::string k = "iou_" + fixed(t.threshold, 2);
    out += k + ".precision = " + fixed(t.scores.precision, 6) + "\n";
    out += k + ".recall = " + fixed(t.scores.recall, 6) + "\n";
    out += k + ".f_measure = " + fixed(t.scores.f_measure, 6) + "\n";
    out += k + ".tp = " + std::to_string(t.scores.tp) + "\n";
    out += k + ".fp = " + std::to_string(t.scores.fp) + "\n";
    out += k + ".fn = " + std::to_string(t.scores.fn) + "\n";
  }
  out += "\n[matches]\n";
  for (const auto& t : report.thresholds) {
    for (const auto& r : t.records) {
      out += fixed(t.threshold, 2) + "\t" + r.image + "\t" + std::to_string(r.detection) + "\t" +
             std::to_string(r.gt) + "\t" + fixed(r.iou, 4) + "\t" + to_string(r.outcome) + "\n";
    }
  }
  return out;
}

double report_metric(const std::string& report_text, const std::string& key) {
  const std::string needle = "\n" + key + " = ";
  const auto pos = report_text.find(needle);
  if (pos == std::string::npos) return std::nan("");
  return std::stod(report_text.substr(pos + needle.size()));
}

const char* to_string(Complexity c) {
  switch (c) {
    case Complexity::kSimple: return "Simple";
    case Complexity::kComplex: return "Complex";
    case Complexity::kModeratelyComplex: return "Moderately Complex";
    case Complexity::kExtremelyComplex: return "Extremely Complex";
  }
  return "?";
}

Complexity complexity_of(size_t vertex_count) {
  if (vertex_count < 10) return Complexity::kSimple;
  if (vertex_count < 15) return Complexity::kComplex;
  if (vertex_count < 30) return Complexity::kModeratelyComplex;
  return Complexity::kExtremelyComplex;
}

DatasetStats dataset_stats(const std::vector<std::vector<Polygon>>& polygons,
                           const std::vector<std::vector<uint8_t>>& ignore_flags) {
  DatasetStats s;
  double area_sum = 0.0;
  for (size_t i = 0; i < polygons.size(); ++i) {
    for (size_t j = 0; j < polygons[i].size(); ++j) {
      const Polygon& p = polygons[i][j];
      ++s.polygons;
      if (i < ignore_flags.size() && j < ignore_flags[i].size() && ignore_flags[i][j]) ++s.ignored;
      ++s.complexity[static_cast<size_t>(complexity_of(p.size()))];
      const double a = polygon_area(p);
      area_sum += a;
      size_t bucket = kAreaEdges.size() - 1;
      for (size_t e = 1; e < kAreaEdges.size(); ++e) {
        if (a < kAreaEdges[e]) {
          bucket = e - 1;
          break;
        }
      }
      ++s.area[bucket];
    }
  }
  s.mean_area = s.polygons > 0 ? area_sum / static_cast<double>(s.polygons) : 0.0;
  return s;
}

}  // namespace artext

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

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "artext/geometry.hpp"

namespace artext {

/// IoU of two polygons rasterized on the pixel grid spanning their union
/// bounding box, `supersample` samples per pixel side (even-odd rule).
/// Degenerate polygons give 0.
double polygon_iou(const Polygon& a, const Polygon& b, int supersample = 2);

enum class MatchOutcome { kTruePositive, kFalsePositive, kFalseNegative, kIgnored };

struct MatchRecord {
  std::string image;
  int detection = -1;  // -1 for a false negative
  int gt = -1;         // -1 when unmatched
  double iou = 0.0;
  MatchOutcome outcome = MatchOutcome::kFalsePositive;
};

const char* to_string(MatchOutcome outcome);

/// Greedy one-to-one matching by descending IoU over pairs with
/// IoU >= threshold. Detections that reach the threshold only against
/// ignore regions are kIgnored; ignore regions never count as misses.
std::vector<MatchRecord> match_detections(const std::vector<Polygon>& dets, const std::vector<Polygon>& gts,
                                          const std::vector<uint8_t>& ignore_flags, double threshold,
                                          const std::string& image = {});

/// Same rule on a precomputed IoU matrix (dets x gts).
std::vector<MatchRecord> match_iou_matrix(const std::vector<std::vector<double>>& iou,
                                          const std::vector<uint8_t>& ignore_flags, double threshold,
                                          const std::string& image = {});

struct PrfScores {
  int64_t tp = 0;
  int64_t fp = 0;
  int64_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
};

/// F = 2PR / (P + R), 0 when P + R = 0.
double f_measure(double precision, double recall);
PrfScores compute_prf(int64_t tp, int64_t fp, int64_t fn);
PrfScores compute_prf(const std::vector<MatchRecord>& records);

struct ThresholdReport {
  double threshold = 0.0;
  PrfScores scores;
  std::vector<MatchRecord> records;
};

struct EvalReport {
  std::vector<ThresholdReport> thresholds;
};

/// Per-image inputs of a dataset evaluation.
struct EvalImage {
  std::string name;
  std::vector<Polygon> detections;
  std::vector<Polygon> gts;
  std::vector<uint8_t> ignore;
};

/// Matches every image at every threshold and pools the counts.
EvalReport evaluate_dataset(const std::vector<EvalImage>& images, const std::vector<double>& thresholds);

/// Human-readable table, then a "[metrics]" key = value section, then one
/// line per match record.
std::string format_report(const EvalReport& report, const std::string& preamble = {});

/// Value of `key` in the "[metrics]" section of a formatted report.
double report_metric(const std::string& report_text, const std::string& key);

enum class Complexity { kSimple, kComplex, kModeratelyComplex, kExtremelyComplex };

const char* to_string(Complexity c);

/// <10 Simple, [10, 15) Complex, [15, 30) Moderately Complex, >=30 Extremely Complex.
Complexity complexity_of(size_t vertex_count);

inline constexpr std::array<double, 7> kAreaEdges{0, 100, 400, 1600, 6400, 25600, 102400};

struct DatasetStats {
  std::array<int64_t, 4> complexity{};
  /// Bucket i counts areas in [kAreaEdges[i], kAreaEdges[i+1]), last bucket open.
  std::array<int64_t, kAreaEdges.size()> area{};
  int64_t polygons = 0;
  int64_t ignored = 0;
  double mean_area = 0.0;
};

DatasetStats dataset_stats(const std::vector<std::vector<Polygon>>& polygons,
                           const std::vector<std::vector<uint8_t>>& ignore_flags);

}  // namespace artext

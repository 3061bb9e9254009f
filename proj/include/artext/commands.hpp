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


// Library side of the artext subcommands. The CLI parses flags into a
// RunConfig and calls these; tests call them directly.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "artext/config.hpp"
#include "artext/geomeval.hpp"
#include "artext/synth.hpp"

namespace artext {

/// Exit status for an exception kind: 1 usage/config, 2 data, 3 numeric.
int exit_code_for(ErrorKind kind);

struct EpochLog {
  int epoch = 0;
  double lr = 0.0;
  double total = 0.0;
  double cls = 0.0;
  double dist = 0.0;
  double dir = 0.0;
  double points = 0.0;
  int proposals = 0;
  int gt_fallback = 0;
  /// F at each configured threshold when validation ran this epoch, else empty.
  std::vector<double> val_f;
};

struct TrainResult {
  std::vector<EpochLog> epochs;
  std::string final_checkpoint;
  std::string log_path;
};

struct TrainOptions {
  /// Checkpoint to continue from; its epoch counter becomes the start epoch.
  std::string resume;
  /// Stop after this many epochs of the current invocation (0 = no limit).
  int max_epochs = 0;
  /// Progress lines with timings; may be null.
  std::ostream* progress = nullptr;
};

/// Writes <out_dir>/train.log, <out_dir>/epoch_NNNN.atxd every
/// checkpoint_every epochs and <out_dir>/final.atxd. Throws kNumeric on a
/// non-finite loss, naming the batch and seed.
TrainResult cmd_train(const RunConfig& config, const TrainOptions& options = {});

struct InferResult {
  std::vector<std::string> written;
  std::vector<std::string> failed;  // "path: reason"
};

/// One "<stem>.txt" detection file per readable image in `out_dir`. An empty
/// checkpoint path runs the freshly initialized model.
InferResult cmd_infer(const RunConfig& config, const std::string& checkpoint,
                      const std::vector<std::string>& images, const std::string& out_dir,
                      std::ostream* warnings = nullptr);

/// Image paths of a manifest, in order.
std::vector<std::string> manifest_images(const std::string& manifest);

struct EvalResult {
  EvalReport report;
  std::string text;
  int missing = 0;
};

/// Detections for manifest image "a/b/NAME.ext" are read from
/// "<det_dir>/NAME.txt"; a missing file counts as no detections.
EvalResult cmd_eval(const RunConfig& config, const std::string& gt_manifest, const std::string& det_dir,
                    std::ostream* warnings = nullptr);

struct StatsResult {
  DatasetStats stats;
  std::string text;
};

StatsResult stats_report(const std::vector<std::vector<Polygon>>& polygons,
                         const std::vector<std::vector<uint8_t>>& ignore);
StatsResult cmd_stats(const std::string& manifest);

struct GradcheckTable {
  std::string text;
  bool all_passed = false;
};

GradcheckTable cmd_gradcheck(uint64_t seed, double tolerance = 1e-4);

}  // namespace artext

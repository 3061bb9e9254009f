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


// Run configuration: flat "key = value" text, overridable from the command
// line. The effective configuration is echoed into every log and report.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "artext/loss.hpp"
#include "artext/model_config.hpp"
#include "artext/proposals.hpp"

namespace artext {

enum class FilterMode { kOff, kHeuristic };

FilterMode parse_filter_mode(const std::string& text);
const char* to_string(FilterMode mode);

struct RunConfig {
  std::string profile = "desk";
  ModelConfig model;
  bool use_bdm = true;
  FilterMode filter = FilterMode::kOff;

  double lr = 1e-4;
  int batch = 4;
  int epochs = 60;
  uint64_t seed = 0;
  int train_size = 128;
  bool augment = true;
  int val_every = 10;
  int checkpoint_every = 10;
  int max_train_proposals = 8;

  LossWeights loss;
  BdmThresholds bdm;
  ProposalOptions proposals;
  std::vector<double> iou_thresholds{0.5, 0.75};

  std::string train_manifest;
  std::string val_manifest;
  std::string out_dir = "run";

  /// Sets one key; throws kConfig on an unknown key or malformed value.
  void set(const std::string& key, const std::string& value);
  std::map<std::string, std::string> to_map() const;
  /// "key = value" lines in key order.
  std::string dump() const;
  /// Throws kConfig when a value is out of range.
  void validate() const;

  /// FNV-1a over the sorted key/value pairs.
  uint64_t digest() const;
  /// Digest of the keys that shape the parameter set only.
  uint64_t model_digest() const;
};

/// Defaults of a named profile ("desk" or "paper").
RunConfig profile_defaults(const std::string& profile);

/// Applies a config file onto `base`. Blank lines and '#' comments are skipped.
void apply_config_text(RunConfig& config, const std::string& text, const std::string& name = "<memory>");
void apply_config_file(RunConfig& config, const std::string& path);

/// lr0 * 0.9^floor(epoch / 50).
double lr_schedule(int epoch, double lr0);

std::vector<double> parse_double_list(const std::string& text);

}  // namespace artext

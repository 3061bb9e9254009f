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

namespace artext {

/// Architecture switches and widths. Defaults are the full-size model.
struct ModelConfig {
  std::array<int, 4> widths{64, 128, 256, 512};

  bool use_rcca = true;
  int cycles = 2;

  bool use_rfpn = true;
  bool use_rfrm = true;
  int rfrm_level = 2;
  int fpn_width = 64;
  int rdb_growth = 16;
  int rdb_layers = 4;

  std::array<int, 2> head_dilations{2, 4};

  int refine_iterations = 3;
  int control_points = 20;
  int refine_width = 64;
  int refine_kernel = 5;
  /// Append centroid-relative point coordinates to node features.
  bool refine_coords = true;

  /// Throws kConfig when a switch is out of range.
  void validate() const;
};

}  // namespace artext

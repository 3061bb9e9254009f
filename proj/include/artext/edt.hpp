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

#include <cstdint>
#include <vector>

namespace artext {

enum class MaskSource { kPredicted, kGroundTruth };

/// Binary h x w grid (1 = text) with a cached nonzero count.
class MaskMap {
 public:
  MaskMap() = default;
  MaskMap(int height, int width, MaskSource source = MaskSource::kPredicted);
  MaskMap(int height, int width, std::vector<uint8_t> values,
          MaskSource source = MaskSource::kPredicted);

  int height() const { return height_; }
  int width() const { return width_; }
  MaskSource source() const { return source_; }
  int64_t count() const { return count_; }

  uint8_t operator()(int y, int x) const { return values_[static_cast<size_t>(y) * width_ + x]; }
  void set(int y, int x, bool on);
  const std::vector<uint8_t>& values() const { return values_; }

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<uint8_t> values_;
  int64_t count_ = 0;
  MaskSource source_ = MaskSource::kPredicted;
};

/// Squared distances and nearest nonzero pixel (flat index) for every cell.
struct EdtResult {
  int height = 0;
  int width = 0;
  std::vector<int64_t> squared;
  std::vector<int32_t> nearest;
};

/// Exact squared Euclidean distance transform to the nearest nonzero pixel.
/// Throws kEmptyMask when the mask has no nonzero pixel.
EdtResult edt_squared(const MaskMap& mask);

/// sqrt of `edt_squared`, row-major.
std::vector<double> edt(const MaskMap& mask);

}  // namespace artext

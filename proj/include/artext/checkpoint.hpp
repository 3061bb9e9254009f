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


// Binary checkpoint layout, all integers and values little-endian:
//
//   "ATXD" | u32 version | u32 tensor count
//   per tensor: u32 name length | name | u8 dtype (0 = f32) | u8 ndim | u32 dims...
//               | raw values
//   u64 config digest | u32 epoch | u8 has optimizer
//   optimizer (same tensor order): i64 step | first moment | second moment

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "artext/optim.hpp"

namespace artext {

inline constexpr uint32_t kCheckpointVersion = 1;

struct CheckpointInfo {
  uint64_t config_digest = 0;
  uint32_t epoch = 0;
  bool has_optimizer = false;
};

std::vector<uint8_t> serialize_checkpoint(const ParameterStore<float>& store, const CheckpointInfo& info,
                                          bool with_optimizer);
/// Loads into an existing store. Throws kFormat on a bad magic or version,
/// truncation, an unknown or missing parameter, or a shape mismatch.
CheckpointInfo deserialize_checkpoint(const std::vector<uint8_t>& bytes, ParameterStore<float>& store,
                                      bool load_optimizer = true, const std::string& name = "<memory>");

void save_checkpoint(const std::string& path, const ParameterStore<float>& store, const CheckpointInfo& info,
                     bool with_optimizer = true);
CheckpointInfo load_checkpoint(const std::string& path, ParameterStore<float>& store, bool load_optimizer = true);

}  // namespace artext

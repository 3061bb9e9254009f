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


// Synthetic artistic-text scenes: textured backgrounds with 1-4 thick,
// rotated cubic-Bezier ribbons. The ground-truth polygon is the ribbon
// outline itself, so labels are exact.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "artext/annotation.hpp"

namespace artext {

enum class Difficulty { kEasy, kMixed, kHard };

Difficulty parse_difficulty(const std::string& text);
const char* to_string(Difficulty d);

struct SynthOptions {
  uint64_t seed = 0;
  int count = 10;
  int size = 128;
  Difficulty difficulty = Difficulty::kMixed;
};

/// Sample `index` of the stream; depends only on (seed, index, size, difficulty).
AnnotatedSample synth_sample(uint64_t seed, int index, int size, Difficulty difficulty);

struct SynthResult {
  std::vector<ManifestEntry> entries;  // relative to the output directory
  uint64_t digest = 0;                 // FNV-1a over manifest and every file
};

/// Writes images/NNNNN.ppm, gt/NNNNN.txt and manifest.txt under `out_dir`.
/// Throws kConfig unless size is a positive multiple of 32.
SynthResult synth_generate(const SynthOptions& options, const std::string& out_dir);

std::string digest_hex(uint64_t digest);

}  // namespace artext

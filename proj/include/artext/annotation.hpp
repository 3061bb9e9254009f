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


// Polygon-per-line annotations: "x1,y1,...,xn,yn[,###]". Detection files use
// the same layout with an optional ";score" suffix.

#pragma once

#include <string>
#include <vector>

#include "artext/geometry.hpp"
#include "artext/image_io.hpp"

namespace artext {

struct Annotation {
  std::vector<Polygon> polygons;
  std::vector<uint8_t> ignore;
  std::vector<double> scores;  // detections only; empty otherwise
};

/// Throws kParse with the 1-based line number on an odd coordinate count,
/// fewer than three vertices or a malformed number.
Annotation parse_annotation_text(const std::string& text, const std::string& name = "<memory>");
Annotation parse_annotation(const std::string& path);

std::string format_annotation(const Annotation& a);
void write_annotation(const std::string& path, const Annotation& a);

struct AnnotatedSample {
  Image image;
  std::vector<Polygon> polygons;
  std::vector<uint8_t> ignore;
  std::string source;
};

struct ManifestEntry {
  std::string image;
  std::string annotation;
};

/// Tab-separated "image<TAB>annotation" lines; relative paths resolve
/// against the manifest's directory.
std::vector<ManifestEntry> read_manifest(const std::string& path);
void write_manifest(const std::string& path, const std::vector<ManifestEntry>& entries);

/// Loads the image and annotation, clamping vertices to the image.
AnnotatedSample load_sample(const ManifestEntry& entry);

}  // namespace artext

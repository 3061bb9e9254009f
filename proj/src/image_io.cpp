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


#include "artext/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>

#include "artext/error.hpp"

namespace artext {

namespace {

// Reads one header token, skipping whitespace and '#' comments.
std::string header_token(const std::vector<uint8_t>& bytes, size_t& pos, const std::string& name) {
  while (pos < bytes.size()) {
    if (bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (std::isspace(bytes[pos])) {
      ++pos;
    } else {
      break;
    }
  }
  std::string token;
  while (pos < bytes.size() && !std::isspace(bytes[pos]) && bytes[pos] != '#') token += static_cast<char>(bytes[pos++]);
  if (token.empty()) fail(ErrorKind::kFormat, name + ": truncated image header");
  return token;
}

int header_int(const std::vector<uint8_t>& bytes, size_t& pos, const std::string& name, const char* field) {
  const std::string token = header_token(bytes, pos, name);
  if (!std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; }) || token.size() > 9) {
    fail(ErrorKind::kFormat, name + ": invalid " + field + " '" + token + "' in image header");
  }
  return std::stoi(token);
}

}  // namespace

Image decode_image(const std::vector<uint8_t>& bytes, const std::string& name) {
  size_t pos = 0;
  const std::string magic = header_token(bytes, pos, name);
  int channels = 0;
  if (magic == "P6") {
    channels = 3;
  } else if (magic == "P5") {
    channels = 1;
  } else {
    fail(ErrorKind::kFormat, name + ": unsupported image format '" + magic + "' (expected binary P6 or P5)");
  }
  const int width = header_int(bytes, pos, name, "width");
  const int height = header_int(bytes, pos, name, "height");
  const int maxval = header_int(bytes, pos, name, "maxval");
  if (width <= 0 || height <= 0) fail(ErrorKind::kFormat, name + ": image extents must be positive");
  if (maxval != 255) fail(ErrorKind::kFormat, name + ": maxval " + std::to_string(maxval) + " unsupported (expected 255)");
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) fail(ErrorKind::kFormat, name + ": truncated image header");
  ++pos;
  Image img(height, width, channels);
  const size_t expected = img.pixels.size();
  const size_t actual = bytes.size() - pos;
  if (actual < expected) {
    fail(ErrorKind::kFormat, name + ": truncated pixel data, expected " + std::to_string(expected) + " bytes, got " +
                                 std::to_string(actual));
  }
  std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(pos), expected, img.pixels.begin());
  return img;
}

Image read_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot open image " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_image(bytes, path);
}

std::vector<uint8_t> encode_image(const Image& image) {
  if (image.channels != 1 && image.channels != 3) {
    fail(ErrorKind::kFormat, "only 1- or 3-channel images can be written");
  }
  const std::string header = std::string(image.channels == 3 ? "P6" : "P5") + "\n" + std::to_string(image.width) +
                             " " + std::to_string(image.height) + "\n255\n";
  std::vector<uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), image.pixels.begin(), image.pixels.end());
  return out;
}

void write_image(const std::string& path, const Image& image) {
  const auto bytes = encode_image(image);
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::kIo, "cannot write image " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::kIo, "write failed for " + path);
}

Image resize_image(const Image& image, int height, int width) {
  if (image.height == height && image.width == width) return image;
  Image out(height, width, image.channels);
  const double sy = static_cast<double>(image.height) / height;
  const double sx = static_cast<double>(image.width) / width;
  for (int y = 0; y < height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, image.height - 1.0);
    const int y0 = static_cast<int>(fy), y1 = std::min(y0 + 1, image.height - 1);
    const double ty = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, image.width - 1.0);
      const int x0 = static_cast<int>(fx), x1 = std::min(x0 + 1, image.width - 1);
      const double tx = fx - x0;
      for (int c = 0; c < image.channels; ++c) {
        const double v = (1 - ty) * ((1 - tx) * image.at(y0, x0, c) + tx * image.at(y0, x1, c)) +
                         ty * ((1 - tx) * image.at(y1, x0, c) + tx * image.at(y1, x1, c));
        out.at(y, x, c) = static_cast<uint8_t>(std::clamp(std::lround(v), 0L, 255L));
      }
    }
  }
  return out;
}

}  // namespace artext

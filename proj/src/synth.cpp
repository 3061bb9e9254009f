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


#include "artext/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "artext/error.hpp"
#include "artext/rng.hpp"

namespace artext {

Difficulty parse_difficulty(const std::string& text) {
  if (text == "easy") return Difficulty::kEasy;
  if (text == "mixed") return Difficulty::kMixed;
  if (text == "hard") return Difficulty::kHard;
  fail(ErrorKind::kConfig, "unknown difficulty '" + text + "' (expected easy, mixed or hard)");
}

const char* to_string(Difficulty d) {
  switch (d) {
    case Difficulty::kEasy: return "easy";
    case Difficulty::kMixed: return "mixed";
    case Difficulty::kHard: return "hard";
  }
  return "?";
}

namespace {

using Color = std::array<double, 3>;

double luminance(const Color& c) { return 0.299 * c[0] + 0.587 * c[1] + 0.114 * c[2]; }

Color random_color(Rng& rng) { return {rng.uniform(0, 255), rng.uniform(0, 255), rng.uniform(0, 255)}; }

struct Ribbon {
  Polygon outline;
  double contrast;
};

// Outline of a cubic Bezier centerline thickened by a slowly varying width.
Polygon ribbon_outline(Rng& rng, int size, int half_count, double half_width) {
  const double length = rng.uniform(0.35, 0.8) * size;
  const double angle = rng.uniform(0.0, M_PI);
  const Point u{std::cos(angle), std::sin(angle)};
  const Point n{-u.y, u.x};
  const Point c{rng.uniform(0.2, 0.8) * size, rng.uniform(0.2, 0.8) * size};
  const double b1 = rng.uniform(-0.3, 0.3) * length, b2 = rng.uniform(-0.3, 0.3) * length;
  std::array<Point, 4> cp{
      Point{c.x - 0.5 * length * u.x, c.y - 0.5 * length * u.y},
      Point{c.x - length / 6 * u.x + b1 * n.x, c.y - length / 6 * u.y + b1 * n.y},
      Point{c.x + length / 6 * u.x + b2 * n.x, c.y + length / 6 * u.y + b2 * n.y},
      Point{c.x + 0.5 * length * u.x, c.y + 0.5 * length * u.y},
  };
  const double freq = rng.uniform(0.5, 2.0), phase = rng.uniform(0.0, 2 * M_PI);
  Polygon upper, lower;
  for (int i = 0; i < half_count; ++i) {
    const double t = static_cast<double>(i) / (half_count - 1);
    const double s = 1 - t;
    const double bx = s * s * s * cp[0].x + 3 * s * s * t * cp[1].x + 3 * s * t * t * cp[2].x + t * t * t * cp[3].x;
    const double by = s * s * s * cp[0].y + 3 * s * s * t * cp[1].y + 3 * s * t * t * cp[2].y + t * t * t * cp[3].y;
    const double dx = 3 * s * s * (cp[1].x - cp[0].x) + 6 * s * t * (cp[2].x - cp[1].x) + 3 * t * t * (cp[3].x - cp[2].x);
    const double dy = 3 * s * s * (cp[1].y - cp[0].y) + 6 * s * t * (cp[2].y - cp[1].y) + 3 * t * t * (cp[3].y - cp[2].y);
    const double norm = std::max(std::hypot(dx, dy), 1e-9);
    const double nx = -dy / norm, ny = dx / norm;
    const double r = half_width * (1.0 + 0.25 * std::sin(2 * M_PI * freq * t + phase));
    upper.push_back({bx + r * nx, by + r * ny});
    lower.push_back({bx - r * nx, by - r * ny});
  }
  Polygon outline = upper;
  outline.insert(outline.end(), lower.rbegin(), lower.rend());
  return outline;
}

bool inside_canvas(const Polygon& p, int size) {
  return std::all_of(p.begin(), p.end(), [&](const Point& q) {
    return q.x >= 1.0 && q.x <= size - 1.0 && q.y >= 1.0 && q.y <= size - 1.0;
  });
}

}  // namespace

AnnotatedSample synth_sample(uint64_t seed, int index, int size, Difficulty difficulty) {
  Rng rng(derive_seed({seed, static_cast<uint64_t>(index), static_cast<uint64_t>(size),
                       static_cast<uint64_t>(difficulty)}));
  AnnotatedSample s;
  s.image = Image(size, size, 3);

  // Background: linear gradient plus soft blobs.
  const Color a = random_color(rng), b = random_color(rng);
  const double ga = rng.uniform(0.0, 2 * M_PI);
  const double gx = std::cos(ga), gy = std::sin(ga);
  struct Blob {
    double x, y, radius, weight;
    Color color;
  };
  std::vector<Blob> blobs(static_cast<size_t>(rng.uniform_int(3, 6)));
  for (auto& blob : blobs) {
    blob = {rng.uniform(0, size), rng.uniform(0, size), rng.uniform(0.08, 0.25) * size, rng.uniform(0.2, 0.5),
            random_color(rng)};
  }
  std::vector<Color> bg(static_cast<size_t>(size) * size);
  double bg_lum = 0.0;
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double t = std::clamp(0.5 + ((x - size / 2.0) * gx + (y - size / 2.0) * gy) / size, 0.0, 1.0);
      Color c{};
      for (int k = 0; k < 3; ++k) c[k] = (1 - t) * a[k] + t * b[k];
      for (const auto& blob : blobs) {
        const double d2 = (x - blob.x) * (x - blob.x) + (y - blob.y) * (y - blob.y);
        const double wgt = blob.weight * std::exp(-d2 / (2 * blob.radius * blob.radius));
        for (int k = 0; k < 3; ++k) c[k] = (1 - wgt) * c[k] + wgt * blob.color[k];
      }
      bg[static_cast<size_t>(y) * size + x] = c;
      bg_lum += luminance(c);
    }
  }
  bg_lum /= static_cast<double>(size) * size;

  // Ribbons, placed without touching each other.
  std::vector<uint8_t> occupied(static_cast<size_t>(size) * size, 0);
  const int words = rng.uniform_int(1, 4);
  std::vector<Ribbon> ribbons;
  for (int w = 0; w < words; ++w) {
    const bool hard = difficulty == Difficulty::kHard || (difficulty == Difficulty::kMixed && rng.bernoulli(0.5));
    const int min_half = difficulty == Difficulty::kMixed ? 4 : 5;
    for (int attempt = 0; attempt < 40; ++attempt) {
      const int half_count = rng.uniform_int(min_half, 20);
      const double half_width = (hard ? rng.uniform(0.04, 0.06) : rng.uniform(0.05, 0.08)) * size;
      Polygon outline = ribbon_outline(rng, size, half_count, half_width);
      if (!inside_canvas(outline, size) || !is_simple(outline)) continue;
      make_counter_clockwise(outline);
      const auto raster = rasterize(outline, 0.0, 0.0, 1.0, size, size);
      // Keep a 3 px gap to earlier ribbons.
      bool clash = false;
      for (int y = 0; y < size && !clash; ++y) {
        for (int x = 0; x < size && !clash; ++x) {
          if (!raster[static_cast<size_t>(y) * size + x]) continue;
          for (int dy = -3; dy <= 3 && !clash; ++dy)
            for (int dx = -3; dx <= 3 && !clash; ++dx) {
              const int yy = y + dy, xx = x + dx;
              if (yy >= 0 && yy < size && xx >= 0 && xx < size && occupied[static_cast<size_t>(yy) * size + xx]) clash = true;
            }
        }
      }
      if (clash) continue;
      for (size_t i = 0; i < raster.size(); ++i) occupied[i] |= raster[i];
      ribbons.push_back({std::move(outline), hard ? rng.uniform(45, 90) : rng.uniform(100, 160)});
      break;
    }
  }

  // Foreground: a hue at the sampled luminance offset from the background, with stripes.
  std::vector<Color> canvas = bg;
  for (const auto& r : ribbons) {
    Color fg = random_color(rng);
    const double target = bg_lum > 127.5 ? std::max(0.0, bg_lum - r.contrast) : std::min(255.0, bg_lum + r.contrast);
    const double shift = target - luminance(fg);
    for (auto& v : fg) v = std::clamp(v + shift, 0.0, 255.0);
    const double stripe_angle = rng.uniform(0, M_PI), stripe_period = rng.uniform(3.0, 9.0);
    const auto raster = rasterize(r.outline, 0.0, 0.0, 1.0, size, size);
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) {
        if (!raster[static_cast<size_t>(y) * size + x]) continue;
        const double phase = (x * std::cos(stripe_angle) + y * std::sin(stripe_angle)) / stripe_period;
        const double mod = 12.0 * std::sin(2 * M_PI * phase);
        Color& c = canvas[static_cast<size_t>(y) * size + x];
        for (int k = 0; k < 3; ++k) c[k] = fg[k] + mod;
      }
    }
    s.polygons.push_back(r.outline);
    s.ignore.push_back(0);
  }
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const Color& c = canvas[static_cast<size_t>(y) * size + x];
      for (int k = 0; k < 3; ++k) {
        const double noisy = c[k] + rng.uniform(-6.0, 6.0);
        s.image.at(y, x, k) = static_cast<uint8_t>(std::clamp(std::lround(noisy), 0L, 255L));
      }
    }
  }
  return s;
}

std::string digest_hex(uint64_t digest) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(digest));
  return buf;
}

SynthResult synth_generate(const SynthOptions& options, const std::string& out_dir) {
  if (options.size <= 0 || options.size % 32 != 0) {
    fail(ErrorKind::kConfig, "synthetic image size must be a positive multiple of 32, got " + std::to_string(options.size));
  }
  if (options.count < 0) fail(ErrorKind::kConfig, "synthetic image count must be non-negative");
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(out_dir) / "images");
  fs::create_directories(fs::path(out_dir) / "gt");
  SynthResult result;
  result.entries.resize(static_cast<size_t>(options.count));
  std::vector<std::vector<uint8_t>> image_bytes(result.entries.size());
  std::vector<std::string> gt_text(result.entries.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < options.count; ++i) {
    AnnotatedSample s = synth_sample(options.seed, i, options.size, options.difficulty);
    char name[32];
    std::snprintf(name, sizeof(name), "%05d", i);
    ManifestEntry e{std::string("images/") + name + ".ppm", std::string("gt/") + name + ".txt"};
    image_bytes[static_cast<size_t>(i)] = encode_image(s.image);
    gt_text[static_cast<size_t>(i)] = format_annotation(Annotation{s.polygons, s.ignore, {}});
    result.entries[static_cast<size_t>(i)] = e;
  }
  std::string manifest;
  uint64_t h = fnv1a("");
  for (size_t i = 0; i < result.entries.size(); ++i) {
    const auto& e = result.entries[i];
    std::ofstream img((fs::path(out_dir) / e.image).string(), std::ios::binary);
    img.write(reinterpret_cast<const char*>(image_bytes[i].data()), static_cast<std::streamsize>(image_bytes[i].size()));
    std::ofstream gt((fs::path(out_dir) / e.annotation).string());
    gt << gt_text[i];
    if (!img || !gt) fail(ErrorKind::kIo, "failed writing sample " + e.image + " under " + out_dir);
    manifest += e.image + "\t" + e.annotation + "\n";
    h = fnv1a(std::string_view(reinterpret_cast<const char*>(image_bytes[i].data()), image_bytes[i].size()), h);
    h = fnv1a(gt_text[i], h);
  }
  result.digest = fnv1a(manifest, h);
  write_manifest((fs::path(out_dir) / "manifest.txt").string(), result.entries);
  return result;
}

}  // namespace artext

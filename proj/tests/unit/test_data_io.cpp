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


#include <filesystem>
#include <fstream>

#include "artext/annotation.hpp"
#include "artext/augment.hpp"
#include "artext/checkpoint.hpp"
#include "artext/detector.hpp"
#include "artext/error.hpp"
#include "artext/image_io.hpp"
#include "artext/synth.hpp"
#include "doctest.h"

using namespace artext;
namespace fs = std::filesystem;

namespace {

std::string scratch(const std::string& name) {
  const fs::path p = fs::path(ARTEXT_TEST_DATA) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::kUsage;
}

}  // namespace

TEST_CASE("annotation lines") {
  const Annotation a = parse_annotation_text("0,0,10,0,10,10,0,10\n\n1.5,2,3,4,5,6.25,###\n");
  REQUIRE(a.polygons.size() == 2);
  CHECK(a.polygons[0].size() == 4);
  CHECK(a.ignore == std::vector<uint8_t>{0, 1});
  CHECK(a.polygons[1][2] == Point{5, 6.25});
  try {
    parse_annotation_text("0,0,1,0,1,1\n1,2,3\n");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kParse);
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
  CHECK(kind_of([] { parse_annotation_text("0,0,1,1"); }) == ErrorKind::kParse);
  CHECK(kind_of([] { parse_annotation_text("0,0,x,1,2,2"); }) == ErrorKind::kParse);
}

TEST_CASE("annotation and detection files round-trip") {
  Annotation a;
  a.polygons = {{{0.5, 1}, {10, 1}, {10, 7.125}}, {{3, 3}, {4, 3}, {4, 4}}};
  a.ignore = {0, 0};
  a.scores = {0.875, 0.25};
  const Annotation b = parse_annotation_text(format_annotation(a));
  CHECK(b.polygons == a.polygons);
  CHECK(b.scores == a.scores);
}

TEST_CASE("ppm and pgm are bit exact") {
  Rng rng(31);
  Image rgb(16, 16, 3), gray(5, 7, 1);
  for (auto* im : {&rgb, &gray})
    for (auto& v : im->pixels) v = static_cast<uint8_t>(rng.uniform_int(0, 255));
  CHECK(decode_image(encode_image(rgb)) == rgb);
  CHECK(decode_image(encode_image(gray)) == gray);
  const std::string dir = scratch("images");
  write_image(dir + "/x.ppm", rgb);
  CHECK(read_image(dir + "/x.ppm") == rgb);

  std::string hdr = "P6\n2 2\n255\n";
  std::vector<uint8_t> bytes(hdr.begin(), hdr.end());
  for (int i = 0; i < 12; ++i) bytes.push_back(static_cast<uint8_t>(i * 20));
  const Image small = decode_image(bytes);
  CHECK(small.height == 2);
  CHECK(small.at(1, 1, 2) == 220);
  bytes.resize(bytes.size() - 5);
  try {
    decode_image(bytes);
    FAIL("expected a format error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kFormat);
    CHECK(std::string(e.what()).find("12") != std::string::npos);
    CHECK(std::string(e.what()).find("7") != std::string::npos);
  }
  const std::string png = "\x89PNG....";
  CHECK(kind_of([&] { decode_image(std::vector<uint8_t>(png.begin(), png.end())); }) == ErrorKind::kFormat);
  CHECK(kind_of([] { read_image("/nonexistent/file.ppm"); }) == ErrorKind::kIo);
}

TEST_CASE("synthetic data is deterministic and valid") {
  const std::string d1 = scratch("synth1"), d2 = scratch("synth2");
  SynthOptions o;
  o.seed = 7;
  o.count = 5;
  o.size = 64;
  const auto r1 = synth_generate(o, d1);
  const auto r2 = synth_generate(o, d2);
  CHECK(r1.digest == r2.digest);
  o.seed = 8;
  CHECK(synth_generate(o, scratch("synth3")).digest != r1.digest);
  o.size = 60;
  CHECK(kind_of([&] { synth_generate(o, scratch("synth4")); }) == ErrorKind::kConfig);

  for (int i = 0; i < 10; ++i) {
    const AnnotatedSample s = synth_sample(3, i, 128, Difficulty::kEasy);
    CHECK(s.image.height == 128);
    REQUIRE(!s.polygons.empty());
    CHECK(s.polygons.size() <= 4);
    for (const Polygon& p : s.polygons) {
      CHECK(p.size() >= 3);
      CHECK(signed_area(p) > 0.0);
      for (const Point& v : p) CHECK((v.x >= 0 && v.x <= 128 && v.y >= 0 && v.y <= 128));
    }
    const GroundTruthMaps gt = make_gt_maps(s.polygons, s.ignore, 128, 128);
    for (size_t k = 0; k < gt.size(); ++k) {
      CHECK(gt.dist[k] >= 0.0f);
      CHECK(gt.dist[k] <= 1.0f);
      if (gt.cls[k]) CHECK(std::hypot(gt.dir_x[k], gt.dir_y[k]) == doctest::Approx(1.0).epsilon(1e-3));
    }
  }
  const auto entries = read_manifest(d1 + "/manifest.txt");
  REQUIRE(entries.size() == 5);
  const AnnotatedSample loaded = load_sample(entries[2]);
  CHECK(loaded.image == synth_sample(7, 2, 64, Difficulty::kMixed).image);
}

TEST_CASE("augmentation geometry") {
  AnnotatedSample s = synth_sample(1, 0, 128, Difficulty::kEasy);
  const AnnotatedSample id = apply_augment(s, identity_draw(s), 64);
  REQUIRE(id.polygons.size() == s.polygons.size());
  for (size_t k = 0; k < s.polygons.size(); ++k)
    for (size_t v = 0; v < s.polygons[k].size(); ++v) {
      CHECK(id.polygons[k][v].x == doctest::Approx(s.polygons[k][v].x / 2));
      CHECK(id.polygons[k][v].y == doctest::Approx(s.polygons[k][v].y / 2));
    }

  AugmentDraw flip = identity_draw(s);
  flip.flip = true;
  const AnnotatedSample f = apply_augment(s, flip, 128);
  for (size_t k = 0; k < s.polygons.size(); ++k) {
    CHECK(signed_area(f.polygons[k]) > 0.0);
    CHECK(polygon_area(f.polygons[k]) == doctest::Approx(polygon_area(s.polygons[k])));
    CHECK(f.polygons[k][0].x == doctest::Approx(128 - s.polygons[k][0].x));
    // Reversed traversal after the mirror: vertex v maps to n - v.
    const size_t n = s.polygons[k].size();
    CHECK(f.polygons[k][1].x == doctest::Approx(128 - s.polygons[k][n - 1].x));
  }

  const Polygon p{{10, 10}, {50, 12}, {40, 60}, {5, 30}};
  const Polygon r = rotate_polygon(p, 23.0, 64, 64);
  CHECK(std::abs(polygon_area(r) - polygon_area(p)) / polygon_area(p) < 1e-6);

  Rng rng(2);
  AugmentOptions opts;
  for (int t = 0; t < 20; ++t) {
    const AnnotatedSample a = augment(synth_sample(4, t, 128, Difficulty::kMixed), rng, opts);
    CHECK(a.image.height == 128);
    for (size_t k = 0; k < a.polygons.size(); ++k) {
      CHECK(a.polygons[k].size() >= 3);
      for (const Point& v : a.polygons[k]) CHECK((v.x >= 0 && v.x <= 128 && v.y >= 0 && v.y <= 128));
      if (!a.ignore[k]) {
        CHECK(polygon_area(a.polygons[k]) > 0.0);
        CHECK(is_simple(a.polygons[k]));
      }
    }
  }
}

TEST_CASE("checkpoint round trip and rejection paths") {
  ModelConfig c;
  c.widths = {8, 8, 16, 16};
  c.fpn_width = 8;
  c.refine_width = 8;
  c.rdb_growth = 4;
  Detector<float> a(c, 1);
  a.store().parameters()[0].first_moment.assign(a.store().parameters()[0].value.data().size(), 0.5f);
  const auto bytes = serialize_checkpoint(a.store(), CheckpointInfo{42, 3, true}, true);
  CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "ATXD");
  Detector<float> b(c, 2);
  const CheckpointInfo info = deserialize_checkpoint(bytes, b.store());
  CHECK(info.config_digest == 42);
  CHECK(info.epoch == 3);
  CHECK(info.has_optimizer);
  for (size_t i = 0; i < a.store().parameters().size(); ++i) {
    const auto& pa = a.store().parameters()[i].value;
    const auto& pb = b.store().parameters()[i].value;
    CHECK(std::equal(pa.data().begin(), pa.data().end(), pb.data().begin()));
  }
  CHECK(serialize_checkpoint(b.store(), info, true) == bytes);

  auto bad = bytes;
  bad[0] = 'X';
  CHECK(kind_of([&] { deserialize_checkpoint(bad, b.store()); }) == ErrorKind::kFormat);
  auto cut = bytes;
  cut.resize(cut.size() / 2);
  CHECK(kind_of([&] { deserialize_checkpoint(cut, b.store()); }) == ErrorKind::kFormat);

  ModelConfig wider = c;
  wider.fpn_width = 16;
  Detector<float> w(wider, 1);
  try {
    deserialize_checkpoint(bytes, w.store());
    FAIL("expected a shape mismatch");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("rfpn.") != std::string::npos);
  }
  ModelConfig fewer = c;
  fewer.use_rcca = false;
  Detector<float> f(fewer, 1);
  CHECK(kind_of([&] { deserialize_checkpoint(bytes, f.store()); }) == ErrorKind::kFormat);
}

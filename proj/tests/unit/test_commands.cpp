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
#include <sstream>

#include "artext/checkpoint.hpp"
#include "artext/commands.hpp"
#include "artext/pipeline.hpp"
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

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig tiny_run(const std::string& manifest, const std::string& out) {
  RunConfig c = profile_defaults("desk");
  c.model.widths = {8, 8, 16, 16};
  c.model.fpn_width = 8;
  c.model.refine_width = 8;
  c.model.rdb_growth = 4;
  c.model.rdb_layers = 2;
  c.train_size = 64;
  c.epochs = 2;
  c.checkpoint_every = 1;
  c.train_manifest = manifest;
  c.out_dir = out;
  return c;
}

std::string tiny_dataset() {
  static std::string dir;
  if (dir.empty()) {
    dir = scratch("cmd_data");
    SynthOptions o;
    o.count = 8;
    o.size = 64;
    synth_generate(o, dir);
  }
  return dir + "/manifest.txt";
}

}  // namespace

TEST_CASE("learning-rate schedule") {
  CHECK(lr_schedule(0, 1e-4) == 1e-4);
  CHECK(lr_schedule(49, 1e-4) == 1e-4);
  CHECK(lr_schedule(50, 1e-4) == doctest::Approx(9e-5).epsilon(1e-12));
  CHECK(lr_schedule(120, 1e-4) == doctest::Approx(8.1e-5).epsilon(1e-12));
}

TEST_CASE("config parsing, validation and digests") {
  RunConfig a = profile_defaults("desk"), b = profile_defaults("desk");
  apply_config_text(a, "cycles = 1\nuse_bdm = false\n# comment\niou = 0.5, 0.7\n");
  apply_config_text(b, "iou = 0.5,0.7\n\nuse_bdm=false\ncycles = 1");
  CHECK(a.digest() == b.digest());
  CHECK(a.iou_thresholds == std::vector<double>{0.5, 0.7});
  RunConfig c = a;
  c.use_bdm = true;
  CHECK(c.model_digest() == a.model_digest());
  CHECK(c.digest() != a.digest());
  c.model.cycles = 2;
  CHECK(c.model_digest() != a.model_digest());

  RunConfig round = profile_defaults("paper");
  apply_config_text(round, a.dump());
  CHECK(round.digest() == a.digest());

  RunConfig bad = profile_defaults("desk");
  CHECK_THROWS_AS(bad.set("no_such_key", "1"), Error);
  CHECK_THROWS_AS(bad.set("batch", "four"), Error);
  bad.model.cycles = 5;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = profile_defaults("desk");
  bad.iou_thresholds = {0.5, 1.0};
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = profile_defaults("desk");
  bad.batch = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  CHECK_THROWS_AS(profile_defaults("laptop"), Error);
  CHECK(profile_defaults("paper").train_size == 640);
  CHECK(profile_defaults("paper").epochs == 600);
}

TEST_CASE("exit codes follow the error kind") {
  CHECK(exit_code_for(ErrorKind::kUsage) == 1);
  CHECK(exit_code_for(ErrorKind::kConfig) == 1);
  CHECK(exit_code_for(ErrorKind::kParse) == 2);
  CHECK(exit_code_for(ErrorKind::kFormat) == 2);
  CHECK(exit_code_for(ErrorKind::kIo) == 2);
  CHECK(exit_code_for(ErrorKind::kNumeric) == 3);
}

TEST_CASE("eval of perfect, empty and missing detections") {
  const std::string manifest = tiny_dataset();
  const RunConfig config = profile_defaults("desk");
  const std::string perfect = scratch("det_perfect"), empty = scratch("det_empty");
  for (const ManifestEntry& e : read_manifest(manifest)) {
    const std::string stem = fs::path(e.image).stem().string();
    fs::copy_file(e.annotation, perfect + "/" + stem + ".txt");
    write_annotation(empty + "/" + stem + ".txt", Annotation{});
  }
  const EvalResult p = cmd_eval(config, manifest, perfect);
  for (const auto& t : p.report.thresholds) {
    CHECK(t.scores.precision == 1.0);
    CHECK(t.scores.recall == 1.0);
    CHECK(t.scores.f_measure == 1.0);
  }
  CHECK(report_metric(p.text, "iou_0.75.f_measure") == 1.0);
  CHECK(p.text.find("use_bdm = true") != std::string::npos);

  const EvalResult e = cmd_eval(config, manifest, empty);
  CHECK(e.report.thresholds[0].scores.f_measure == 0.0);
  CHECK(e.report.thresholds[0].scores.precision == 0.0);

  std::ostringstream warn;
  const EvalResult m = cmd_eval(config, manifest, scratch("det_none"), &warn);
  CHECK(m.missing == 8);
  CHECK(warn.str().find("warning") != std::string::npos);
  CHECK(m.report.thresholds[0].scores.recall == 0.0);
}

TEST_CASE("inference output contract") {
  const std::string manifest = tiny_dataset();
  RunConfig config = tiny_run(manifest, "");
  Detector<float> model(config.model, 0);
  model.head().zero();
  CHECK(infer_image(model, Image(64, 96, 3, 128), config).empty());

  const std::vector<std::string> images = manifest_images(manifest);
  const std::string d1 = scratch("infer1"), d2 = scratch("infer2");
  std::vector<std::string> with_bad = images;
  with_bad.push_back("/nonexistent.ppm");
  const InferResult r1 = cmd_infer(config, "", with_bad, d1);
  const InferResult r2 = cmd_infer(config, "", images, d2);
  CHECK(r1.written.size() == images.size());
  CHECK(r1.failed.size() == 1);
  for (size_t i = 0; i < r1.written.size(); ++i) {
    CHECK(slurp(r1.written[i]) == slurp(r2.written[i]));
    const Annotation a = parse_annotation(r1.written[i]);
    CHECK(a.scores.size() == a.polygons.size());
    for (const Polygon& p : a.polygons) CHECK(p.size() == 20);
  }
}

TEST_CASE("training smoke run, resume and the bdm switch") {
  const std::string manifest = tiny_dataset();
  const RunConfig straight = tiny_run(manifest, scratch("train_straight"));
  const TrainResult full = cmd_train(straight);
  REQUIRE(full.epochs.size() == 2);
  MESSAGE("smoke losses: epoch 1 " << full.epochs[0].total << ", epoch 2 " << full.epochs[1].total);
  CHECK(full.epochs[0].gt_fallback > 0);
  CHECK(slurp(full.log_path).find("# config") != std::string::npos);

  const RunConfig split = tiny_run(manifest, scratch("train_split"));
  TrainOptions first;
  first.max_epochs = 1;
  const TrainResult a = cmd_train(split, first);
  TrainOptions rest;
  rest.resume = a.final_checkpoint;
  const TrainResult b = cmd_train(split, rest);
  REQUIRE(b.epochs.size() == 1);
  CHECK(b.epochs[0].total == full.epochs[1].total);
  CHECK(slurp(b.final_checkpoint) == slurp(full.final_checkpoint));

  RunConfig no_bdm = tiny_run(manifest, scratch("train_nobdm"));
  no_bdm.use_bdm = false;
  no_bdm.epochs = 1;
  const TrainResult n = cmd_train(no_bdm);
  CHECK(n.epochs[0].gt_fallback == 0);

  RunConfig other = tiny_run(manifest, scratch("train_other"));
  other.model.cycles = 1;
  TrainOptions resume_other;
  resume_other.resume = a.final_checkpoint;
  CHECK_THROWS_AS(cmd_train(other, resume_other), Error);
}

TEST_CASE("stats on mixed synthetic data fill every complexity bucket") {
  std::vector<std::vector<Polygon>> polys;
  std::vector<std::vector<uint8_t>> ignore;
  for (int i = 0; i < 100; ++i) {
    const AnnotatedSample s = synth_sample(0, i, 128, Difficulty::kMixed);
    polys.push_back(s.polygons);
    ignore.push_back(s.ignore);
  }
  const StatsResult r = stats_report(polys, ignore);
  for (int64_t c : r.stats.complexity) CHECK(c > 0);
  CHECK(r.text.find("Extremely Complex") != std::string::npos);
}

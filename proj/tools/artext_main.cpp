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


#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "artext/commands.hpp"
#include "artext/error.hpp"

namespace {

struct Common {
  std::string config_path;
  std::string profile = "desk";
  std::optional<uint64_t> seed;
  bool no_rcca = false;
  std::optional<int> cycles;
  bool no_rfpn = false;
  bool no_rfrm = false;
  bool no_bdm = false;
  std::optional<std::string> filter;
  std::optional<std::string> iou;
  std::vector<std::string> overrides;
};

artext::RunConfig build_config(const Common& c) {
  artext::RunConfig config = artext::profile_defaults(c.profile);
  if (!c.config_path.empty()) artext::apply_config_file(config, c.config_path);
  for (const std::string& kv : c.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) artext::fail(artext::ErrorKind::kUsage, "--set expects key=value, got " + kv);
    config.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (c.seed) config.seed = *c.seed;
  if (c.no_rcca) config.model.use_rcca = false;
  if (c.cycles) config.model.cycles = *c.cycles;
  if (c.no_rfpn) config.model.use_rfpn = false;
  if (c.no_rfrm) config.model.use_rfrm = false;
  if (c.no_bdm) config.use_bdm = false;
  if (c.filter) config.filter = artext::parse_filter_mode(*c.filter);
  if (c.iou) config.iou_thresholds = artext::parse_double_list(*c.iou);
  config.validate();
  return config;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) artext::fail(artext::ErrorKind::kIo, "cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"artext: arbitrary-shape artistic text detector"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--config", common.config_path, "key = value config file")->check(CLI::ExistingFile);
  app.add_option("--profile", common.profile, "default set")->check(CLI::IsMember({"desk", "paper"}));
  app.add_option("--seed", common.seed, "random seed");
  app.add_flag("--no-rcca", common.no_rcca, "drop the RCCA blocks");
  app.add_option("--cycles", common.cycles, "criss-cross passes per RCCA block (0-4)");
  app.add_flag("--no-rfpn", common.no_rfpn, "plain FPN fusion");
  app.add_flag("--no-rfrm", common.no_rfrm, "drop the redundant feature reduction module");
  app.add_flag("--no-bdm", common.no_bdm, "no boundary discrimination during training");
  app.add_option("--filter", common.filter, "artistic post-filter")->check(CLI::IsMember({"off", "heuristic"}));
  app.add_option("--iou", common.iou, "comma-separated IoU thresholds");
  app.add_option("--set", common.overrides, "override any config key (key=value)");

  auto* train = app.add_subcommand("train", "train a model");
  std::string train_manifest, val_manifest, out_dir, resume;
  std::optional<int> epochs;
  int max_epochs = 0;
  train->add_option("--train", train_manifest, "training manifest");
  train->add_option("--val", val_manifest, "validation manifest");
  train->add_option("--out", out_dir, "output directory");
  train->add_option("--resume", resume, "checkpoint to continue from")->check(CLI::ExistingFile);
  train->add_option("--epochs", epochs, "total epochs");
  train->add_option("--max-epochs", max_epochs, "stop after this many epochs of this run");

  auto* infer = app.add_subcommand("infer", "write detections for images");
  std::string checkpoint, infer_out = "detections", infer_manifest;
  std::vector<std::string> images;
  infer->add_option("--checkpoint", checkpoint, "model checkpoint")->check(CLI::ExistingFile);
  infer->add_option("--out", infer_out, "detection directory");
  infer->add_option("--manifest", infer_manifest, "take images from a manifest");
  infer->add_option("images", images, "image files");

  auto* eval = app.add_subcommand("eval", "score detections against ground truth");
  std::string gt_manifest, det_dir, report_path;
  eval->add_option("--gt", gt_manifest, "ground-truth manifest")->required();
  eval->add_option("--det", det_dir, "detection directory")->required();
  eval->add_option("--report", report_path, "report file (stdout otherwise)");

  auto* stats = app.add_subcommand("stats", "dataset complexity and area statistics");
  std::string stats_manifest, stats_report;
  stats->add_option("manifest", stats_manifest, "manifest")->required();
  stats->add_option("--report", stats_report, "report file (stdout otherwise)");

  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  artext::SynthOptions synth_opts;
  std::string synth_out = "synth", difficulty = "mixed";
  synth->add_option("--count", synth_opts.count, "images")->check(CLI::PositiveNumber);
  synth->add_option("--size", synth_opts.size, "square side, multiple of 32");
  synth->add_option("--difficulty", difficulty, "easy, mixed or hard")->check(CLI::IsMember({"easy", "mixed", "hard"}));
  synth->add_option("--out", synth_out, "output directory");

  auto* grad = app.add_subcommand("gradcheck", "finite-difference check of every differentiable op");
  double tolerance = 1e-4;
  grad->add_option("--tolerance", tolerance, "relative error bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    artext::RunConfig config = build_config(common);
    if (*train) {
      if (!train_manifest.empty()) config.train_manifest = train_manifest;
      if (!val_manifest.empty()) config.val_manifest = val_manifest;
      if (!out_dir.empty()) config.out_dir = out_dir;
      if (epochs) config.epochs = *epochs;
      config.validate();
      artext::TrainOptions opts;
      opts.resume = resume;
      opts.max_epochs = max_epochs;
      opts.progress = &std::cout;
      const artext::TrainResult r = artext::cmd_train(config, opts);
      std::cout << "checkpoint " << r.final_checkpoint << "\nlog " << r.log_path << "\n";
    } else if (*infer) {
      if (!infer_manifest.empty())
        for (const std::string& p : artext::manifest_images(infer_manifest)) images.push_back(p);
      if (images.empty()) artext::fail(artext::ErrorKind::kUsage, "infer: no images given");
      const artext::InferResult r = artext::cmd_infer(config, checkpoint, images, infer_out, &std::cerr);
      std::cout << r.written.size() << " detection files in " << infer_out << "\n";
      if (!r.failed.empty()) {
        std::cerr << r.failed.size() << " image(s) failed\n";
        return 2;
      }
    } else if (*eval) {
      const artext::EvalResult r = artext::cmd_eval(config, gt_manifest, det_dir, &std::cerr);
      if (report_path.empty()) std::cout << r.text;
      else write_text(report_path, r.text);
    } else if (*stats) {
      const artext::StatsResult r = artext::cmd_stats(stats_manifest);
      if (stats_report.empty()) std::cout << r.text;
      else write_text(stats_report, r.text);
    } else if (*synth) {
      synth_opts.seed = config.seed;
      synth_opts.difficulty = artext::parse_difficulty(difficulty);
      const artext::SynthResult r = artext::synth_generate(synth_opts, synth_out);
      std::cout << r.entries.size() << " images in " << synth_out << "\ndigest " << artext::digest_hex(r.digest)
                << "\n";
    } else if (*grad) {
      const artext::GradcheckTable t = artext::cmd_gradcheck(config.seed, tolerance);
      std::cout << t.text;
      if (!t.all_passed) return 3;
    }
  } catch (const artext::Error& e) {
    std::cerr << "artext: " << e.what() << "\n";
    return artext::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "artext: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

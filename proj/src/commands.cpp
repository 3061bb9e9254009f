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


#include "artext/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "artext/augment.hpp"
#include "artext/checkpoint.hpp"
#include "artext/gradcheck.hpp"
#include "artext/pipeline.hpp"

namespace artext {

namespace fs = std::filesystem;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage:
    case ErrorKind::kConfig: return 1;
    case ErrorKind::kNumeric: return 3;
    default: return 2;
  }
}

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<AnnotatedSample> load_split(const std::string& manifest) {
  std::vector<AnnotatedSample> out;
  for (const ManifestEntry& e : read_manifest(manifest)) out.push_back(load_sample(e));
  return out;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::kIo, "cannot create directory " + dir + ": " + ec.message());
}

std::string epoch_name(int epoch) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "epoch_%04d.atxd", epoch);
  return buf;
}

std::vector<EvalImage> eval_images(const Detector<float>& model, const std::vector<AnnotatedSample>& split,
                                   const RunConfig& config) {
  std::vector<EvalImage> images(split.size());
  for (size_t i = 0; i < split.size(); ++i) {
    EvalImage& e = images[i];
    e.name = split[i].source;
    for (const Detection& d : infer_image(model, split[i].image, config)) e.detections.push_back(d.points);
    e.gts = split[i].polygons;
    e.ignore = split[i].ignore;
  }
  return images;
}

// Training may not see test images: the two manifests must not share a file.
void audit_split(const std::vector<AnnotatedSample>& train, const std::vector<AnnotatedSample>& val) {
  std::set<std::string> seen;
  for (const auto& s : train) seen.insert(fs::weakly_canonical(s.source).string());
  for (const auto& s : val)
    if (seen.count(fs::weakly_canonical(s.source).string()))
      fail(ErrorKind::kUsage, "validation image " + s.source + " is also in the training manifest");
}

}  // namespace

TrainResult cmd_train(const RunConfig& config, const TrainOptions& options) {
  config.validate();
  if (config.train_manifest.empty()) fail(ErrorKind::kUsage, "train: no training manifest");
  const std::vector<AnnotatedSample> train = load_split(config.train_manifest);
  if (train.empty()) fail(ErrorKind::kFormat, "train: manifest " + config.train_manifest + " is empty");
  std::vector<AnnotatedSample> val;
  if (!config.val_manifest.empty()) val = load_split(config.val_manifest);
  audit_split(train, val);

  ensure_dir(config.out_dir);
  TrainResult result;
  result.log_path = (fs::path(config.out_dir) / "train.log").string();

  Detector<float> model(config.model, config.seed);
  int start_epoch = 0;
  if (!options.resume.empty()) {
    const CheckpointInfo info = load_checkpoint(options.resume, model.store(), true);
    if (info.config_digest != config.model_digest())
      fail(ErrorKind::kConfig, "resume: checkpoint " + options.resume + " was written for a different model");
    start_epoch = static_cast<int>(info.epoch);
  }

  std::ofstream log(result.log_path, start_epoch > 0 ? std::ios::app : std::ios::trunc);
  if (!log) fail(ErrorKind::kIo, "cannot write " + result.log_path);
  log << "# config\n" << config.dump();
  log << "# train_manifest " << config.train_manifest << " (" << train.size() << " images)\n";
  log << "# val_manifest " << (config.val_manifest.empty() ? "-" : config.val_manifest) << " (" << val.size()
      << " images)\n";
  log << "# parameters " << model.store().total_size() << "\n";
  if (start_epoch > 0) log << "# resumed at epoch " << start_epoch << " from " << options.resume << "\n";

  AugmentOptions aug;
  aug.size = config.train_size;
  int end_epoch = config.epochs;
  if (options.max_epochs > 0) end_epoch = std::min(end_epoch, start_epoch + options.max_epochs);

  std::vector<size_t> order(train.size());
  for (int epoch = start_epoch; epoch < end_epoch; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(derive_seed({config.seed, fnv1a("epoch"), static_cast<uint64_t>(epoch)}));
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.next() % i]);

    EpochLog el;
    el.epoch = epoch + 1;
    el.lr = lr_schedule(epoch, config.lr);
    const AdamOptions adam{el.lr};
    int batches = 0;
    for (size_t b0 = 0; b0 < order.size(); b0 += static_cast<size_t>(config.batch)) {
      std::vector<AnnotatedSample> batch;
      for (size_t k = b0; k < std::min(order.size(), b0 + static_cast<size_t>(config.batch)); ++k) {
        const AnnotatedSample& s = train[order[k]];
        batch.push_back(config.augment ? augment(s, rng, aug) : apply_augment(s, identity_draw(s), aug.size));
      }
      TrainOutput<float> out = training_loss(model, batch, config);
      const double total = out.terms.total.item();
      if (!std::isfinite(total)) {
        std::ostringstream msg;
        msg << "non-finite loss at epoch " << epoch + 1 << " batch " << batches << " (seed " << config.seed
            << ", cls " << out.terms.cls.item() << ", dist " << out.terms.dist.item() << ", dir "
            << out.terms.dir.item() << ", points " << out.terms.points.item() << ", images";
        for (const auto& s : batch) msg << " " << s.source;
        msg << ")";
        log << "# abort: " << msg.str() << "\n";
        fail(ErrorKind::kNumeric, msg.str());
      }
      backward(out.terms.total);
      adam_step(model.store(), adam, true);
      model.store().zero_grad();
      el.total += total;
      el.cls += out.terms.cls.item();
      el.dist += out.terms.dist.item();
      el.dir += out.terms.dir.item();
      el.points += out.terms.points.item();
      el.proposals += out.stats.proposals;
      el.gt_fallback += out.stats.fallbacks;
      ++batches;
    }
    for (double* v : {&el.total, &el.cls, &el.dist, &el.dir, &el.points}) *v /= std::max(1, batches);

    const bool last = epoch + 1 == config.epochs;
    if (!val.empty() && (last || (config.val_every > 0 && (epoch + 1) % config.val_every == 0))) {
      const EvalReport rep = evaluate_dataset(eval_images(model, val, config), config.iou_thresholds);
      for (const auto& t : rep.thresholds) el.val_f.push_back(t.scores.f_measure);
    }

    std::ostringstream line;
    line << "epoch " << el.epoch << " lr " << fmt("%.6g", el.lr) << " total " << fmt("%.6f", el.total) << " cls "
         << fmt("%.6f", el.cls) << " dist " << fmt("%.6f", el.dist) << " dir " << fmt("%.6f", el.dir) << " points "
         << fmt("%.6f", el.points) << " proposals " << el.proposals << " gt_fallback " << el.gt_fallback;
    for (size_t i = 0; i < el.val_f.size(); ++i)
      line << " val_f@" << fmt("%.2f", config.iou_thresholds[i]) << " " << fmt("%.4f", el.val_f[i]);
    log << line.str() << "\n";
    log.flush();
    if (options.progress) {
      const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      *options.progress << line.str() << " (" << fmt("%.1f", sec) << " s)\n" << std::flush;
    }

    const CheckpointInfo info{config.model_digest(), static_cast<uint32_t>(epoch + 1), true};
    if (config.checkpoint_every > 0 && (epoch + 1) % config.checkpoint_every == 0)
      save_checkpoint((fs::path(config.out_dir) / epoch_name(epoch + 1)).string(), model.store(), info);
    if (last || epoch + 1 == end_epoch) {
      result.final_checkpoint = (fs::path(config.out_dir) / (last ? "final.atxd" : epoch_name(epoch + 1))).string();
      save_checkpoint(result.final_checkpoint, model.store(), info);
    }
    result.epochs.push_back(el);
  }
  return result;
}

InferResult cmd_infer(const RunConfig& config, const std::string& checkpoint, const std::vector<std::string>& images,
                      const std::string& out_dir, std::ostream* warnings) {
  config.validate();
  Detector<float> model(config.model, config.seed);
  if (!checkpoint.empty()) {
    const CheckpointInfo info = load_checkpoint(checkpoint, model.store(), false);
    if (info.config_digest != config.model_digest())
      fail(ErrorKind::kConfig, "infer: checkpoint " + checkpoint + " was written for a different model");
  }
  ensure_dir(out_dir);
  InferResult result;
  for (const std::string& path : images) {
    try {
      const Image image = read_image(path);
      Annotation a;
      for (const Detection& d : infer_image(model, image, config)) {
        a.polygons.push_back(d.points);
        a.ignore.push_back(0);
        a.scores.push_back(d.score);
      }
      const std::string out = (fs::path(out_dir) / (fs::path(path).stem().string() + ".txt")).string();
      write_annotation(out, a);
      result.written.push_back(out);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kNumeric) throw;
      result.failed.push_back(path + ": " + e.what());
      if (warnings) *warnings << "warning: " << path << ": " << e.what() << "\n";
    }
  }
  return result;
}

std::vector<std::string> manifest_images(const std::string& manifest) {
  std::vector<std::string> out;
  for (const ManifestEntry& e : read_manifest(manifest)) out.push_back(e.image);
  return out;
}

EvalResult cmd_eval(const RunConfig& config, const std::string& gt_manifest, const std::string& det_dir,
                    std::ostream* warnings) {
  config.validate();
  EvalResult result;
  std::vector<EvalImage> images;
  for (const ManifestEntry& e : read_manifest(gt_manifest)) {
    EvalImage im;
    im.name = fs::path(e.image).stem().string();
    const Annotation gt = parse_annotation(e.annotation);
    im.gts = gt.polygons;
    im.ignore = gt.ignore;
    const fs::path det = fs::path(det_dir) / (im.name + ".txt");
    if (fs::exists(det)) {
      im.detections = parse_annotation(det.string()).polygons;
    } else {
      ++result.missing;
      if (warnings) *warnings << "warning: no detection file " << det.string() << ", counting zero detections\n";
    }
    images.push_back(std::move(im));
  }
  result.report = evaluate_dataset(images, config.iou_thresholds);
  std::ostringstream pre;
  pre << "# gt_manifest " << gt_manifest << "\n# det_dir " << det_dir << "\n# images " << images.size()
      << " missing_detection_files " << result.missing << "\n# config\n" << config.dump();
  result.text = format_report(result.report, pre.str());
  return result;
}

StatsResult stats_report(const std::vector<std::vector<Polygon>>& polygons,
                         const std::vector<std::vector<uint8_t>>& ignore) {
  StatsResult r;
  r.stats = dataset_stats(polygons, ignore);
  const DatasetStats& s = r.stats;
  std::ostringstream out;
  out << "images " << polygons.size() << "\npolygons " << s.polygons << " (ignored " << s.ignored << ")\n";
  out << "mean_area " << fmt("%.2f", s.mean_area) << "\n\ncomplexity (vertex count)\n";
  const char* ranges[] = {"<10", "10-14", "15-29", ">=30"};
  for (int c = 0; c < 4; ++c) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "  %-20s %-6s %8lld\n", to_string(static_cast<Complexity>(c)), ranges[c],
                  static_cast<long long>(s.complexity[static_cast<size_t>(c)]));
    out << buf;
  }
  out << "\narea (px^2)\n";
  for (size_t i = 0; i < kAreaEdges.size(); ++i) {
    std::string range = fmt("%.0f", kAreaEdges[i]) + (i + 1 < kAreaEdges.size() ? "-" + fmt("%.0f", kAreaEdges[i + 1]) : "+");
    char buf[96];
    std::snprintf(buf, sizeof buf, "  %-14s %8lld\n", range.c_str(), static_cast<long long>(s.area[i]));
    out << buf;
  }
  out << "\n[metrics]\n";
  for (int c = 0; c < 4; ++c)
    out << "complexity." << to_string(static_cast<Complexity>(c)) << " = " << s.complexity[static_cast<size_t>(c)]
        << "\n";
  out << "polygons = " << s.polygons << "\nignored = " << s.ignored << "\n";
  r.text = out.str();
  return r;
}

StatsResult cmd_stats(const std::string& manifest) {
  std::vector<std::vector<Polygon>> polys;
  std::vector<std::vector<uint8_t>> ignore;
  for (const ManifestEntry& e : read_manifest(manifest)) {
    const Annotation a = parse_annotation(e.annotation);
    polys.push_back(a.polygons);
    ignore.push_back(a.ignore);
  }
  return stats_report(polys, ignore);
}

GradcheckTable cmd_gradcheck(uint64_t seed, double tolerance) {
  GradcheckTable t;
  t.all_passed = true;
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-26s %12s %12s %6s  %s\n", "case", "rel_error", "abs_error", "coords", "result");
  out << buf;
  for (const GradcheckResult& r : run_gradcheck_suite(seed, tolerance)) {
    std::snprintf(buf, sizeof buf, "%-26s %12.3e %12.3e %6d  %s\n", r.name.c_str(), r.relative_error,
                  r.max_abs_error, r.coordinates, r.passed ? "PASS" : "FAIL");
    out << buf;
    t.all_passed = t.all_passed && r.passed;
  }
  out << (t.all_passed ? "all cases passed" : "gradient check FAILED") << " (tolerance " << fmt("%.0e", tolerance)
      << ")\n";
  t.text = out.str();
  return t;
}

}  // namespace artext

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


#include "artext/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "artext/error.hpp"
#include "artext/rng.hpp"

namespace artext {

void ModelConfig::validate() const {
  for (int w : widths) {
    if (w <= 0 || w % 8 != 0) fail(ErrorKind::kConfig, "backbone widths must be positive multiples of 8");
  }
  if (cycles < 0 || cycles > 4) fail(ErrorKind::kConfig, "cycles must be in [0, 4], got " + std::to_string(cycles));
  if (rfrm_level < 0 || rfrm_level > 3) fail(ErrorKind::kConfig, "rfrm_level must be in [0, 3]");
  if (fpn_width <= 0 || rdb_growth <= 0 || rdb_layers <= 0) fail(ErrorKind::kConfig, "fpn/rdb sizes must be positive");
  if (head_dilations[0] < 1 || head_dilations[1] < 1) fail(ErrorKind::kConfig, "head dilations must be >= 1");
  if (refine_iterations < 1) fail(ErrorKind::kConfig, "refine_iterations must be >= 1");
  if (control_points < 3) fail(ErrorKind::kConfig, "control_points must be >= 3");
  if (refine_kernel < 1 || refine_kernel % 2 == 0) fail(ErrorKind::kConfig, "refine_kernel must be odd");
  if (refine_width <= 0) fail(ErrorKind::kConfig, "refine_width must be positive");
}

FilterMode parse_filter_mode(const std::string& text) {
  if (text == "off") return FilterMode::kOff;
  if (text == "heuristic") return FilterMode::kHeuristic;
  fail(ErrorKind::kConfig, "unknown filter mode '" + text + "' (expected off or heuristic)");
}

const char* to_string(FilterMode mode) { return mode == FilterMode::kOff ? "off" : "heuristic"; }

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  fail(ErrorKind::kConfig, "invalid value '" + value + "' for " + key);
}

double to_double(const std::string& key, const std::string& value) {
  double v = 0;
  const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (value.empty() || ec != std::errc() || p != value.data() + value.size() || !std::isfinite(v)) bad_value(key, value);
  return v;
}

int64_t to_int(const std::string& key, const std::string& value) {
  int64_t v = 0;
  const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (value.empty() || ec != std::errc() || p != value.data() + value.size()) bad_value(key, value);
  return v;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  bad_value(key, value);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt(bool v) { return v ? "true" : "false"; }

template <size_t N>
std::string fmt_list(const std::array<int, N>& xs) {
  std::string out;
  for (int x : xs) out += (out.empty() ? "" : ",") + std::to_string(x);
  return out;
}

template <size_t N>
std::array<int, N> parse_int_array(const std::string& key, const std::string& value) {
  std::array<int, N> out{};
  std::istringstream in(value);
  std::string tok;
  size_t i = 0;
  while (std::getline(in, tok, ',')) {
    if (i >= N) bad_value(key, value);
    out[i++] = static_cast<int>(to_int(key, trim(tok)));
  }
  if (i != N) bad_value(key, value);
  return out;
}

}  // namespace

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) out.push_back(to_double("list", trim(tok)));
  return out;
}

void RunConfig::set(const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "profile") profile = value;
  else if (key == "widths") model.widths = parse_int_array<4>(key, value);
  else if (key == "use_rcca") model.use_rcca = to_bool(key, value);
  else if (key == "cycles") model.cycles = static_cast<int>(to_int(key, value));
  else if (key == "use_rfpn") model.use_rfpn = to_bool(key, value);
  else if (key == "use_rfrm") model.use_rfrm = to_bool(key, value);
  else if (key == "rfrm_level") model.rfrm_level = static_cast<int>(to_int(key, value));
  else if (key == "fpn_width") model.fpn_width = static_cast<int>(to_int(key, value));
  else if (key == "rdb_growth") model.rdb_growth = static_cast<int>(to_int(key, value));
  else if (key == "rdb_layers") model.rdb_layers = static_cast<int>(to_int(key, value));
  else if (key == "head_dilations") model.head_dilations = parse_int_array<2>(key, value);
  else if (key == "refine_iterations") model.refine_iterations = static_cast<int>(to_int(key, value));
  else if (key == "control_points") {
    model.control_points = static_cast<int>(to_int(key, value));
    proposals.control_points = model.control_points;
  }
  else if (key == "refine_width") model.refine_width = static_cast<int>(to_int(key, value));
  else if (key == "refine_kernel") model.refine_kernel = static_cast<int>(to_int(key, value));
  else if (key == "refine_coords") model.refine_coords = to_bool(key, value);
  else if (key == "use_bdm") use_bdm = to_bool(key, value);
  else if (key == "filter") filter = parse_filter_mode(value);
  else if (key == "lr") lr = to_double(key, value);
  else if (key == "batch") batch = static_cast<int>(to_int(key, value));
  else if (key == "epochs") epochs = static_cast<int>(to_int(key, value));
  else if (key == "seed") seed = static_cast<uint64_t>(to_int(key, value));
  else if (key == "train_size") train_size = static_cast<int>(to_int(key, value));
  else if (key == "augment") augment = to_bool(key, value);
  else if (key == "val_every") val_every = static_cast<int>(to_int(key, value));
  else if (key == "checkpoint_every") checkpoint_every = static_cast<int>(to_int(key, value));
  else if (key == "max_train_proposals") max_train_proposals = static_cast<int>(to_int(key, value));
  else if (key == "loss_cls") loss.cls = to_double(key, value);
  else if (key == "loss_dist") loss.dist = to_double(key, value);
  else if (key == "loss_dir") loss.dir = to_double(key, value);
  else if (key == "loss_points") loss.points = to_double(key, value);
  else if (key == "ohem_ratio") loss.ohem_ratio = to_double(key, value);
  else if (key == "bdm_lower") bdm.lower = to_double(key, value);
  else if (key == "bdm_upper") bdm.upper = to_double(key, value);
  else if (key == "proposal_threshold") proposals.threshold = to_double(key, value);
  else if (key == "min_area") proposals.min_area = to_double(key, value);
  else if (key == "iou") iou_thresholds = parse_double_list(value);
  else if (key == "train_manifest") train_manifest = value;
  else if (key == "val_manifest") val_manifest = value;
  else if (key == "out_dir") out_dir = value;
  else fail(ErrorKind::kConfig, "unknown config key '" + key + "'");
}

std::map<std::string, std::string> RunConfig::to_map() const {
  std::map<std::string, std::string> m;
  m["profile"] = profile;
  m["widths"] = fmt_list(model.widths);
  m["use_rcca"] = fmt(model.use_rcca);
  m["cycles"] = std::to_string(model.cycles);
  m["use_rfpn"] = fmt(model.use_rfpn);
  m["use_rfrm"] = fmt(model.use_rfrm);
  m["rfrm_level"] = std::to_string(model.rfrm_level);
  m["fpn_width"] = std::to_string(model.fpn_width);
  m["rdb_growth"] = std::to_string(model.rdb_growth);
  m["rdb_layers"] = std::to_string(model.rdb_layers);
  m["head_dilations"] = fmt_list(model.head_dilations);
  m["refine_iterations"] = std::to_string(model.refine_iterations);
  m["control_points"] = std::to_string(model.control_points);
  m["refine_width"] = std::to_string(model.refine_width);
  m["refine_kernel"] = std::to_string(model.refine_kernel);
  m["refine_coords"] = fmt(model.refine_coords);
  m["use_bdm"] = fmt(use_bdm);
  m["filter"] = to_string(filter);
  m["lr"] = fmt(lr);
  m["batch"] = std::to_string(batch);
  m["epochs"] = std::to_string(epochs);
  m["seed"] = std::to_string(seed);
  m["train_size"] = std::to_string(train_size);
  m["augment"] = fmt(augment);
  m["val_every"] = std::to_string(val_every);
  m["checkpoint_every"] = std::to_string(checkpoint_every);
  m["max_train_proposals"] = std::to_string(max_train_proposals);
  m["loss_cls"] = fmt(loss.cls);
  m["loss_dist"] = fmt(loss.dist);
  m["loss_dir"] = fmt(loss.dir);
  m["loss_points"] = fmt(loss.points);
  m["ohem_ratio"] = fmt(loss.ohem_ratio);
  m["bdm_lower"] = fmt(bdm.lower);
  m["bdm_upper"] = fmt(bdm.upper);
  m["proposal_threshold"] = fmt(proposals.threshold);
  m["min_area"] = fmt(proposals.min_area);
  std::string ious;
  for (double t : iou_thresholds) ious += (ious.empty() ? "" : ",") + fmt(t);
  m["iou"] = ious;
  m["train_manifest"] = train_manifest;
  m["val_manifest"] = val_manifest;
  m["out_dir"] = out_dir;
  return m;
}

std::string RunConfig::dump() const {
  std::string out;
  for (const auto& [k, v] : to_map()) out += k + " = " + v + "\n";
  return out;
}

void RunConfig::validate() const {
  model.validate();
  if (batch < 1) fail(ErrorKind::kConfig, "batch must be >= 1");
  if (epochs < 0) fail(ErrorKind::kConfig, "epochs must be >= 0");
  if (train_size <= 0 || train_size % 32 != 0) fail(ErrorKind::kConfig, "train_size must be a positive multiple of 32");
  if (!(lr > 0)) fail(ErrorKind::kConfig, "lr must be positive");
  if (iou_thresholds.empty()) fail(ErrorKind::kConfig, "at least one IoU threshold is required");
  for (double t : iou_thresholds) {
    if (!(t > 0.0 && t < 1.0)) fail(ErrorKind::kConfig, "IoU thresholds must lie in (0, 1), got " + fmt(t));
  }
  if (!(bdm.lower >= 0 && bdm.lower <= bdm.upper)) fail(ErrorKind::kConfig, "bdm thresholds must satisfy 0 <= lower <= upper");
  if (val_every < 0 || checkpoint_every < 0) fail(ErrorKind::kConfig, "val_every and checkpoint_every must be >= 0");
  if (max_train_proposals < 0) fail(ErrorKind::kConfig, "max_train_proposals must be >= 0");
  if (proposals.control_points != model.control_points) fail(ErrorKind::kConfig, "control point counts disagree");
}

uint64_t RunConfig::digest() const {
  uint64_t h = fnv1a("");
  for (const auto& [k, v] : to_map()) h = fnv1a(k + "=" + v + "\n", h);
  return h;
}

uint64_t RunConfig::model_digest() const {
  static const char* kModelKeys[] = {"widths", "use_rcca", "cycles", "use_rfpn", "use_rfrm", "rfrm_level",
                                     "fpn_width", "rdb_growth", "rdb_layers", "head_dilations", "refine_iterations",
                                     "control_points", "refine_width", "refine_kernel", "refine_coords"};
  const auto m = to_map();
  uint64_t h = fnv1a("");
  for (const char* k : kModelKeys) h = fnv1a(std::string(k) + "=" + m.at(k) + "\n", h);
  return h;
}

RunConfig profile_defaults(const std::string& profile) {
  RunConfig c;
  c.profile = profile;
  if (profile == "desk") {
    c.model.widths = {16, 32, 64, 128};
    c.model.fpn_width = 32;
    c.model.refine_width = 32;
    c.model.rdb_growth = 8;
    c.train_size = 128;
    c.epochs = 60;
    c.lr = 1e-3;
  } else if (profile == "paper") {
    c.train_size = 640;
    c.epochs = 600;
    c.lr = 1e-4;
  } else {
    fail(ErrorKind::kConfig, "unknown profile '" + profile + "' (expected desk or paper)");
  }
  return c;
}

void apply_config_text(RunConfig& config, const std::string& text, const std::string& name) {
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(ErrorKind::kConfig, name + ":" + std::to_string(line_no) + ": expected key = value");
    }
    config.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void apply_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  apply_config_text(config, ss.str(), path);
}

double lr_schedule(int epoch, double lr0) { return lr0 * std::pow(0.9, epoch / 50); }

}  // namespace artext

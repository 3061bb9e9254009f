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


#include "artext/annotation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "artext/error.hpp"

namespace artext {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& token, const std::string& where) {
  const std::string t = trim(token);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    fail(ErrorKind::kParse, where + ": invalid number '" + t + "'");
  }
  return v;
}

std::string format_number(double v) {
  char buf[64];
  if (v == std::round(v) && std::abs(v) < 1e15) {
    std::snprintf(buf, sizeof(buf), "%.0f", v);
  } else {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
  }
  return buf;
}

}  // namespace

Annotation parse_annotation_text(const std::string& text, const std::string& name) {
  Annotation a;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty()) continue;
    const std::string where = name + ":" + std::to_string(line_no);
    double score = -1.0;
    if (const auto semi = line.find(';'); semi != std::string::npos) {
      score = parse_number(line.substr(semi + 1), where);
      line = trim(line.substr(0, semi));
    }
    std::vector<std::string> tokens;
    std::string tok;
    std::istringstream fields(line);
    while (std::getline(fields, tok, ',')) tokens.push_back(trim(tok));
    bool ignore = false;
    if (!tokens.empty() && tokens.back() == "###") {
      ignore = true;
      tokens.pop_back();
    }
    if (tokens.size() % 2 != 0) {
      fail(ErrorKind::kParse, where + ": odd coordinate count (" + std::to_string(tokens.size()) + ")");
    }
    if (tokens.size() < 6) {
      fail(ErrorKind::kParse, where + ": polygon needs at least 3 vertices, got " + std::to_string(tokens.size() / 2));
    }
    Polygon poly;
    for (size_t i = 0; i < tokens.size(); i += 2) poly.push_back({parse_number(tokens[i], where), parse_number(tokens[i + 1], where)});
    a.polygons.push_back(std::move(poly));
    a.ignore.push_back(ignore ? 1 : 0);
    if (score >= 0.0) a.scores.push_back(score);
  }
  if (!a.scores.empty() && a.scores.size() != a.polygons.size()) {
    fail(ErrorKind::kParse, name + ": scores present on some lines but not others");
  }
  return a;
}

Annotation parse_annotation(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot open annotation " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_annotation_text(ss.str(), path);
}

std::string format_annotation(const Annotation& a) {
  std::string out;
  for (size_t i = 0; i < a.polygons.size(); ++i) {
    std::string line;
    for (const Point& p : a.polygons[i]) {
      if (!line.empty()) line += ',';
      line += format_number(p.x) + "," + format_number(p.y);
    }
    if (i < a.ignore.size() && a.ignore[i]) line += ",###";
    if (i < a.scores.size()) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), ";%.6f", a.scores[i]);
      line += buf;
    }
    out += line + "\n";
  }
  return out;
}

void write_annotation(const std::string& path, const Annotation& a) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::kIo, "cannot write annotation " + path);
  out << format_annotation(a);
}

std::vector<ManifestEntry> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot open manifest " + path);
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  std::vector<ManifestEntry> out;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      fail(ErrorKind::kParse, path + ":" + std::to_string(line_no) + ": expected image<TAB>annotation");
    }
    auto resolve = [&](const std::string& p) {
      const std::filesystem::path fp(trim(p));
      return (fp.is_absolute() ? fp : base / fp).lexically_normal().string();
    };
    out.push_back({resolve(line.substr(0, tab)), resolve(line.substr(tab + 1))});
  }
  return out;
}

void write_manifest(const std::string& path, const std::vector<ManifestEntry>& entries) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::kIo, "cannot write manifest " + path);
  for (const auto& e : entries) out << e.image << '\t' << e.annotation << '\n';
}

AnnotatedSample load_sample(const ManifestEntry& entry) {
  AnnotatedSample s;
  s.image = read_image(entry.image);
  Annotation a = parse_annotation(entry.annotation);
  for (auto& poly : a.polygons) {
    for (Point& p : poly) {
      p.x = std::clamp(p.x, 0.0, static_cast<double>(s.image.width));
      p.y = std::clamp(p.y, 0.0, static_cast<double>(s.image.height));
    }
  }
  s.polygons = std::move(a.polygons);
  s.ignore = std::move(a.ignore);
  s.source = entry.image;
  return s;
}

}  // namespace artext

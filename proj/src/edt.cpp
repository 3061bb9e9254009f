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

#include "artext/edt.hpp"

#include <algorithm>
#include <cmath>

#include "artext/error.hpp"

namespace artext {

MaskMap::MaskMap(int height, int width, MaskSource source)
    : height_(height), width_(width), values_(static_cast<size_t>(height) * width, 0), source_(source) {}

MaskMap::MaskMap(int height, int width, std::vector<uint8_t> values, MaskSource source)
    : height_(height), width_(width), values_(std::move(values)), source_(source) {
  if (values_.size() != static_cast<size_t>(height) * width)
    fail(ErrorKind::kInvalidShape, "mask data does not match its extents");
  for (uint8_t& v : values_) {
    v = v ? 1 : 0;
    count_ += v;
  }
}

void MaskMap::set(int y, int x, bool on) {
  uint8_t& v = values_[static_cast<size_t>(y) * width_ + x];
  count_ += static_cast<int>(on) - v;
  v = on ? 1 : 0;
}

namespace {

int64_t floor_div(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

EdtResult edt_squared(const MaskMap& mask) {
  if (mask.count() == 0) fail(ErrorKind::kEmptyMask, "distance transform of an empty mask");
  const int h = mask.height();
  const int w = mask.width();
  // Column pass: vertical distance to the nearest nonzero pixel in the same column.
  const int64_t inf = h + w;
  std::vector<int64_t> g(static_cast<size_t>(h) * w);
  std::vector<int32_t> g_row(static_cast<size_t>(h) * w, -1);
#pragma omp parallel for schedule(static)
  for (int x = 0; x < w; ++x) {
    int64_t dist = inf;
    int row = -1;
    for (int y = 0; y < h; ++y) {
      if (mask(y, x)) {
        dist = 0;
        row = y;
      } else if (row >= 0) {
        dist = y - row;
      }
      g[static_cast<size_t>(y) * w + x] = row >= 0 ? dist : inf;
      g_row[static_cast<size_t>(y) * w + x] = row;
    }
    int below = -1;
    for (int y = h - 1; y >= 0; --y) {
      if (mask(y, x)) below = y;
      if (below >= 0) {
        const size_t i = static_cast<size_t>(y) * w + x;
        if (below - y < g[i]) {
          g[i] = below - y;
          g_row[i] = below;
        }
      }
    }
  }

  EdtResult out;
  out.height = h;
  out.width = w;
  out.squared.resize(static_cast<size_t>(h) * w);
  out.nearest.resize(static_cast<size_t>(h) * w);
  // Row pass: lower envelope of parabolas (x - i)^2 + g(i)^2.
#pragma omp parallel
  {
    std::vector<int> s(static_cast<size_t>(w));
    std::vector<int64_t> t(static_cast<size_t>(w));
#pragma omp for schedule(static)
    for (int y = 0; y < h; ++y) {
      const int64_t* gr = g.data() + static_cast<size_t>(y) * w;
      auto f = [&](int64_t x, int i) { return (x - i) * (x - i) + gr[i] * gr[i]; };
      auto sep = [&](int i, int u) {
        return floor_div(static_cast<int64_t>(u) * u - static_cast<int64_t>(i) * i + gr[u] * gr[u] - gr[i] * gr[i],
                         2 * static_cast<int64_t>(u - i));
      };
      int q = 0;
      s[0] = 0;
      t[0] = 0;
      for (int u = 1; u < w; ++u) {
        while (q >= 0 && f(t[q], s[q]) > f(t[q], u)) --q;
        if (q < 0) {
          q = 0;
          s[0] = u;
        } else {
          const int64_t next = 1 + sep(s[q], u);
          if (next < w) {
            ++q;
            s[q] = u;
            t[q] = next;
          }
        }
      }
      for (int u = w - 1; u >= 0; --u) {
        const size_t i = static_cast<size_t>(y) * w + u;
        out.squared[i] = f(u, s[q]);
        out.nearest[i] = g_row[static_cast<size_t>(y) * w + s[q]] * w + s[q];
        if (u == t[q]) --q;
      }
    }
  }
  return out;
}

std::vector<double> edt(const MaskMap& mask) {
  const EdtResult r = edt_squared(mask);
  std::vector<double> out(r.squared.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = std::sqrt(static_cast<double>(r.squared[i]));
  return out;
}

}  // namespace artext

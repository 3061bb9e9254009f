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


#include "artext/seghead.hpp"

#include <algorithm>
#include <cmath>

#include "artext/edt.hpp"

namespace artext {

template <typename T>
SegHead<T>::SegHead(Builder<T>& b, const ModelConfig& config) {
  const int f = config.fpn_width;
  const int d1 = config.head_dilations[0];
  const int d2 = config.head_dilations[1];
  conv1_ = Conv2d<T>(b, "seghead.conv1", f, f, 3, Conv2dOptions::make(1, d1, d1));
  conv2_ = Conv2d<T>(b, "seghead.conv2", f, f, 3, Conv2dOptions::make(1, d2, d2));
  out_ = Conv2d<T>(b, "seghead.out", f, 5, 1, {}, 1.0);
}

template <typename T>
Tensor<T> SegHead<T>::logits(const Tensor<T>& fused) const {
  return out_(relu(conv2_(relu(conv1_(fused)))));
}

template <typename T>
FieldMaps<T> SegHead<T>::operator()(const Tensor<T>& fused) const {
  Tensor<T> raw = logits(fused);
  FieldMaps<T> maps;
  maps.cls = slice_channels(raw, 0, 2);
  maps.dist = sigmoid(slice_channels(raw, 2, 1));
  maps.dir = normalize_pairs(slice_channels(raw, 3, 2), T(1e-6));
  return maps;
}

template <typename T>
void SegHead<T>::zero() {
  conv1_.zero();
  conv2_.zero();
  out_.zero();
}

template <typename T>
std::vector<float> text_probability(const FieldMaps<T>& maps, int n) {
  const Shape& s = maps.cls.shape();
  const int64_t plane = s.plane();
  const T* base = maps.cls.ptr() + static_cast<int64_t>(n) * 2 * plane;
  std::vector<float> out(static_cast<size_t>(plane));
  for (int64_t i = 0; i < plane; ++i) {
    const double z = static_cast<double>(base[plane + i]) - static_cast<double>(base[i]);
    out[static_cast<size_t>(i)] = static_cast<float>(1.0 / (1.0 + std::exp(-z)));
  }
  return out;
}

namespace {

constexpr int kDy[4] = {-1, 1, 0, 0};
constexpr int kDx[4] = {0, 0, -1, 1};

void fill_instance_fields(GroundTruthMaps& gt, int id) {
  const int h = gt.height, w = gt.width;
  int y0 = h, y1 = -1, x0 = w, x1 = -1;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (gt.instance[static_cast<size_t>(y) * w + x] != id) continue;
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
    }
  }
  if (y1 < 0) return;
  const int ch = y1 - y0 + 1, cw = x1 - x0 + 1;
  auto inside = [&](int y, int x) {
    return y >= 0 && y < h && x >= 0 && x < w && gt.instance[static_cast<size_t>(y) * w + x] == id;
  };
  MaskMap boundary(ch, cw, MaskSource::kGroundTruth);
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      if (!inside(y, x)) continue;
      for (int k = 0; k < 4; ++k) {
        if (!inside(y + kDy[k], x + kDx[k])) {
          boundary.set(y - y0, x - x0, true);
          break;
        }
      }
    }
  }
  const EdtResult r = edt_squared(boundary);
  double max_dist = 0.0;
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x)
      if (inside(y, x))
        max_dist = std::max(max_dist, std::sqrt(static_cast<double>(r.squared[static_cast<size_t>(y - y0) * cw + x - x0])));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      if (!inside(y, x)) continue;
      const size_t c = static_cast<size_t>(y - y0) * cw + (x - x0);
      const size_t g = static_cast<size_t>(y) * w + x;
      const double d = std::sqrt(static_cast<double>(r.squared[c]));
      gt.dist[g] = max_dist > 0.0 ? static_cast<float>(d / max_dist) : 0.0f;
      double vx = 0.0, vy = 0.0;
      if (r.squared[c] > 0) {
        const int ny = r.nearest[c] / cw, nx = r.nearest[c] % cw;
        vx = nx - (x - x0);
        vy = ny - (y - y0);
      } else {
        // Boundary cell: point out through its missing neighbors.
        for (int k = 0; k < 4; ++k) {
          if (!inside(y + kDy[k], x + kDx[k])) {
            vx += kDx[k];
            vy += kDy[k];
          }
        }
        if (vx == 0.0 && vy == 0.0) {
          for (int k = 0; k < 4; ++k) {
            if (!inside(y + kDy[k], x + kDx[k])) {
              vx = kDx[k];
              vy = kDy[k];
              break;
            }
          }
        }
      }
      const double norm = std::hypot(vx, vy);
      gt.dir_x[g] = static_cast<float>(vx / norm);
      gt.dir_y[g] = static_cast<float>(vy / norm);
    }
  }
}

}  // namespace

GroundTruthMaps make_gt_maps(const std::vector<Polygon>& polygons, const std::vector<uint8_t>& ignore_flags,
                             int image_height, int image_width) {
  GroundTruthMaps gt;
  gt.height = (image_height + kFieldStride - 1) / kFieldStride;
  gt.width = (image_width + kFieldStride - 1) / kFieldStride;
  const size_t n = gt.size();
  gt.cls.assign(n, 0);
  gt.dist.assign(n, 0.0f);
  gt.dir_x.assign(n, 0.0f);
  gt.dir_y.assign(n, 0.0f);
  gt.instance.assign(n, 0);
  gt.ignore.assign(n, 0);
  gt.polygon_ignored.assign(polygons.size(), 0);

  std::vector<std::vector<uint8_t>> rasters(polygons.size());
  for (size_t p = 0; p < polygons.size(); ++p) {
    rasters[p] = rasterize(polygons[p], 0.0, 0.0, kFieldStride, gt.width, gt.height);
    const bool flagged = p < ignore_flags.size() && ignore_flags[p];
    const double cells = polygon_area(polygons[p]) / (kFieldStride * kFieldStride);
    const bool empty = std::none_of(rasters[p].begin(), rasters[p].end(), [](uint8_t v) { return v != 0; });
    if (flagged || polygons[p].size() < 3 || cells < 1.0 || empty) gt.polygon_ignored[p] = 1;
  }
  for (size_t p = 0; p < polygons.size(); ++p) {
    for (size_t i = 0; i < n; ++i) {
      if (!rasters[p][i]) continue;
      if (gt.polygon_ignored[p]) {
        gt.ignore[i] = 1;
      } else {
        gt.instance[i] = static_cast<int32_t>(p + 1);
      }
    }
  }
  for (size_t i = 0; i < n; ++i) gt.cls[i] = gt.instance[i] > 0 ? 1 : 0;
  for (size_t p = 0; p < polygons.size(); ++p) {
    if (!gt.polygon_ignored[p]) fill_instance_fields(gt, static_cast<int>(p + 1));
  }
  return gt;
}

template class SegHead<float>;
template class SegHead<double>;
template std::vector<float> text_probability(const FieldMaps<float>&, int);
template std::vector<float> text_probability(const FieldMaps<double>&, int);

}  // namespace artext

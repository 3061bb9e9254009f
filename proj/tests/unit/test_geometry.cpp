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


#include <cmath>

#include "artext/geometry.hpp"
#include "artext/rng.hpp"
#include "doctest.h"

using namespace artext;

TEST_CASE("shoelace area and orientation") {
  Polygon sq{{0, 0}, {4, 0}, {4, 3}, {0, 3}};
  CHECK(signed_area(sq) == 12.0);
  Polygon cw{{0, 0}, {0, 3}, {4, 3}, {4, 0}};
  CHECK(signed_area(cw) == -12.0);
  make_counter_clockwise(cw);
  CHECK(signed_area(cw) == 12.0);
  CHECK(cw.front() == Point{0, 0});
  CHECK(perimeter(sq) == 14.0);
}

TEST_CASE("simplicity") {
  CHECK(is_simple({{0, 0}, {4, 0}, {4, 4}, {0, 4}}));
  CHECK_FALSE(is_simple({{0, 0}, {4, 4}, {4, 0}, {0, 4}}));
}

TEST_CASE("resampling is uniform in arc length") {
  Polygon sq{{0, 0}, {4, 0}, {4, 4}, {0, 4}};
  Polygon r = resample_closed(sq, 8);
  REQUIRE(r.size() == 8);
  CHECK(r[1] == Point{2, 0});
  CHECK(r[2] == Point{4, 0});
  CHECK(r[5] == Point{2, 4});
}

TEST_CASE("rasterize agrees with point containment") {
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    Polygon p;
    const int n = rng.uniform_int(3, 9);
    for (int k = 0; k < n; ++k) {
      const double a = 2 * M_PI * k / n, r = rng.uniform(3, 12);
      p.push_back({16 + r * std::cos(a), 16 + r * std::sin(a)});
    }
    const auto mask = rasterize(p, 1.0, 0.0, 2.0, 16, 16);
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j)
        CHECK(mask[static_cast<size_t>(i) * 16 + j] == (contains(p, 1.0 + (j + 0.5) * 2, (i + 0.5) * 2) ? 1 : 0));
  }
}

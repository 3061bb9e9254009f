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


#include <limits>

#include "artext/edt.hpp"
#include "artext/error.hpp"
#include "artext/rng.hpp"
#include "doctest.h"

using namespace artext;

TEST_CASE("edt equals brute force on random masks") {
  Rng rng(6);
  for (int t = 0; t < 25; ++t) {
    const int h = rng.uniform_int(1, 20), w = rng.uniform_int(1, 20);
    MaskMap m(h, w);
    const double p = rng.uniform(0.02, 0.5);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) m.set(y, x, rng.bernoulli(p));
    if (m.count() == 0) m.set(0, 0, true);
    const EdtResult r = edt_squared(m);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        int64_t best = std::numeric_limits<int64_t>::max();
        for (int yy = 0; yy < h; ++yy)
          for (int xx = 0; xx < w; ++xx)
            if (m(yy, xx)) best = std::min<int64_t>(best, (y - yy) * (y - yy) + (x - xx) * (x - xx));
        const size_t i = static_cast<size_t>(y) * w + x;
        CHECK(r.squared[i] == best);
        const int ny = r.nearest[i] / w, nx = r.nearest[i] % w;
        CHECK(m(ny, nx) == 1);
        CHECK((ny - y) * (ny - y) + (nx - x) * (nx - x) == best);
      }
  }
}

TEST_CASE("edt of a single pixel and of an empty mask") {
  MaskMap m(3, 4);
  m.set(1, 1, true);
  const auto d = edt(m);
  CHECK(d[0] == doctest::Approx(std::sqrt(2.0)));
  CHECK(d[5] == 0.0);
  CHECK(d[11] == doctest::Approx(std::sqrt(5.0)));
  CHECK_THROWS_AS(edt(MaskMap(2, 2)), Error);
}

TEST_CASE("mask count tracks updates") {
  MaskMap m(2, 2);
  m.set(0, 0, true);
  m.set(0, 0, true);
  m.set(1, 1, true);
  CHECK(m.count() == 2);
  m.set(0, 0, false);
  CHECK(m.count() == 1);
}

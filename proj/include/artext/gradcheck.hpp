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


// Central finite-difference checks of reverse-mode gradients, run in double
// precision.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "artext/rng.hpp"
#include "artext/tensor.hpp"

namespace artext {

struct GradProbe {
  std::string name;
  Tensor<double> tensor;  // must require grad
};

struct GradcheckResult {
  std::string name;
  /// Worst over probes of |analytic - numeric| / max(|analytic|, |numeric|),
  /// norms taken over the checked coordinates of each probe.
  double relative_error = 0.0;
  double max_abs_error = 0.0;
  int coordinates = 0;
  bool passed = false;
};

/// Compares backward() against (f(x + h) - f(x - h)) / 2h on up to
/// `max_coords` random coordinates of every probe. `loss` rebuilds the graph
/// from the probe tensors, whose values are perturbed in place.
GradcheckResult check_gradients(const std::string& name, const std::function<Tensor<double>()>& loss,
                                const std::vector<GradProbe>& probes, double step, int max_coords, Rng& rng,
                                double tolerance = 1e-4);

/// Every differentiable op plus the composed detector loss.
std::vector<GradcheckResult> run_gradcheck_suite(uint64_t seed, double tolerance = 1e-4);

}  // namespace artext

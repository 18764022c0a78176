// Copyright 2026 The Outbreak Wiki Authors.
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

#ifndef OUTBREAK_SRC_LBFGS_H_
#define OUTBREAK_SRC_LBFGS_H_

#include <functional>
#include <span>
#include <vector>

namespace outbreak::detail {

struct LbfgsOptions {
  int max_iterations = 200;
  double gradient_tolerance = 1e-4;
  double objective_tolerance = 1e-8;
  int history = 10;
};

struct LbfgsResult {
  std::vector<double> x;
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_history;
};

// Evaluates f at x and writes its gradient.
using ObjectiveFn = std::function<double(std::span<const double> x, std::span<double> grad)>;

// Limited-memory BFGS with Armijo backtracking. Throws TrainingError when f
// or its gradient is non-finite.
LbfgsResult minimize_lbfgs(const ObjectiveFn &f, std::vector<double> x0,
                           const LbfgsOptions &options);

}  // namespace outbreak::detail

#endif  // OUTBREAK_SRC_LBFGS_H_

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

#include "lbfgs.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "outbreak/error.h"

namespace outbreak::detail {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

struct Pair {
  std::vector<double> s;
  std::vector<double> y;
  double rho;
};

// d = -H g by the two-loop recursion.
std::vector<double> search_direction(const std::deque<Pair> &memory, std::span<const double> g) {
  std::vector<double> q(g.begin(), g.end());
  std::vector<double> alpha(memory.size());
  for (std::size_t i = memory.size(); i-- > 0;) {
    alpha[i] = memory[i].rho * dot(memory[i].s, q);
    for (std::size_t k = 0; k < q.size(); ++k) q[k] -= alpha[i] * memory[i].y[k];
  }
  double gamma = 1.0;
  if (!memory.empty()) {
    const auto &last = memory.back();
    gamma = dot(last.s, last.y) / dot(last.y, last.y);
  }
  for (auto &v : q) v *= gamma;
  for (std::size_t i = 0; i < memory.size(); ++i) {
    double beta = memory[i].rho * dot(memory[i].y, q);
    for (std::size_t k = 0; k < q.size(); ++k) q[k] += (alpha[i] - beta) * memory[i].s[k];
  }
  for (auto &v : q) v = -v;
  return q;
}

}  // namespace

LbfgsResult minimize_lbfgs(const ObjectiveFn &f, std::vector<double> x0,
                           const LbfgsOptions &options) {
  constexpr double kArmijo = 1e-4;
  constexpr int kMaxBacktracks = 50;

  LbfgsResult result;
  std::vector<double> x = std::move(x0);
  std::vector<double> g(x.size());
  double fx = f(x, g);
  if (!std::isfinite(fx) || !all_finite(g)) {
    throw TrainingError("non-finite objective", 0);
  }
  result.objective_history.push_back(fx);

  auto small_gradient = [&](std::span<const double> grad, std::span<const double> at) {
    return norm(grad) / std::max(1.0, norm(at)) <= options.gradient_tolerance;
  };

  std::deque<Pair> memory;
  std::vector<double> x_new(x.size());
  std::vector<double> g_new(x.size());
  int iteration = 0;
  bool converged = small_gradient(g, x);
  while (!converged && iteration < options.max_iterations) {
    ++iteration;
    std::vector<double> d = search_direction(memory, g);
    double slope = dot(g, d);
    if (!(slope < 0.0)) {
      memory.clear();
      d = search_direction(memory, g);
      slope = dot(g, d);
    }
    double step = memory.empty() ? std::min(1.0, 1.0 / norm(g)) : 1.0;

    double f_new = 0.0;
    bool accepted = false;
    for (int k = 0; k < kMaxBacktracks; ++k) {
      for (std::size_t i = 0; i < x.size(); ++i) x_new[i] = x[i] + step * d[i];
      f_new = f(x_new, g_new);
      if (!std::isfinite(f_new) || !all_finite(g_new)) {
        throw TrainingError("non-finite objective", iteration);
      }
      if (f_new <= fx + kArmijo * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      spdlog::debug("line search stalled at iteration {}", iteration);
      --iteration;
      break;
    }

    Pair pair{std::vector<double>(x.size()), std::vector<double>(x.size()), 0.0};
    for (std::size_t i = 0; i < x.size(); ++i) {
      pair.s[i] = x_new[i] - x[i];
      pair.y[i] = g_new[i] - g[i];
    }
    double sy = dot(pair.s, pair.y);
    if (sy > 1e-12 * norm(pair.s) * norm(pair.y)) {
      pair.rho = 1.0 / sy;
      memory.push_back(std::move(pair));
      if (memory.size() > static_cast<std::size_t>(std::max(options.history, 1))) {
        memory.pop_front();
      }
    }

    const double decrease = (fx - f_new) / std::max({std::abs(fx), std::abs(f_new), 1.0});
    std::swap(x, x_new);
    std::swap(g, g_new);
    fx = f_new;
    result.objective_history.push_back(fx);
    converged = small_gradient(g, x) || decrease <= options.objective_tolerance;
  }

  result.x = std::move(x);
  result.iterations = iteration;
  result.converged = converged;
  return result;
}

}  // namespace outbreak::detail

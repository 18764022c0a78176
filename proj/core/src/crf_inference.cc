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

#include <algorithm>
#include <cmath>
#include <limits>

#include "outbreak/crf.h"
#include "outbreak/error.h"

namespace outbreak::crf {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_shape(const Lattice &lattice) {
  if (lattice.length == 0 || lattice.num_labels == 0) {
    throw DomainError("lattice must have at least one position and one label");
  }
  if (lattice.emission.size() != lattice.length * lattice.num_labels ||
      lattice.transition.size() != lattice.num_labels * lattice.num_labels) {
    throw DomainError("lattice score arrays do not match its shape");
  }
}

// log sum exp over values[0..n) with max shift.
double log_sum_exp(const double *values, std::size_t n) {
  double m = kNegInf;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, values[i]);
  if (m == kNegInf) return kNegInf;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += std::exp(values[i] - m);
  return m + std::log(sum);
}

}  // namespace

ForwardBackward log_forward_backward(const Lattice &lattice) {
  check_shape(lattice);
  const std::size_t n = lattice.length;
  const std::size_t L = lattice.num_labels;
  std::vector<double> alpha(n * L);
  std::vector<double> beta(n * L, 0.0);
  std::vector<double> scratch(L);

  for (std::size_t y = 0; y < L; ++y) alpha[y] = lattice.emit(0, y);
  for (std::size_t t = 1; t < n; ++t) {
    for (std::size_t y = 0; y < L; ++y) {
      for (std::size_t p = 0; p < L; ++p) scratch[p] = alpha[(t - 1) * L + p] + lattice.trans(p, y);
      alpha[t * L + y] = lattice.emit(t, y) + log_sum_exp(scratch.data(), L);
    }
  }
  for (std::size_t t = n - 1; t-- > 0;) {
    for (std::size_t y = 0; y < L; ++y) {
      for (std::size_t nx = 0; nx < L; ++nx) {
        scratch[nx] = lattice.trans(y, nx) + lattice.emit(t + 1, nx) + beta[(t + 1) * L + nx];
      }
      beta[t * L + y] = log_sum_exp(scratch.data(), L);
    }
  }

  ForwardBackward fb;
  fb.log_partition = log_sum_exp(alpha.data() + (n - 1) * L, L);
  if (!std::isfinite(fb.log_partition)) {
    throw DomainError("lattice has no finite-scoring path");
  }
  const double z = fb.log_partition;
  fb.marginals.resize(n * L);
  for (std::size_t i = 0; i < n * L; ++i) fb.marginals[i] = std::exp(alpha[i] + beta[i] - z);
  fb.pairwise.resize((n - 1) * L * L);
  for (std::size_t t = 0; t + 1 < n; ++t) {
    for (std::size_t a = 0; a < L; ++a) {
      for (std::size_t b = 0; b < L; ++b) {
        fb.pairwise[(t * L + a) * L + b] =
            std::exp(alpha[t * L + a] + lattice.trans(a, b) + lattice.emit(t + 1, b) +
                     beta[(t + 1) * L + b] - z);
      }
    }
  }
  return fb;
}

Decoded viterbi(const Lattice &lattice) {
  check_shape(lattice);
  const std::size_t n = lattice.length;
  const std::size_t L = lattice.num_labels;
  // best[t][y]: highest score of positions t..n-1 given label y at t.
  std::vector<double> best(n * L);
  for (std::size_t y = 0; y < L; ++y) best[(n - 1) * L + y] = lattice.emit(n - 1, y);
  for (std::size_t t = n - 1; t-- > 0;) {
    for (std::size_t y = 0; y < L; ++y) {
      double m = kNegInf;
      for (std::size_t nx = 0; nx < L; ++nx) {
        m = std::max(m, lattice.trans(y, nx) + best[(t + 1) * L + nx]);
      }
      best[t * L + y] = lattice.emit(t, y) + m;
    }
  }

  // Forward pass keeps the first (smallest) label among equal maxima.
  Decoded out;
  out.labels.resize(n);
  std::size_t arg = 0;
  for (std::size_t y = 1; y < L; ++y) {
    if (best[y] > best[arg]) arg = y;
  }
  out.labels[0] = arg;
  out.score = best[arg];
  for (std::size_t t = 1; t < n; ++t) {
    const std::size_t prev = out.labels[t - 1];
    std::size_t choice = 0;
    double choice_score = lattice.trans(prev, 0) + best[t * L];
    for (std::size_t y = 1; y < L; ++y) {
      double s = lattice.trans(prev, y) + best[t * L + y];
      if (s > choice_score) {
        choice = y;
        choice_score = s;
      }
    }
    out.labels[t] = choice;
  }
  return out;
}

double path_score(const Lattice &lattice, std::span<const std::size_t> labels) {
  if (labels.size() != lattice.length) throw DomainError("path length differs from lattice");
  double score = 0.0;
  for (std::size_t t = 0; t < labels.size(); ++t) {
    if (labels[t] >= lattice.num_labels) throw DomainError("label index out of range");
    score += lattice.emit(t, labels[t]);
    if (t > 0) score += lattice.trans(labels[t - 1], labels[t]);
  }
  return score;
}

void constrain_iob(Lattice &lattice, std::span<const std::string> label_names) {
  if (label_names.size() != lattice.num_labels) {
    throw DomainError("label names do not match the lattice");
  }
  for (std::size_t to = 0; to < label_names.size(); ++to) {
    std::string_view name = label_names[to];
    if (!name.starts_with("I-")) continue;
    std::string_view kind = name.substr(2);
    if (lattice.length > 0) lattice.emit(0, to) = kNegInf;
    for (std::size_t from = 0; from < label_names.size(); ++from) {
      std::string_view prev = label_names[from];
      bool continues = prev.size() > 2 && (prev.starts_with("B-") || prev.starts_with("I-")) &&
                       prev.substr(2) == kind;
      if (!continues) lattice.trans(from, to) = kNegInf;
    }
  }
}

}  // namespace outbreak::crf

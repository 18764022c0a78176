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

#ifndef OUTBREAK_NEREVAL_H_
#define OUTBREAK_NEREVAL_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "outbreak/corpus.h"
#include "outbreak/crf.h"

namespace outbreak::nereval {

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  ConfusionCounts &operator+=(const ConfusionCounts &o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    tn += o.tn;
    return *this;
  }
  bool operator==(const ConfusionCounts &) const = default;
};

// Keyed by every non-O label; B-X and I-X are separate classes.
using LabelCounts = std::map<corpus::Label, ConfusionCounts>;

// Token-level counts. Throws StructureError naming the sentence index when
// the two corpora do not have the same shape.
LabelCounts score_labels(std::span<const corpus::LabeledSentence> gold,
                         std::span<const corpus::LabeledSentence> predicted);

// Sum over all non-O labels (micro total).
ConfusionCounts total(const LabelCounts &counts);

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// 0/0 counts as 0 for each of the three metrics.
Prf precision_recall_f1(const ConfusionCounts &counts);

// Shuffles 0..size-1 with the seed, then deals indices round-robin into k
// folds. Throws DomainError when k < 2 or k > size.
std::vector<std::vector<std::size_t>> k_fold_split(std::size_t size, std::size_t k,
                                                   std::uint64_t seed);

struct LabelMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support = 0;  // tp + fn summed over folds
};

struct MetricsReport {
  std::map<corpus::Label, LabelMetrics> per_label;
  Prf aggregate;                 // mean of per-fold micro P/R/F1
  std::vector<Prf> fold_aggregates;
  std::size_t folds = 0;
  std::uint64_t seed = 0;
  crf::FeatureConfig config;
};

struct CvOptions {
  std::size_t k = 10;
  std::uint64_t seed = 1;
  crf::TrainOptions train;
  unsigned jobs = 1;  // folds trained concurrently
};

// Trains on k-1 folds, tags the held-out fold with IOB-constrained Viterbi,
// and averages per-fold metrics with equal weight. Training errors are
// rethrown with the fold index.
MetricsReport cross_validate(std::span<const corpus::LabeledSentence> corpus,
                             const crf::FeatureConfig &config, const CvOptions &options);

struct SweepRow {
  int max_ngram_len = 0;
  Prf metrics;
  double seconds = 0.0;
};

std::vector<SweepRow> sweep_ngram(std::span<const corpus::LabeledSentence> corpus,
                                  const crf::FeatureConfig &base,
                                  const CvOptions &options, int from, int to);

std::string metrics_report_json(const MetricsReport &report);
// Columns: max_ngram_len,precision,recall,f1
std::string sweep_csv(std::span<const SweepRow> rows);
std::string sweep_json(std::span<const SweepRow> rows);

}  // namespace outbreak::nereval

#endif  // OUTBREAK_NEREVAL_H_

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

#ifndef OUTBREAK_CRF_H_
#define OUTBREAK_CRF_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "outbreak/corpus.h"

namespace outbreak::crf {

struct FeatureConfig {
  int max_ngram_len = 6;   // character n-grams of the current token, 1..cap
  int window = 2;          // token identity / POS context offsets
  bool use_pos = true;
  bool use_shape = true;   // digit and capitalization classes
  double l2_lambda = 1.0;

  // Throws DomainError outside max_ngram_len in [1, 12], window >= 0,
  // l2_lambda >= 0.
  void validate() const;
  bool operator==(const FeatureConfig &) const = default;
};

// Observation features of one position. Names are offset-tagged:
//   w[-1]=of  p[0]=NUM  shape=all-digits  ng=ca
// Positions outside the sentence read as __BOS__ / __EOS__. The result is
// sorted and free of duplicates.
std::vector<std::string> extract_features(std::span<const std::string> tokens,
                                          std::span<const std::string> pos,
                                          std::size_t position,
                                          const FeatureConfig &config);

// Word-shape class of a token: all-digits, numeric, all-caps, init-cap,
// lower, mixed, punct or other.
std::string_view word_shape(std::string_view token);

// ---------------------------------------------------------------------------
// Inference over a score lattice. A sequence of length n over L labels is
// scored as sum_t emission(t, y_t) + sum_t transition(y_{t-1}, y_t). Entries
// may be -infinity to forbid a label or a transition.

struct Lattice {
  std::size_t length = 0;
  std::size_t num_labels = 0;
  std::vector<double> emission;    // length * num_labels
  std::vector<double> transition;  // num_labels * num_labels, [from][to]

  Lattice() = default;
  Lattice(std::size_t length, std::size_t num_labels)
      : length(length),
        num_labels(num_labels),
        emission(length * num_labels, 0.0),
        transition(num_labels * num_labels, 0.0) {}

  double &emit(std::size_t t, std::size_t y) { return emission[t * num_labels + y]; }
  double emit(std::size_t t, std::size_t y) const {
    return emission[t * num_labels + y];
  }
  double &trans(std::size_t from, std::size_t to) {
    return transition[from * num_labels + to];
  }
  double trans(std::size_t from, std::size_t to) const {
    return transition[from * num_labels + to];
  }
};

struct ForwardBackward {
  double log_partition = 0.0;
  std::vector<double> marginals;  // length * L
  std::vector<double> pairwise;   // (length - 1) * L * L, [t][from][to]
};

// Log-space forward-backward. Requires length >= 1.
ForwardBackward log_forward_backward(const Lattice &lattice);

struct Decoded {
  std::vector<std::size_t> labels;
  double score = 0.0;
};

// Highest-scoring path. Among equal-scoring paths the one that is
// lexicographically smallest in label index, read from the first position,
// wins.
Decoded viterbi(const Lattice &lattice);

double path_score(const Lattice &lattice, std::span<const std::size_t> labels);

// Forbids I-X at the first position and after anything other than B-X/I-X.
void constrain_iob(Lattice &lattice, std::span<const std::string> label_names);

// ---------------------------------------------------------------------------
// Training objective over integer-encoded data. Weights are laid out as
// emission[f * L + y] followed by transition[from * L + to].

struct EncodedSequence {
  std::vector<std::vector<std::uint32_t>> features;  // per position
  std::vector<std::uint32_t> labels;
};

inline std::size_t weight_count(std::size_t num_features, std::size_t num_labels) {
  return num_features * num_labels + num_labels * num_labels;
}

Lattice build_lattice(std::span<const double> weights, std::size_t num_features,
                      std::size_t num_labels,
                      const std::vector<std::vector<std::uint32_t>> &features);

struct Objective {
  double value = 0.0;
  std::vector<double> gradient;
};

// -sum log p(y|x; w) + lambda/2 |w|^2 and its gradient. Sequences are
// reduced in input order.
Objective nll_and_gradient(std::span<const double> weights,
                           std::size_t num_features, std::size_t num_labels,
                           std::span<const EncodedSequence> data, double lambda);

// ---------------------------------------------------------------------------

class CrfModel {
 public:
  CrfModel() = default;
  // Zero weights. Labels must be in decoding order; feature names unique.
  CrfModel(std::vector<std::string> labels, std::vector<std::string> feature_names,
           FeatureConfig config);

  const std::vector<std::string> &labels() const { return labels_; }
  const std::vector<std::string> &feature_names() const { return feature_names_; }
  const FeatureConfig &config() const { return config_; }
  std::size_t num_labels() const { return labels_.size(); }
  std::size_t num_features() const { return feature_names_.size(); }

  std::span<const double> weights() const { return weights_; }
  std::span<double> mutable_weights() { return weights_; }

  double &emission_weight(std::size_t feature, std::size_t label) {
    return weights_[feature * labels_.size() + label];
  }
  double &transition_weight(std::size_t from, std::size_t to) {
    return weights_[feature_names_.size() * labels_.size() + from * labels_.size() + to];
  }

  // -1 when unknown.
  std::int64_t feature_id(std::string_view name) const;
  std::int64_t label_id(std::string_view name) const;

  // Features the model has never seen are dropped.
  std::vector<std::vector<std::uint32_t>> encode(
      std::span<const std::string> tokens, std::span<const std::string> pos) const;
  Lattice lattice(std::span<const std::string> tokens,
                  std::span<const std::string> pos) const;

  bool operator==(const CrfModel &other) const;

 private:
  std::vector<std::string> labels_;
  std::vector<std::string> feature_names_;
  std::unordered_map<std::string, std::uint32_t> feature_index_;
  std::vector<double> weights_;
  FeatureConfig config_;
};

std::vector<std::string> ner_label_names();

struct LabeledSequence {
  std::vector<std::string> tokens;
  std::vector<std::string> pos;
  std::vector<std::string> labels;
};

std::vector<LabeledSequence> to_sequences(std::span<const corpus::LabeledSentence> corpus);

// Model-level objective; unknown features are dropped, labels must belong
// to the model. Throws DomainError on an unknown label.
Objective nll_and_gradient(const CrfModel &model,
                           std::span<const LabeledSequence> dataset);

struct TrainOptions {
  int max_iterations = 200;
  double gradient_tolerance = 1e-4;  // on |g| / max(1, |w|)
  double objective_tolerance = 1e-8; // relative decrease over one step
  int history = 10;                  // L-BFGS memory
};

struct TrainReport {
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_history;  // initial value, then one per accepted step
};

// L-BFGS on the regularized NLL from zero weights. The feature dictionary
// is every feature observed in the dataset, in first-seen order.
// Deterministic for a fixed dataset order. Throws DomainError on an empty
// dataset or unknown label and TrainingError on a non-finite objective.
CrfModel train(std::span<const LabeledSequence> dataset, const FeatureConfig &config,
               const TrainOptions &options = {},
               std::vector<std::string> labels = ner_label_names(),
               TrainReport *report = nullptr);

struct EntitySpan {
  std::string type;
  std::size_t start = 0;  // token indices, inclusive
  std::size_t end = 0;

  bool operator==(const EntitySpan &) const = default;
};

// B-X opens a span, I-X extends an open X span, O or any B- closes. A
// dangling I-X throws StructureError in strict mode and opens a span in
// lenient mode.
std::vector<EntitySpan> spans_from_iob(std::span<const std::string> labels,
                                       corpus::IobMode mode = corpus::IobMode::kStrict);

struct TagResult {
  std::vector<std::string> labels;
  std::vector<EntitySpan> spans;
  double score = 0.0;  // log p(labels | tokens)
};

TagResult viterbi(const CrfModel &model, std::span<const std::string> tokens,
                  std::span<const std::string> pos, bool constrain = true);

// Line-based text format, see model file notes in the README.
void save_model(std::ostream &out, const CrfModel &model);
void save_model(const std::filesystem::path &path, const CrfModel &model);
// Throws LoadError on version mismatch, unknown labels, non-finite weights.
CrfModel load_model(std::istream &in);
CrfModel load_model(const std::filesystem::path &path);

inline constexpr int kModelFormatVersion = 1;

}  // namespace outbreak::crf

#endif  // OUTBREAK_CRF_H_

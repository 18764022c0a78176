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

#include <spdlog/spdlog.h>

#include <unordered_map>

#include "lbfgs.h"
#include "outbreak/crf.h"
#include "outbreak/error.h"

namespace outbreak::crf {

namespace {

std::unordered_map<std::string_view, std::uint32_t> label_index(
    const std::vector<std::string> &labels) {
  std::unordered_map<std::string_view, std::uint32_t> index;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!index.emplace(labels[i], static_cast<std::uint32_t>(i)).second) {
      throw DomainError("duplicate label '" + labels[i] + "'");
    }
  }
  return index;
}

std::vector<std::uint32_t> encode_labels(
    const LabeledSequence &seq,
    const std::unordered_map<std::string_view, std::uint32_t> &index) {
  std::vector<std::uint32_t> out;
  out.reserve(seq.labels.size());
  for (const auto &label : seq.labels) {
    auto it = index.find(label);
    if (it == index.end()) throw DomainError("unknown label '" + label + "'");
    out.push_back(it->second);
  }
  return out;
}

void check_aligned(const LabeledSequence &seq) {
  if (seq.labels.size() != seq.tokens.size() || seq.pos.size() != seq.tokens.size()) {
    throw DomainError("tokens, POS tags and labels are not aligned");
  }
}

// Adds one sequence's NLL term and gradient; returns -log p(y|x).
double accumulate_sequence(std::span<const double> weights, std::size_t F, std::size_t L,
                           const EncodedSequence &seq, std::span<double> grad) {
  const std::size_t n = seq.features.size();
  if (n == 0) return 0.0;
  if (seq.labels.size() != n) throw DomainError("sequence labels and features differ in length");
  for (auto y : seq.labels) {
    if (y >= L) throw DomainError("label index out of range");
  }
  Lattice lattice = build_lattice(weights, F, L, seq.features);
  ForwardBackward fb = log_forward_backward(lattice);
  std::vector<std::size_t> gold(seq.labels.begin(), seq.labels.end());
  const double term = fb.log_partition - path_score(lattice, gold);

  const std::size_t trans_base = F * L;
  for (std::size_t t = 0; t < n; ++t) {
    for (auto f : seq.features[t]) {
      double *row = grad.data() + static_cast<std::size_t>(f) * L;
      for (std::size_t y = 0; y < L; ++y) row[y] += fb.marginals[t * L + y];
      row[gold[t]] -= 1.0;
    }
    if (t > 0) {
      const double *pair = fb.pairwise.data() + (t - 1) * L * L;
      for (std::size_t k = 0; k < L * L; ++k) grad[trans_base + k] += pair[k];
      grad[trans_base + gold[t - 1] * L + gold[t]] -= 1.0;
    }
  }
  return term;
}

}  // namespace

Lattice build_lattice(std::span<const double> weights, std::size_t num_features,
                      std::size_t num_labels,
                      const std::vector<std::vector<std::uint32_t>> &features) {
  if (weights.size() != weight_count(num_features, num_labels)) {
    throw DomainError("weight vector size does not match features and labels");
  }
  Lattice lattice(features.size(), num_labels);
  for (std::size_t t = 0; t < features.size(); ++t) {
    double *row = lattice.emission.data() + t * num_labels;
    for (auto f : features[t]) {
      if (f >= num_features) throw DomainError("feature index out of range");
      const double *w = weights.data() + static_cast<std::size_t>(f) * num_labels;
      for (std::size_t y = 0; y < num_labels; ++y) row[y] += w[y];
    }
  }
  const double *trans = weights.data() + num_features * num_labels;
  std::copy(trans, trans + num_labels * num_labels, lattice.transition.begin());
  return lattice;
}

Objective nll_and_gradient(std::span<const double> weights, std::size_t num_features,
                           std::size_t num_labels, std::span<const EncodedSequence> data,
                           double lambda) {
  if (weights.size() != weight_count(num_features, num_labels)) {
    throw DomainError("weight vector size does not match features and labels");
  }
  Objective obj;
  obj.gradient.assign(weights.size(), 0.0);
  for (const auto &seq : data) {
    obj.value += accumulate_sequence(weights, num_features, num_labels, seq, obj.gradient);
  }
  double sq = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    sq += weights[i] * weights[i];
    obj.gradient[i] += lambda * weights[i];
  }
  obj.value += 0.5 * lambda * sq;
  return obj;
}

std::vector<std::string> ner_label_names() {
  std::vector<std::string> out;
  for (auto label : corpus::all_labels()) out.emplace_back(corpus::label_name(label));
  return out;
}

std::vector<LabeledSequence> to_sequences(std::span<const corpus::LabeledSentence> corpus) {
  std::vector<LabeledSequence> out;
  out.reserve(corpus.size());
  for (const auto &sentence : corpus) {
    LabeledSequence seq;
    for (const auto &tok : sentence) {
      seq.tokens.push_back(tok.token);
      seq.pos.push_back(tok.pos);
      seq.labels.emplace_back(corpus::label_name(tok.label));
    }
    out.push_back(std::move(seq));
  }
  return out;
}

Objective nll_and_gradient(const CrfModel &model, std::span<const LabeledSequence> dataset) {
  auto index = label_index(model.labels());
  std::vector<EncodedSequence> data;
  data.reserve(dataset.size());
  for (const auto &seq : dataset) {
    check_aligned(seq);
    data.push_back({model.encode(seq.tokens, seq.pos), encode_labels(seq, index)});
  }
  return nll_and_gradient(model.weights(), model.num_features(), model.num_labels(), data,
                          model.config().l2_lambda);
}

CrfModel train(std::span<const LabeledSequence> dataset, const FeatureConfig &config,
               const TrainOptions &options, std::vector<std::string> labels,
               TrainReport *report) {
  config.validate();
  if (dataset.empty()) throw DomainError("training set is empty");
  if (labels.empty()) throw DomainError("label set is empty");
  auto index = label_index(labels);

  std::vector<std::string> names;
  std::unordered_map<std::string, std::uint32_t> feature_ids;
  std::vector<EncodedSequence> data;
  data.reserve(dataset.size());
  for (const auto &seq : dataset) {
    check_aligned(seq);
    EncodedSequence enc;
    enc.labels = encode_labels(seq, index);
    for (std::size_t t = 0; t < seq.tokens.size(); ++t) {
      std::vector<std::uint32_t> ids;
      for (auto &name : extract_features(seq.tokens, seq.pos, t, config)) {
        auto [it, inserted] =
            feature_ids.try_emplace(name, static_cast<std::uint32_t>(names.size()));
        if (inserted) names.push_back(name);
        ids.push_back(it->second);
      }
      enc.features.push_back(std::move(ids));
    }
    data.push_back(std::move(enc));
  }

  const std::size_t F = names.size();
  const std::size_t L = labels.size();
  spdlog::debug("training CRF: {} sequences, {} features, {} labels", data.size(), F, L);
  detail::LbfgsOptions lbfgs{options.max_iterations, options.gradient_tolerance,
                             options.objective_tolerance, options.history};
  auto objective = [&](std::span<const double> w, std::span<double> grad) {
    Objective obj = nll_and_gradient(w, F, L, data, config.l2_lambda);
    std::copy(obj.gradient.begin(), obj.gradient.end(), grad.begin());
    return obj.value;
  };
  auto result =
      detail::minimize_lbfgs(objective, std::vector<double>(weight_count(F, L), 0.0), lbfgs);
  spdlog::debug("training finished after {} iterations, objective {}", result.iterations,
                result.objective_history.back());

  CrfModel model(std::move(labels), std::move(names), config);
  std::copy(result.x.begin(), result.x.end(), model.mutable_weights().begin());
  if (report) {
    report->iterations = result.iterations;
    report->converged = result.converged;
    report->objective_history = std::move(result.objective_history);
  }
  return model;
}

std::vector<EntitySpan> spans_from_iob(std::span<const std::string> labels,
                                       corpus::IobMode mode) {
  std::vector<EntitySpan> spans;
  std::optional<EntitySpan> open;
  auto close = [&] {
    if (open) spans.push_back(*open);
    open.reset();
  };
  for (std::size_t i = 0; i < labels.size(); ++i) {
    std::string_view label = labels[i];
    if (label == "O") {
      close();
      continue;
    }
    if (label.size() < 3 || !(label.starts_with("B-") || label.starts_with("I-"))) {
      throw DomainError("not an IOB label: '" + std::string(label) + "'");
    }
    std::string type(label.substr(2));
    if (label.starts_with("I-") && open && open->type == type) {
      open->end = i;
      continue;
    }
    if (label.starts_with("I-") && mode == corpus::IobMode::kStrict) {
      throw StructureError("dangling " + std::string(label) + " at position " + std::to_string(i),
                           i);
    }
    close();
    open = EntitySpan{std::move(type), i, i};
  }
  close();
  return spans;
}

TagResult viterbi(const CrfModel &model, std::span<const std::string> tokens,
                  std::span<const std::string> pos, bool constrain) {
  TagResult result;
  if (tokens.empty()) return result;
  Lattice lattice = model.lattice(tokens, pos);
  Decoded decoded;
  if (constrain) {
    Lattice constrained = lattice;
    constrain_iob(constrained, model.labels());
    decoded = viterbi(constrained);
  } else {
    decoded = viterbi(lattice);
  }
  result.score = path_score(lattice, decoded.labels) - log_forward_backward(lattice).log_partition;
  for (auto y : decoded.labels) result.labels.push_back(model.labels()[y]);
  result.spans = spans_from_iob(result.labels, corpus::IobMode::kLenient);
  return result;
}

}  // namespace outbreak::crf

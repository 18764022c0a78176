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

#include <atomic>
#include <chrono>
#include <exception>
#include "json.hpp"
#include <random>
#include <thread>

#include "outbreak/error.h"
#include "outbreak/nereval.h"
#include "outbreak/report.h"
#include "rng.h"

namespace outbreak::nereval {

namespace {

using corpus::Label;
using corpus::LabeledSentence;

struct FoldResult {
  LabelCounts counts;
  std::exception_ptr error;
};

FoldResult run_fold(std::span<const LabeledSentence> corpus,
                    const std::vector<std::vector<std::size_t>> &folds, std::size_t held_out,
                    const crf::FeatureConfig &config, const crf::TrainOptions &options) {
  std::vector<LabeledSentence> train_set;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    if (f == held_out) continue;
    for (auto i : folds[f]) train_set.push_back(corpus[i]);
  }
  auto model = crf::train(crf::to_sequences(train_set), config, options);

  std::vector<LabeledSentence> gold;
  std::vector<LabeledSentence> predicted;
  for (auto i : folds[held_out]) {
    const auto &sentence = corpus[i];
    std::vector<std::string> tokens, pos;
    for (const auto &tok : sentence) {
      tokens.push_back(tok.token);
      pos.push_back(tok.pos);
    }
    auto tagged = crf::viterbi(model, tokens, pos, /*constrain=*/true);
    LabeledSentence out = sentence;
    for (std::size_t t = 0; t < out.size(); ++t) out[t].label = *corpus::parse_label(tagged.labels[t]);
    gold.push_back(sentence);
    predicted.push_back(std::move(out));
  }
  return {score_labels(gold, predicted), nullptr};
}

[[noreturn]] void rethrow_with_fold(std::exception_ptr error, std::size_t fold) {
  const std::string prefix = "fold " + std::to_string(fold) + ": ";
  try {
    std::rethrow_exception(error);
  } catch (const TrainingError &e) {
    throw TrainingError(prefix + e.message(), e.iteration());
  } catch (const DomainError &e) {
    throw DomainError(prefix + e.what());
  } catch (const Error &e) {
    throw Error(prefix + e.what());
  }
}

nlohmann::ordered_json prf_json(const Prf &p) {
  return {{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}};
}

}  // namespace

LabelCounts score_labels(std::span<const LabeledSentence> gold,
                         std::span<const LabeledSentence> predicted) {
  if (gold.size() != predicted.size()) {
    throw StructureError("gold has " + std::to_string(gold.size()) + " sentences, prediction " +
                             std::to_string(predicted.size()),
                         std::min(gold.size(), predicted.size()));
  }
  LabelCounts counts;
  for (auto label : corpus::all_labels()) {
    if (label != Label::kO) counts[label] = {};
  }
  for (std::size_t s = 0; s < gold.size(); ++s) {
    if (gold[s].size() != predicted[s].size()) {
      throw StructureError("sentence " + std::to_string(s) + " differs in token count", s);
    }
    for (std::size_t t = 0; t < gold[s].size(); ++t) {
      if (gold[s][t].token != predicted[s][t].token) {
        throw StructureError("sentence " + std::to_string(s) + " differs at token " +
                                 std::to_string(t),
                             s);
      }
      const Label g = gold[s][t].label;
      const Label p = predicted[s][t].label;
      for (auto &[label, c] : counts) {
        if (g == label && p == label) {
          ++c.tp;
        } else if (p == label) {
          ++c.fp;
        } else if (g == label) {
          ++c.fn;
        } else {
          ++c.tn;
        }
      }
    }
  }
  return counts;
}

ConfusionCounts total(const LabelCounts &counts) {
  ConfusionCounts sum;
  for (const auto &[label, c] : counts) {
    if (label != Label::kO) sum += c;
  }
  return sum;
}

Prf precision_recall_f1(const ConfusionCounts &c) {
  Prf m;
  if (c.tp + c.fp > 0) m.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  if (c.tp + c.fn > 0) m.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  if (m.precision + m.recall > 0) {
    m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  }
  return m;
}

std::vector<std::vector<std::size_t>> k_fold_split(std::size_t size, std::size_t k,
                                                   std::uint64_t seed) {
  if (k < 2) throw DomainError("k must be at least 2");
  if (k > size) {
    throw DomainError("k = " + std::to_string(k) + " exceeds corpus size " +
                      std::to_string(size));
  }
  std::vector<std::size_t> order(size);
  for (std::size_t i = 0; i < size; ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  detail::shuffle(std::span<std::size_t>(order), rng);
  std::vector<std::vector<std::size_t>> folds(k);
  for (std::size_t i = 0; i < size; ++i) folds[i % k].push_back(order[i]);
  return folds;
}

MetricsReport cross_validate(std::span<const LabeledSentence> corpus,
                             const crf::FeatureConfig &config, const CvOptions &options) {
  config.validate();
  auto folds = k_fold_split(corpus.size(), options.k, options.seed);
  std::vector<FoldResult> results(folds.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t f = next++; f < folds.size(); f = next++) {
      try {
        results[f] = run_fold(corpus, folds, f, config, options.train);
      } catch (...) {
        results[f].error = std::current_exception();
      }
      spdlog::debug("fold {} of {} done", f + 1, folds.size());
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, folds.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (unsigned j = 0; j < jobs; ++j) threads.emplace_back(worker);
    for (auto &t : threads) t.join();
  }
  for (std::size_t f = 0; f < results.size(); ++f) {
    if (results[f].error) rethrow_with_fold(results[f].error, f);
  }

  MetricsReport report;
  report.folds = folds.size();
  report.seed = options.seed;
  report.config = config;
  const double k = static_cast<double>(folds.size());
  for (const auto &r : results) {
    Prf fold = precision_recall_f1(total(r.counts));
    report.fold_aggregates.push_back(fold);
    report.aggregate.precision += fold.precision;
    report.aggregate.recall += fold.recall;
    report.aggregate.f1 += fold.f1;
    for (const auto &[label, c] : r.counts) {
      Prf m = precision_recall_f1(c);
      auto &out = report.per_label[label];
      out.precision += m.precision;
      out.recall += m.recall;
      out.f1 += m.f1;
      out.support += c.tp + c.fn;
    }
  }
  report.aggregate.precision /= k;
  report.aggregate.recall /= k;
  report.aggregate.f1 /= k;
  for (auto &[label, m] : report.per_label) {
    m.precision /= k;
    m.recall /= k;
    m.f1 /= k;
  }
  return report;
}

std::vector<SweepRow> sweep_ngram(std::span<const LabeledSentence> corpus,
                                  const crf::FeatureConfig &base, const CvOptions &options,
                                  int from, int to) {
  if (from > to) throw DomainError("sweep range is empty");
  std::vector<SweepRow> rows;
  for (int cap = from; cap <= to; ++cap) {
    crf::FeatureConfig config = base;
    config.max_ngram_len = cap;
    auto start = std::chrono::steady_clock::now();
    MetricsReport report = cross_validate(corpus, config, options);
    std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    spdlog::info("max_ngram_len={} F1={:.4f} ({:.1f}s)", cap, report.aggregate.f1,
                 elapsed.count());
    rows.push_back({cap, report.aggregate, elapsed.count()});
  }
  return rows;
}

std::string metrics_report_json(const MetricsReport &report) {
  nlohmann::ordered_json j;
  j["folds"] = report.folds;
  j["seed"] = report.seed;
  j["config"] = {{"max_ngram_len", report.config.max_ngram_len},
                 {"window", report.config.window},
                 {"use_pos", report.config.use_pos},
                 {"use_shape", report.config.use_shape},
                 {"l2_lambda", report.config.l2_lambda}};
  j["aggregate"] = prf_json(report.aggregate);
  nlohmann::ordered_json per_label = nlohmann::ordered_json::object();
  for (const auto &[label, m] : report.per_label) {
    per_label[std::string(corpus::label_name(label))] = {{"precision", m.precision},
                                                         {"recall", m.recall},
                                                         {"f1", m.f1},
                                                         {"support", m.support}};
  }
  j["per_label"] = per_label;
  nlohmann::ordered_json folds = nlohmann::ordered_json::array();
  for (const auto &f : report.fold_aggregates) folds.push_back(prf_json(f));
  j["fold_aggregates"] = folds;
  return j.dump(2) + "\n";
}

std::string sweep_csv(std::span<const SweepRow> rows) {
  std::string out = "max_ngram_len,precision,recall,f1\n";
  for (const auto &r : rows) {
    out += std::to_string(r.max_ngram_len) + "," + report::format_double(r.metrics.precision) +
           "," + report::format_double(r.metrics.recall) + "," +
           report::format_double(r.metrics.f1) + "\n";
  }
  return out;
}

std::string sweep_json(std::span<const SweepRow> rows) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto &r : rows) {
    j.push_back({{"max_ngram_len", r.max_ngram_len},
                 {"precision", r.metrics.precision},
                 {"recall", r.metrics.recall},
                 {"f1", r.metrics.f1},
                 {"seconds", r.seconds}});
  }
  return j.dump(2) + "\n";
}

}  // namespace outbreak::nereval

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
#include <numeric>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.h"
#include "outbreak/crf.h"
#include "outbreak/error.h"
#include "support.h"

using namespace outbreak;
using namespace outbreak::crf;
using outbreak::testing::brute_force;
using outbreak::testing::random_lattice;

namespace {

using Strings = std::vector<std::string>;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1.0});
}

FeatureConfig bare_config(int max_ngram) {
  FeatureConfig c;
  c.max_ngram_len = max_ngram;
  c.window = 0;
  c.use_pos = false;
  c.use_shape = false;
  c.l2_lambda = 0.0;
  return c;
}

// Sentences of filler words with "died" labelled B-DEATHS.
std::vector<LabeledSequence> died_corpus(std::size_t count, std::uint64_t seed) {
  const Strings filler = {"the", "patient", "in", "Guinea", "later", "a", "nurse", "who",
                          "had", "been", "treated", "at", "home", "quickly"};
  std::mt19937_64 rng(seed);
  std::vector<LabeledSequence> out;
  for (std::size_t i = 0; i < count; ++i) {
    LabeledSequence s;
    std::size_t len = 3 + rng() % 5;
    std::size_t died_at = rng() % len;
    for (std::size_t t = 0; t < len; ++t) {
      bool died = t == died_at;
      s.tokens.push_back(died ? "died" : filler[rng() % filler.size()]);
      s.labels.push_back(died ? "B-DEATHS" : "O");
    }
    s.pos = corpus::pos_tag(s.tokens);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

TEST_CASE("n-gram and identity features of a single token") {
  Strings tokens = {"cases"};
  Strings pos = {"NOUN"};
  auto features = extract_features(tokens, pos, 0, bare_config(2));
  Strings expected = {"ng=a", "ng=as", "ng=c", "ng=ca", "ng=e", "ng=es", "ng=s", "ng=se",
                      "w[0]=cases"};
  std::sort(expected.begin(), expected.end());
  CHECK(features == expected);
}

TEST_CASE("window zero features depend only on the current token") {
  auto config = bare_config(4);
  Strings a = {"many", "cases", "."};
  Strings b = {"few", "cases", "today"};
  Strings pa = {"ADJ", "NOUN", "PUNCT"};
  Strings pb = {"ADJ", "NOUN", "ADV"};
  CHECK(extract_features(a, pa, 1, config) == extract_features(b, pb, 1, config));
}

TEST_CASE("context pos and shape features") {
  FeatureConfig config;
  config.max_ngram_len = 1;
  config.window = 1;
  config.use_pos = true;
  config.use_shape = true;
  Strings tokens = {"45", "died"};
  Strings pos = {"NUM", "VERB"};
  auto f = extract_features(tokens, pos, 0, config);
  auto has = [&](const std::string &name) { return std::binary_search(f.begin(), f.end(), name); };
  CHECK(has("shape=all-digits"));
  CHECK(has("w[-1]=__BOS__"));
  CHECK(has("w[1]=died"));
  CHECK(has("p[0]=NUM"));
  CHECK(has("p[1]=VERB"));
  CHECK(std::adjacent_find(f.begin(), f.end()) == f.end());
  CHECK(std::is_sorted(f.begin(), f.end()));
}

TEST_CASE("word shapes") {
  CHECK(word_shape("45") == "all-digits");
  CHECK(word_shape("16,000") == "numeric");
  CHECK(word_shape("WHO") == "all-caps");
  CHECK(word_shape("Guinea") == "init-cap");
  CHECK(word_shape("cases") == "lower");
  CHECK(word_shape("iPhone") == "mixed");
  CHECK(word_shape(".") == "punct");
}

TEST_CASE("feature config validation") {
  FeatureConfig c;
  c.max_ngram_len = 0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.max_ngram_len = 13;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = FeatureConfig{};
  c.window = -1;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = FeatureConfig{};
  c.l2_lambda = -0.5;
  CHECK_THROWS_AS(c.validate(), DomainError);
  CHECK_NOTHROW(FeatureConfig{}.validate());
}

TEST_CASE("zero weights give a uniform model") {
  for (std::size_t n = 1; n <= 6; ++n) {
    Lattice lattice(n, 7);
    auto fb = log_forward_backward(lattice);
    CHECK(close_rel(fb.log_partition, static_cast<double>(n) * std::log(7.0), 1e-12));
    for (double m : fb.marginals) CHECK(m == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
    auto best = viterbi(lattice);
    CHECK(best.labels == std::vector<std::size_t>(n, 0));
  }
}

TEST_CASE("single token marginals are the emission softmax") {
  std::mt19937_64 rng(2);
  auto lattice = random_lattice(rng, 1, 5);
  auto fb = log_forward_backward(lattice);
  double z = 0.0;
  for (std::size_t y = 0; y < 5; ++y) z += std::exp(lattice.emit(0, y));
  for (std::size_t y = 0; y < 5; ++y) {
    CHECK(fb.marginals[y] == doctest::Approx(std::exp(lattice.emit(0, y)) / z).epsilon(1e-12));
  }
  CHECK(fb.pairwise.empty());
}

TEST_CASE("partition function and marginals match brute force") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t labels = 1 + rng() % 4;
    std::size_t length = 1 + rng() % 6;
    auto lattice = random_lattice(rng, length, labels, 3.0);
    auto fb = log_forward_backward(lattice);
    auto oracle = brute_force(lattice);
    CHECK(close_rel(fb.log_partition, oracle.log_partition, 1e-9));
    for (std::size_t i = 0; i < fb.marginals.size(); ++i) {
      CHECK(std::abs(fb.marginals[i] - oracle.marginals[i]) <= 1e-9);
    }
    for (std::size_t i = 0; i < fb.pairwise.size(); ++i) {
      CHECK(std::abs(fb.pairwise[i] - oracle.pairwise[i]) <= 1e-9);
    }
  }
}

TEST_CASE("marginals normalize and pairwise sums recover unaries") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t L = 1 + rng() % 7;
    std::size_t n = 1 + rng() % 12;
    auto lattice = random_lattice(rng, n, L, 5.0);
    auto fb = log_forward_backward(lattice);
    for (std::size_t t = 0; t < n; ++t) {
      double sum = 0.0;
      for (std::size_t y = 0; y < L; ++y) sum += fb.marginals[t * L + y];
      CHECK(std::abs(sum - 1.0) <= 1e-9);
    }
    for (std::size_t t = 0; t + 1 < n; ++t) {
      for (std::size_t a = 0; a < L; ++a) {
        double from = 0.0;
        for (std::size_t b = 0; b < L; ++b) from += fb.pairwise[(t * L + a) * L + b];
        CHECK(std::abs(from - fb.marginals[t * L + a]) <= 1e-9);
      }
      for (std::size_t b = 0; b < L; ++b) {
        double to = 0.0;
        for (std::size_t a = 0; a < L; ++a) to += fb.pairwise[(t * L + a) * L + b];
        CHECK(std::abs(to - fb.marginals[(t + 1) * L + b]) <= 1e-9);
      }
    }
  }
}

TEST_CASE("forward backward stays finite for large scores") {
  Lattice lattice(4, 3);
  for (double &e : lattice.emission) e = 800.0;
  lattice.emit(2, 1) = -900.0;
  auto fb = log_forward_backward(lattice);
  CHECK(std::isfinite(fb.log_partition));
  for (double m : fb.marginals) CHECK(std::isfinite(m));
}

TEST_CASE("fully forbidden lattice raises a domain error") {
  Lattice lattice(2, 2);
  for (double &t : lattice.transition) t = kNegInf;
  CHECK_THROWS_AS(log_forward_backward(lattice), DomainError);
}

TEST_CASE("viterbi matches exhaustive search on 500 random instances") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t labels = 1 + rng() % 5;
    std::size_t length = 1 + rng() % 6;
    auto lattice = random_lattice(rng, length, labels);
    auto decoded = viterbi(lattice);
    auto oracle = brute_force(lattice);
    CHECK(close_rel(decoded.score, oracle.best_score, 1e-12));
    CHECK(close_rel(path_score(lattice, decoded.labels), oracle.best_score, 1e-12));
  }
}

TEST_CASE("viterbi ties resolve to the smallest label order") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t labels = 1 + rng() % 4;
    std::size_t length = 1 + rng() % 5;
    auto lattice = random_lattice(rng, length, labels, 1.0, true);
    auto decoded = viterbi(lattice);
    auto oracle = brute_force(lattice);
    CHECK(decoded.score == oracle.best_score);
    CHECK(decoded.labels == oracle.best_path);
  }
}

TEST_CASE("constrained decoding always yields valid IOB") {
  const auto names = ner_label_names();
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t length = 1 + rng() % 4;
    auto lattice = random_lattice(rng, length, names.size(), 3.0);
    constrain_iob(lattice, names);
    auto decoded = viterbi(lattice);
    auto oracle = brute_force(lattice);
    CHECK(close_rel(decoded.score, oracle.best_score, 1e-12));
    Strings labels;
    for (auto y : decoded.labels) labels.push_back(names[y]);
    CHECK_NOTHROW(spans_from_iob(labels, corpus::IobMode::kStrict));
  }
}

TEST_CASE("label order") {
  CHECK(ner_label_names() == Strings{"O", "B-DEATHS", "B-HOSPITALIZATIONS", "B-INFECTIONS",
                                     "I-DEATHS", "I-HOSPITALIZATIONS", "I-INFECTIONS"});
}

TEST_CASE("objective of a uniform single token") {
  CrfModel model(ner_label_names(), {"w[0]=died"}, bare_config(1));
  std::vector<LabeledSequence> data = {{{"died"}, {"VERB"}, {"B-DEATHS"}}};
  auto obj = nll_and_gradient(model, data);
  CHECK(obj.value == doctest::Approx(std::log(7.0)).epsilon(1e-14));
}

TEST_CASE("empty dataset leaves only the regularizer") {
  std::mt19937_64 rng(37);
  auto w = outbreak::testing::random_weights(rng, weight_count(3, 4), 2.0);
  const double lambda = 0.7;
  auto obj = nll_and_gradient(w, 3, 4, {}, lambda);
  double sq = 0.0;
  for (double x : w) sq += x * x;
  CHECK(obj.value == doctest::Approx(lambda / 2.0 * sq).epsilon(1e-14));
  for (std::size_t i = 0; i < w.size(); ++i) {
    CHECK(obj.gradient[i] == doctest::Approx(lambda * w[i]).epsilon(1e-14));
  }
}

TEST_CASE("analytic gradient matches central differences") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t F = 1 + rng() % 8;
    std::size_t L = 1 + rng() % 5;
    auto data = outbreak::testing::random_dataset(rng, 1 + rng() % 3, 6, F, L);
    double lambda = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    auto w = outbreak::testing::random_weights(rng, weight_count(F, L), 1.0);
    auto f = [&](std::span<const double> x) {
      return nll_and_gradient(x, F, L, data, lambda).value;
    };
    auto obj = nll_and_gradient(w, F, L, data, lambda);
    REQUIRE(obj.gradient.size() == w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      double fd = outbreak::testing::central_difference(f, w, i, 1e-5);
      CHECK(close_rel(obj.gradient[i], fd, 1e-6));
    }
  }
}

TEST_CASE("objective is non-negative at zero weights") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t F = 1 + rng() % 8;
    std::size_t L = 1 + rng() % 5;
    auto data = outbreak::testing::random_dataset(rng, 1 + rng() % 4, 6, F, L);
    std::vector<double> zero(weight_count(F, L), 0.0);
    CHECK(nll_and_gradient(zero, F, L, data, 0.5).value >= 0.0);
  }
}

TEST_CASE("training learns a separable toy corpus") {
  auto data = died_corpus(50, 1);
  FeatureConfig config;
  config.l2_lambda = 0.1;
  TrainReport report;
  auto model = train(data, config, {}, ner_label_names(), &report);
  REQUIRE(report.objective_history.size() >= 2);
  CHECK(report.objective_history.front() >= 0.0);
  for (std::size_t i = 1; i < report.objective_history.size(); ++i) {
    CHECK(report.objective_history[i] <= report.objective_history[i - 1]);
  }
  CHECK(report.objective_history.size() == static_cast<std::size_t>(report.iterations) + 1);

  Strings tokens = {"a", "nurse", "in", "Guinea", "died", "quickly"};
  auto result = viterbi(model, tokens, corpus::pos_tag(tokens));
  CHECK(result.labels == Strings{"O", "O", "O", "O", "B-DEATHS", "O"});
  REQUIRE(result.spans.size() == 1);
  CHECK(result.spans[0] == EntitySpan{"DEATHS", 4, 4});
  CHECK(result.score <= 0.0);
}

TEST_CASE("training is deterministic") {
  auto data = died_corpus(30, 2);
  FeatureConfig config;
  auto a = train(data, config);
  auto b = train(data, config);
  CHECK(a == b);
  CHECK(std::equal(a.weights().begin(), a.weights().end(), b.weights().begin(),
                   b.weights().end()));
}

TEST_CASE("an all-O corpus decodes everything as O") {
  auto data = died_corpus(20, 3);
  for (auto &s : data) std::fill(s.labels.begin(), s.labels.end(), "O");
  auto model = train(data, FeatureConfig{});
  Strings tokens = {"the", "patient", "died", "."};
  auto result = viterbi(model, tokens, corpus::pos_tag(tokens));
  CHECK(result.labels == Strings(4, "O"));
  CHECK(result.spans.empty());
}

TEST_CASE("training preconditions") {
  CHECK_THROWS_AS(train(std::vector<LabeledSequence>{}, FeatureConfig{}), DomainError);
  std::vector<LabeledSequence> bad = {{{"x"}, {"OTHER"}, {"B-CASES"}}};
  CHECK_THROWS_AS(train(bad, FeatureConfig{}), DomainError);
}

TEST_CASE("non-finite objective raises a training error") {
  std::vector<LabeledSequence> data = {{{"x"}, {"OTHER"}, {"O"}}};
  FeatureConfig config;
  config.l2_lambda = std::numeric_limits<double>::infinity();
  try {
    train(data, config);
    FAIL("expected an error");
  } catch (const TrainingError &e) {
    CHECK(std::string(e.what()).find("iteration") != std::string::npos);
  } catch (const DomainError &) {
    // infinite lambda may also be rejected up front
  }
}

TEST_CASE("a single positive weight tags died") {
  CrfModel model(ner_label_names(), {"w[0]=died"}, bare_config(1));
  model.emission_weight(0, static_cast<std::size_t>(model.label_id("B-DEATHS"))) = 1.0;
  Strings tokens = {"many", "died"};
  auto result = viterbi(model, tokens, Strings{"ADJ", "VERB"});
  CHECK(result.labels == Strings{"O", "B-DEATHS"});
}

TEST_CASE("span extraction") {
  CHECK(spans_from_iob(Strings{"O", "O", "O"}).empty());
  CHECK(spans_from_iob(Strings{"B-DEATHS", "I-DEATHS", "O"}) ==
        std::vector<EntitySpan>{{"DEATHS", 0, 1}});
  CHECK(spans_from_iob(Strings{"B-INFECTIONS", "B-INFECTIONS"}) ==
        std::vector<EntitySpan>{{"INFECTIONS", 0, 0}, {"INFECTIONS", 1, 1}});
  CHECK(spans_from_iob(Strings{"B-DEATHS", "I-DEATHS", "B-INFECTIONS", "I-INFECTIONS"}) ==
        std::vector<EntitySpan>{{"DEATHS", 0, 1}, {"INFECTIONS", 2, 3}});
  try {
    spans_from_iob(Strings{"O", "I-DEATHS"}, corpus::IobMode::kStrict);
    FAIL("expected StructureError");
  } catch (const StructureError &e) {
    CHECK(e.position() == 1);
  }
  CHECK_THROWS_AS(spans_from_iob(Strings{"B-DEATHS", "I-INFECTIONS"}), StructureError);
  CHECK(spans_from_iob(Strings{"O", "I-DEATHS", "I-DEATHS"}, corpus::IobMode::kLenient) ==
        std::vector<EntitySpan>{{"DEATHS", 1, 2}});
}

TEST_CASE("spans reconstruct labels") {
  const auto names = ner_label_names();
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 300; ++trial) {
    Strings labels;
    std::size_t n = 1 + rng() % 10;
    for (std::size_t i = 0; i < n; ++i) {
      const auto &prev = labels.empty() ? std::string("O") : labels.back();
      std::size_t pick = rng() % names.size();
      std::string next = names[pick];
      if (next[0] == 'I' && (prev == "O" || prev.substr(2) != next.substr(2))) next[0] = 'B';
      labels.push_back(next);
    }
    Strings rebuilt(n, "O");
    for (const auto &s : spans_from_iob(labels)) {
      CHECK(s.start <= s.end);
      rebuilt[s.start] = "B-" + s.type;
      for (std::size_t i = s.start + 1; i <= s.end; ++i) rebuilt[i] = "I-" + s.type;
    }
    CHECK(rebuilt == labels);
  }
}

TEST_CASE("model save and load round trip") {
  auto model = train(died_corpus(20, 5), FeatureConfig{});
  std::stringstream buf;
  save_model(buf, model);
  auto loaded = load_model(buf);
  CHECK(loaded == model);
  CHECK(loaded.labels() == model.labels());
  CHECK(loaded.config() == model.config());
  CHECK(std::equal(loaded.weights().begin(), loaded.weights().end(), model.weights().begin(),
                   model.weights().end()));

  outbreak::testing::TempDir dir;
  save_model(dir / "m.crf", model);
  CHECK(load_model(dir / "m.crf") == model);
}

TEST_CASE("model loading rejects bad files") {
  const std::string config = "config\tmax_ngram_len=1\twindow=0\tuse_pos=0\tuse_shape=0\tl2_lambda=0\n";
  const std::string labels = "labels\tO\tB-DEATHS\tI-DEATHS\n";
  auto load = [](const std::string &text) {
    std::istringstream in(text);
    return load_model(in);
  };
  CHECK_NOTHROW(load("outbreak-crf 1\n" + labels + config + "w[0]=x\tO\t0.5\n"));
  try {
    load("outbreak-crf 99\n" + labels + config);
    FAIL("expected LoadError");
  } catch (const LoadError &e) {
    CHECK(std::string(e.what()).find("version 99") != std::string::npos);
  }
  CHECK_THROWS_AS(load("outbreak-crf 1\nlabels\tO\tB-CASES\n" + config), LoadError);
  CHECK_THROWS_AS(load("outbreak-crf 1\n" + labels + config + "w[0]=x\tB-CASES\t1\n"), LoadError);
  CHECK_THROWS_AS(load("outbreak-crf 1\n" + labels + config + "w[0]=x\tO\tnan\n"), LoadError);
  CHECK_THROWS_AS(load("outbreak-crf 1\n" + labels + config + "w[0]=x\tO\tinf\n"), LoadError);
  CHECK_THROWS_AS(load("outbreak-crf 1\n" + labels + "config\tmax_ngram_len=1\n"), LoadError);
  CHECK_THROWS_AS(load(""), LoadError);
}

TEST_CASE("hand-written two-feature model tags as computed") {
  const std::string text =
      "outbreak-crf 1\n"
      "labels\tO\tB-DEATHS\tB-HOSPITALIZATIONS\tB-INFECTIONS\tI-DEATHS\tI-HOSPITALIZATIONS\t"
      "I-INFECTIONS\n"
      "config\tmax_ngram_len=1\twindow=0\tuse_pos=0\tuse_shape=0\tl2_lambda=0\n"
      "w[0]=died\tB-DEATHS\t2\n"
      "w[0]=toll\tI-DEATHS\t1\n"
      "TRANS\tB-DEATHS\tI-DEATHS\t0.5\n";
  std::istringstream in(text);
  auto model = load_model(in);
  CHECK(model.num_features() == 2);

  Strings one = {"died"};
  auto single = viterbi(model, one, Strings{"VERB"});
  CHECK(single.labels == Strings{"B-DEATHS"});
  CHECK(single.score == doctest::Approx(2.0 - std::log(std::exp(2.0) + 6.0)).epsilon(1e-12));

  Strings two = {"died", "toll"};
  auto pair = viterbi(model, two, Strings{"VERB", "NOUN"});
  CHECK(pair.labels == Strings{"B-DEATHS", "I-DEATHS"});
  const double e = std::exp(1.0);
  const double z = (std::exp(2.0) + 6.0) * (e + 6.0) + std::exp(3.0) * (std::exp(0.5) - 1.0);
  CHECK(pair.score == doctest::Approx(3.5 - std::log(z)).epsilon(1e-12));
  REQUIRE(pair.spans.size() == 1);
  CHECK(pair.spans[0] == EntitySpan{"DEATHS", 0, 1});

  // Alone, "toll" prefers I-DEATHS, which the IOB constraint forbids at the start.
  Strings lone = {"toll"};
  CHECK(viterbi(model, lone, Strings{"NOUN"}, true).labels == Strings{"O"});
  CHECK(viterbi(model, lone, Strings{"NOUN"}, false).labels == Strings{"I-DEATHS"});
}

TEST_CASE("saving rejects unwritable feature names") {
  CrfModel model(ner_label_names(), {"bad\tname"}, bare_config(1));
  std::ostringstream out;
  CHECK_THROWS_AS(save_model(out, model), DomainError);
}

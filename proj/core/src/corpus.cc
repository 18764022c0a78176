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

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "outbreak/corpus.h"
#include "outbreak/error.h"
#include "outbreak/wikitext.h"

namespace outbreak::corpus {

namespace {

constexpr std::array<std::string_view, kNumLabels> kLabelNames = {
    "O",        "B-DEATHS", "B-HOSPITALIZATIONS", "B-INFECTIONS",
    "I-DEATHS", "I-HOSPITALIZATIONS", "I-INFECTIONS",
};

// Above this many DP cells the diff falls back to multiset matching.
constexpr std::size_t kMaxLcsCells = std::size_t{1} << 26;

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  if (text.empty()) return lines;
  std::size_t pos = 0;
  while (true) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos || nl + 1 == text.size()) break;
    pos = nl + 1;
  }
  return lines;
}

// Lowercased code-point trigrams, each encoded as a byte string.
std::vector<std::string> trigram_strings(std::string_view text) {
  std::vector<std::string> points;
  for (std::size_t i = 0; i < text.size();) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 6 ? 2 : (c >> 4) == 14 ? 3 : (c >> 3) == 30 ? 4 : 1;
    len = std::min(len, text.size() - i);
    std::string cp(text.substr(i, len));
    if (len == 1) cp[0] = static_cast<char>(std::tolower(c));
    points.push_back(std::move(cp));
    i += len;
  }
  std::vector<std::string> grams;
  for (std::size_t i = 0; i + 3 <= points.size(); ++i) {
    grams.push_back(points[i] + points[i + 1] + points[i + 2]);
  }
  std::sort(grams.begin(), grams.end());
  grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
  return grams;
}

double jaccard_from_counts(std::size_t intersection, std::size_t a, std::size_t b) {
  if (a == 0 && b == 0) return 1.0;
  if (a == 0 || b == 0) return 0.0;
  return static_cast<double>(intersection) / static_cast<double>(a + b - intersection);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

const std::array<Label, kNumLabels> &all_labels() {
  static constexpr std::array<Label, kNumLabels> kAll = {
      Label::kO,       Label::kBDeaths,           Label::kBHospitalizations, Label::kBInfections,
      Label::kIDeaths, Label::kIHospitalizations, Label::kIInfections,
  };
  return kAll;
}

std::string_view label_name(Label label) { return kLabelNames[static_cast<std::size_t>(label)]; }

std::optional<Label> parse_label(std::string_view name) {
  for (std::size_t i = 0; i < kLabelNames.size(); ++i) {
    if (kLabelNames[i] == name) return static_cast<Label>(i);
  }
  return std::nullopt;
}

DiffResult line_diff(std::string_view old_text, std::string_view new_text) {
  auto a = split_lines(old_text);
  auto b = split_lines(new_text);
  DiffResult result;

  std::size_t prefix = 0;
  while (prefix < a.size() && prefix < b.size() && a[prefix] == b[prefix]) ++prefix;
  std::size_t suffix = 0;
  while (suffix < a.size() - prefix && suffix < b.size() - prefix &&
         a[a.size() - 1 - suffix] == b[b.size() - 1 - suffix]) {
    ++suffix;
  }
  std::span<const std::string_view> x(a.data() + prefix, a.size() - prefix - suffix);
  std::span<const std::string_view> y(b.data() + prefix, b.size() - prefix - suffix);
  const std::size_t n = x.size();
  const std::size_t m = y.size();

  if ((n + 1) * (m + 1) > kMaxLcsCells) {
    spdlog::warn("diff of {}x{} lines exceeds the LCS budget; matching as multisets", n, m);
    std::unordered_map<std::string_view, int> remaining;
    for (auto line : x) ++remaining[line];
    for (auto line : y) {
      if (remaining[line] > 0) {
        --remaining[line];
      } else {
        result.added_lines.emplace_back(line);
      }
    }
    std::unordered_map<std::string_view, int> present;
    for (auto line : y) ++present[line];
    for (auto line : x) {
      if (present[line] > 0) {
        --present[line];
      } else {
        result.deleted_lines.emplace_back(line);
      }
    }
    return result;
  }

  // lcs[i][j] = LCS length of x[i..] and y[j..].
  std::vector<std::uint32_t> lcs((n + 1) * (m + 1), 0);
  auto at = [m](std::size_t i, std::size_t j) { return i * (m + 1) + j; };
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      lcs[at(i, j)] = x[i] == y[j] ? lcs[at(i + 1, j + 1)] + 1
                                   : std::max(lcs[at(i + 1, j)], lcs[at(i, j + 1)]);
    }
  }
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < n || j < m) {
    if (i < n && j < m && x[i] == y[j]) {
      ++i;
      ++j;
    } else if (j == m || (i < n && lcs[at(i + 1, j)] >= lcs[at(i, j + 1)])) {
      result.deleted_lines.emplace_back(x[i++]);
    } else {
      result.added_lines.emplace_back(y[j++]);
    }
  }
  return result;
}

double trigram_jaccard(std::string_view a, std::string_view b) {
  auto ga = trigram_strings(a);
  auto gb = trigram_strings(b);
  std::vector<std::string> common;
  std::set_intersection(ga.begin(), ga.end(), gb.begin(), gb.end(), std::back_inserter(common));
  return jaccard_from_counts(common.size(), ga.size(), gb.size());
}

std::vector<std::size_t> dedup_indices(std::span<const std::string> sentences, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw DomainError("dedup threshold must lie in [0, 1]");
  }
  std::unordered_map<std::string, std::uint32_t> dictionary;
  std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> postings;  // gram -> kept slot
  std::vector<std::size_t> kept;
  std::vector<std::size_t> kept_sizes;
  std::vector<std::uint32_t> overlap;
  bool kept_empty = false;

  for (std::size_t s = 0; s < sentences.size(); ++s) {
    auto grams = trigram_strings(sentences[s]);
    std::vector<std::uint32_t> ids;
    ids.reserve(grams.size());
    for (auto &g : grams) {
      auto [it, inserted] = dictionary.try_emplace(std::move(g), dictionary.size());
      ids.push_back(it->second);
    }

    bool keep = true;
    if (ids.empty()) {
      keep = !(kept_empty && jaccard_from_counts(0, 0, 0) > threshold);
    } else {
      overlap.assign(kept.size(), 0);
      std::vector<std::uint32_t> touched;
      for (auto id : ids) {
        auto it = postings.find(id);
        if (it == postings.end()) continue;
        for (auto slot : it->second) {
          if (overlap[slot]++ == 0) touched.push_back(slot);
        }
      }
      for (auto slot : touched) {
        if (jaccard_from_counts(overlap[slot], ids.size(), kept_sizes[slot]) > threshold) {
          keep = false;
          break;
        }
      }
    }
    if (!keep) continue;
    auto slot = static_cast<std::uint32_t>(kept.size());
    kept.push_back(s);
    kept_sizes.push_back(ids.size());
    if (ids.empty()) kept_empty = true;
    for (auto id : ids) postings[id].push_back(slot);
  }
  return kept;
}

std::vector<std::string> dedup_sentences(std::span<const std::string> sentences,
                                         double threshold) {
  std::vector<std::string> out;
  for (auto i : dedup_indices(sentences, threshold)) out.push_back(sentences[i]);
  return out;
}

AgreementTable agreement_table(std::span<const LabeledSentence> a,
                               std::span<const LabeledSentence> b) {
  if (a.size() != b.size()) {
    throw StructureError("annotations differ in sentence count", std::min(a.size(), b.size()));
  }
  std::array<std::array<std::uint64_t, kNumLabels>, kNumLabels> full{};
  std::uint64_t n = 0;
  for (std::size_t s = 0; s < a.size(); ++s) {
    if (a[s].size() != b[s].size()) {
      throw StructureError("sentence " + std::to_string(s) + " differs in token count", s);
    }
    for (std::size_t t = 0; t < a[s].size(); ++t) {
      if (a[s][t].token != b[s][t].token) {
        throw StructureError("sentence " + std::to_string(s) + " token " + std::to_string(t) +
                                 " differs: '" + a[s][t].token + "' vs '" + b[s][t].token + "'",
                             s);
      }
      ++full[static_cast<std::size_t>(a[s][t].label)][static_cast<std::size_t>(b[s][t].label)];
      ++n;
    }
  }
  std::vector<std::size_t> used;
  for (std::size_t k = 0; k < kNumLabels; ++k) {
    std::uint64_t marginal = 0;
    for (std::size_t j = 0; j < kNumLabels; ++j) marginal += full[k][j] + full[j][k];
    if (marginal > 0) used.push_back(k);
  }
  AgreementTable table;
  table.n = n;
  for (auto k : used) table.categories.emplace_back(kLabelNames[k]);
  for (auto r : used) {
    std::vector<std::uint64_t> row;
    for (auto c : used) row.push_back(full[r][c]);
    table.counts.push_back(std::move(row));
  }
  return table;
}

double cohen_kappa(const AgreementTable &table) {
  const std::size_t k = table.counts.size();
  unsigned __int128 total = 0;
  unsigned __int128 trace = 0;
  std::vector<unsigned __int128> rows(k, 0);
  std::vector<unsigned __int128> cols(k, 0);
  for (std::size_t r = 0; r < k; ++r) {
    if (table.counts[r].size() != k) throw DomainError("agreement table is not square");
    for (std::size_t c = 0; c < k; ++c) {
      total += table.counts[r][c];
      rows[r] += table.counts[r][c];
      cols[c] += table.counts[r][c];
    }
    trace += table.counts[r][r];
  }
  if (total == 0 || table.n == 0) throw DomainError("agreement table is empty");
  if (total != table.n) throw DomainError("agreement table counts do not sum to n");
  unsigned __int128 chance = 0;
  for (std::size_t c = 0; c < k; ++c) chance += rows[c] * cols[c];
  const unsigned __int128 n2 = total * total;
  if (chance == n2) return 1.0;  // p_e = 1 forces p_o = 1
  // (p_o - p_e) / (1 - p_e) scaled by n^2.
  const long double numerator =
      static_cast<long double>(total * trace) - static_cast<long double>(chance);
  const long double denominator = static_cast<long double>(n2 - chance);
  return static_cast<double>(numerator / denominator);
}

std::vector<CorpusSentence> build_corpus(std::span<const ingest::ArticleRevision> revisions,
                                         double threshold) {
  std::vector<std::string> texts;
  std::vector<ingest::RevisionId> sources;
  std::optional<std::string> previous;
  for (const auto &rev : revisions) {
    if (rev.wikitext.empty()) continue;
    std::string cleaned = wikitext::strip_markup(rev.wikitext, /*remove_tables=*/true);
    if (previous) {
      for (const auto &line : line_diff(*previous, cleaned).added_lines) {
        if (trim(line).empty()) continue;
        for (auto &sentence : wikitext::split_sentences(line)) {
          texts.push_back(std::move(sentence.text));
          sources.push_back(rev.revision_id);
        }
      }
    }
    previous = std::move(cleaned);
  }

  std::vector<CorpusSentence> corpus;
  for (auto i : dedup_indices(texts, threshold)) {
    CorpusSentence s;
    s.source_revision = sources[i];
    s.text = texts[i];
    s.tokens = wikitext::tokenize(s.text);
    s.pos = pos_tag(s.tokens);
    corpus.push_back(std::move(s));
  }
  return corpus;
}

std::vector<LabeledSentence> to_unlabeled(std::span<const CorpusSentence> corpus) {
  std::vector<LabeledSentence> out;
  for (const auto &s : corpus) {
    LabeledSentence sentence;
    for (std::size_t t = 0; t < s.tokens.size(); ++t) {
      sentence.push_back({s.tokens[t], s.pos[t], Label::kO});
    }
    out.push_back(std::move(sentence));
  }
  return out;
}

}  // namespace outbreak::corpus

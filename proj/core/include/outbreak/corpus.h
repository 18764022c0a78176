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

#ifndef OUTBREAK_CORPUS_H_
#define OUTBREAK_CORPUS_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "outbreak/ingest.h"

namespace outbreak::corpus {

// The closed IOB label set, in decoding tie-break order: O first, then
// lexicographic.
enum class Label : std::uint8_t {
  kO,
  kBDeaths,
  kBHospitalizations,
  kBInfections,
  kIDeaths,
  kIHospitalizations,
  kIInfections,
};

inline constexpr std::size_t kNumLabels = 7;
const std::array<Label, kNumLabels> &all_labels();
std::string_view label_name(Label label);
std::optional<Label> parse_label(std::string_view name);

struct LabeledToken {
  std::string token;
  std::string pos;
  Label label = Label::kO;

  bool operator==(const LabeledToken &) const = default;
};
using LabeledSentence = std::vector<LabeledToken>;

struct DiffResult {
  std::vector<std::string> added_lines;
  std::vector<std::string> deleted_lines;
};

// Longest-common-subsequence diff over '\n'-separated lines.
DiffResult line_diff(std::string_view old_text, std::string_view new_text);

// Jaccard similarity of the character-trigram sets of the ASCII-lowercased
// inputs. Two empty trigram sets compare as 1, one empty set as 0.
double trigram_jaccard(std::string_view a, std::string_view b);

// Greedy near-duplicate filter: keeps a sentence iff its similarity to
// every sentence kept so far is <= threshold. Returns kept indices.
std::vector<std::size_t> dedup_indices(std::span<const std::string> sentences,
                                       double threshold = 0.75);
std::vector<std::string> dedup_sentences(std::span<const std::string> sentences,
                                         double threshold = 0.75);

// Coarse tags: NOUN VERB ADJ ADV NUM DET PREP PRON CONJ PUNCT OTHER.
std::vector<std::string> pos_tag(std::span<const std::string> tokens);

enum class IobMode { kStrict, kLenient };

// token<TAB>pos<TAB>label per line, one blank line between sentences. Throws
// DomainError for empty sentences and fields holding tabs or line breaks.
void write_iob_tsv(std::ostream &out, std::span<const LabeledSentence> sentences);
void write_iob_tsv(const std::filesystem::path &path,
                   std::span<const LabeledSentence> sentences);

// Throws ParseError naming the line for unknown labels, wrong column
// counts, and (strict mode) I-X without a preceding B-X/I-X. Lenient mode
// rewrites such an I-X to B-X.
std::vector<LabeledSentence> read_iob_tsv(std::istream &in,
                                          IobMode mode = IobMode::kStrict);
std::vector<LabeledSentence> read_iob_tsv(const std::filesystem::path &path,
                                          IobMode mode = IobMode::kStrict);

// Square contingency table of two annotators' labels.
struct AgreementTable {
  std::vector<std::string> categories;
  std::vector<std::vector<std::uint64_t>> counts;  // [annotator1][annotator2]
  std::uint64_t n = 0;
};

// Pairs up token labels of two annotations of the same tokens. Throws
// StructureError when the token structure differs.
AgreementTable agreement_table(std::span<const LabeledSentence> a,
                               std::span<const LabeledSentence> b);

// Throws DomainError when n == 0.
double cohen_kappa(const AgreementTable &table);

struct CorpusSentence {
  ingest::RevisionId source_revision = 0;
  std::string text;
  std::vector<std::string> tokens;
  std::vector<std::string> pos;
};

// strip (tables removed) -> line diff of successive non-empty revisions ->
// added lines -> sentences -> near-duplicate filter -> tokens -> POS.
std::vector<CorpusSentence> build_corpus(
    std::span<const ingest::ArticleRevision> revisions, double threshold = 0.75);

// All-O labeled view, ready for annotation.
std::vector<LabeledSentence> to_unlabeled(std::span<const CorpusSentence> corpus);

}  // namespace outbreak::corpus

#endif  // OUTBREAK_CORPUS_H_

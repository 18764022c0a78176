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

#ifndef OUTBREAK_WIKITEXT_H_
#define OUTBREAK_WIKITEXT_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace outbreak::wikitext {

// Removes templates, references, comments, links (keeping display text),
// emphasis, headings and list markers. Tables are dropped when
// remove_tables is set and flattened to one line per row otherwise. Never
// fails: unbalanced constructs are cut at the end of their line.
std::string strip_markup(std::string_view wikitext, bool remove_tables);

// A table after span expansion. Every row has header.size() cells.
struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::size_t begin = 0;  // byte offsets of "{|" ... "|}" in the source
  std::size_t end = 0;

  bool operator==(const RawTable &) const = default;
};

struct TableWarning {
  std::size_t offset = 0;
  std::string message;
};

// One RawTable per well-formed {| ... |} block, in document order. Nested
// tables are reported on their own and do not leak into the enclosing
// cell. Unterminated blocks are skipped and reported through warnings.
std::vector<RawTable> parse_tables(std::string_view wikitext,
                                   std::vector<TableWarning> *warnings = nullptr);

struct Sentence {
  std::string text;
  std::vector<std::string> tokens;
  std::optional<std::int64_t> source_revision;
};

// Sentence boundaries sit after '.', '?' or '!' (plus any closing quotes
// and citation remnants such as "[24]") when followed by whitespace and an
// uppercase letter or digit. Known abbreviations suppress the split.
std::vector<Sentence> split_sentences(std::string_view text);

// Whitespace split with leading/trailing punctuation detached. Numerals
// such as "16,000" or "3.5", hyphenated words and known abbreviations stay
// whole.
std::vector<std::string> tokenize(std::string_view sentence);

bool is_abbreviation(std::string_view word);

}  // namespace outbreak::wikitext

#endif  // OUTBREAK_WIKITEXT_H_

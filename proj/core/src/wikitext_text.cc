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
#include <array>
#include <cctype>
#include <string>

#include "outbreak/wikitext.h"

namespace outbreak::wikitext {

namespace {

constexpr std::array<std::string_view, 46> kAbbreviations = {
    "dr.",   "mr.",   "mrs.",   "ms.",  "prof.", "st.",   "jr.",  "sr.",  "gen.",  "col.",
    "lt.",   "gov.",  "sen.",   "rep.", "inc.",  "corp.", "co.",  "ltd.", "no.",   "nos.",
    "vs.",   "etc.",  "approx.", "e.g.", "i.e.",  "u.s.",  "u.k.", "u.n.", "jan.",  "feb.",
    "mar.",  "apr.",  "jun.",   "jul.", "aug.",  "sep.",  "sept.", "oct.", "nov.", "dec.",
    "ca.",   "cf.",   "fig.",   "al.",  "mt.",   "est.",
};

// Multi-byte punctuation that tokenize() detaches at token edges.
constexpr std::array<std::string_view, 8> kWidePunct = {
    "“", "”", "‘", "’", "«", "»", "…", "—",
};

bool is_ascii_punct(char c) {
  return std::string_view(".,;:!?\"'()[]{}").find(c) != std::string_view::npos;
}

std::size_t wide_punct_prefix(std::string_view s) {
  for (auto p : kWidePunct) {
    if (s.starts_with(p)) return p.size();
  }
  return 0;
}

std::size_t wide_punct_suffix(std::string_view s) {
  for (auto p : kWidePunct) {
    if (s.ends_with(p)) return p.size();
  }
  return 0;
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

// Skips closing quotes, brackets and citation remnants ("[24]",
// "$^{[35]}$") that trail a sentence terminator.
std::size_t skip_closers(std::string_view text, std::size_t j) {
  while (j < text.size()) {
    char c = text[j];
    if (std::string_view("\"')]}$^{").find(c) != std::string_view::npos) {
      ++j;
      continue;
    }
    if (c == '[') {
      std::size_t close = text.find(']', j);
      if (close != std::string_view::npos && close - j <= 24 &&
          text.substr(j, close - j).find('\n') == std::string_view::npos) {
        j = close + 1;
        continue;
      }
      break;
    }
    if (std::size_t w = wide_punct_prefix(text.substr(j)); w > 0 && text.substr(j, w) != "…") {
      j += w;
      continue;
    }
    break;
  }
  return j;
}

bool starts_sentence(std::string_view text, std::size_t k) {
  if (k >= text.size()) return false;
  unsigned char c = static_cast<unsigned char>(text[k]);
  if (std::isupper(c) || std::isdigit(c)) return true;
  if ((c == '"' || c == '(' || c == '\'') && k + 1 < text.size()) {
    unsigned char d = static_cast<unsigned char>(text[k + 1]);
    return std::isupper(d) || std::isdigit(d);
  }
  if (text.substr(k).starts_with("“") && k + 3 < text.size()) {
    return std::isupper(static_cast<unsigned char>(text[k + 3])) != 0;
  }
  return false;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace

bool is_abbreviation(std::string_view word) {
  if (word.size() < 2 || word.back() != '.') return false;
  std::string lower(word);
  for (char &c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (std::find(kAbbreviations.begin(), kAbbreviations.end(), lower) != kAbbreviations.end()) {
    return true;
  }
  // Initials ("J.") and dotted acronyms ("W.H.O.").
  if (word.size() == 2 && std::isupper(static_cast<unsigned char>(word[0]))) return true;
  if (word.size() >= 4) {
    for (std::size_t i = 0; i < word.size(); i += 2) {
      if (!std::isalpha(static_cast<unsigned char>(word[i])) || i + 1 >= word.size() ||
          word[i + 1] != '.') {
        return false;
      }
    }
    return true;
  }
  return false;
}

std::vector<Sentence> split_sentences(std::string_view text) {
  std::vector<Sentence> out;
  auto emit = [&out](std::string_view piece) {
    piece = trim(piece);
    if (piece.empty()) return;
    Sentence s;
    s.text = std::string(piece);
    s.tokens = tokenize(s.text);
    out.push_back(std::move(s));
  };

  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c != '.' && c != '?' && c != '!') {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < text.size() && (text[j] == '.' || text[j] == '?' || text[j] == '!')) ++j;
    j = skip_closers(text, j);
    if (j >= text.size() || !is_space(text[j])) {
      i = j > i ? j : i + 1;
      continue;
    }
    std::size_t k = j;
    while (k < text.size() && is_space(text[k])) ++k;
    bool boundary = starts_sentence(text, k);
    if (boundary && c == '.' && j == i + 1) {
      std::size_t w = i;
      while (w > start && !is_space(text[w - 1])) --w;
      // Leading punctuation does not belong to the abbreviation: "(approx."
      while (w < i && (text[w] == '(' || text[w] == '"' || text[w] == '\'')) ++w;
      if (is_abbreviation(text.substr(w, i + 1 - w))) boundary = false;
    }
    if (boundary) {
      emit(text.substr(start, j - start));
      start = j;
    }
    i = j;
  }
  emit(text.substr(start));
  return out;
}

std::vector<std::string> tokenize(std::string_view sentence) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < sentence.size()) {
    while (i < sentence.size() && is_space(sentence[i])) ++i;
    std::size_t j = i;
    while (j < sentence.size() && !is_space(sentence[j])) ++j;
    std::string_view chunk = sentence.substr(i, j - i);
    i = j;
    if (chunk.empty()) continue;

    while (!chunk.empty()) {
      if (is_ascii_punct(chunk.front()) && !is_abbreviation(chunk)) {
        tokens.emplace_back(1, chunk.front());
        chunk.remove_prefix(1);
      } else if (std::size_t w = wide_punct_prefix(chunk); w > 0) {
        tokens.emplace_back(chunk.substr(0, w));
        chunk.remove_prefix(w);
      } else {
        break;
      }
    }
    std::vector<std::string> trailing;
    while (!chunk.empty() && !is_abbreviation(chunk)) {
      if (is_ascii_punct(chunk.back())) {
        trailing.emplace_back(1, chunk.back());
        chunk.remove_suffix(1);
      } else if (std::size_t w = wide_punct_suffix(chunk); w > 0) {
        trailing.emplace_back(chunk.substr(chunk.size() - w));
        chunk.remove_suffix(w);
      } else {
        break;
      }
    }
    if (!chunk.empty()) tokens.emplace_back(chunk);
    tokens.insert(tokens.end(), trailing.rbegin(), trailing.rend());
  }
  return tokens;
}

}  // namespace outbreak::wikitext

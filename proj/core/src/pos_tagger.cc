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
#include <cctype>
#include <unordered_map>

#include "outbreak/corpus.h"

namespace outbreak::corpus {

namespace {

const std::unordered_map<std::string_view, std::string_view> &lexicon() {
  static const auto *kLexicon = [] {
    auto *m = new std::unordered_map<std::string_view, std::string_view>;
    auto add = [m](std::string_view tag, std::initializer_list<std::string_view> words) {
      for (auto w : words) m->emplace(w, tag);
    };
    add("DET", {"a", "an", "the", "this", "that", "these", "those", "each", "every", "some",
                "any", "no", "all", "both", "another", "such", "either", "neither"});
    add("PREP", {"of", "in", "on", "at", "by", "for", "from", "to", "with", "without", "into",
                 "onto", "over", "under", "between", "among", "through", "during", "after",
                 "before", "since", "until", "within", "across", "against", "about", "around",
                 "near", "per", "via", "including", "despite", "toward", "towards", "upon",
                 "throughout", "outside", "inside", "amid", "below", "above", "beyond"});
    add("PRON", {"i", "me", "my", "we", "us", "our", "you", "your", "he", "him", "his", "she",
                 "her", "it", "its", "they", "them", "their", "who", "whom", "whose", "which",
                 "what", "itself", "themselves", "one's"});
    add("CONJ", {"and", "or", "but", "nor", "yet", "so", "while", "whereas", "although",
                 "though", "because", "if", "unless", "whether", "as", "than"});
    add("ADV", {"not", "also", "only", "more", "most", "less", "least", "very", "now", "then",
                "still", "already", "again", "further", "however", "there", "here", "just",
                "even", "approximately", "nearly", "almost",
                "later", "soon", "ago", "too", "well"});
    add("VERB", {"is", "are", "was", "were", "be", "been", "being", "am", "has", "have", "had",
                 "do", "does", "did", "will", "would", "can", "could", "may", "might", "shall",
                 "should", "must", "die", "dies", "say", "says", "said", "rose", "risen",
                 "fell", "fallen", "made", "make", "makes", "took", "taken", "give", "gave",
                 "given", "became", "become", "brought", "left", "remain", "remains",
                 "reach", "reaches", "occur", "occurs", "spread", "spreads", "include",
                 "includes", "bring", "take", "takes", "kill", "kills", "infect", "infects"});
    add("ADJ", {"new", "total", "suspected", "confirmed", "probable", "other", "first", "last",
                "many", "several", "few", "further", "additional", "high", "low", "large",
                "small", "cumulative", "former", "current", "same", "own", "early", "recent",
                "ill", "sick", "dead", "alive", "local", "national", "international"});
    add("NOUN", {"january", "february", "march", "april", "june", "july", "august",
                 "september", "october", "november", "december", "people", "week", "year",
                 "day", "month", "outbreak", "ministry", "virus", "hospital", "government"});
    add("NUM", {"zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine",
                "ten", "eleven", "twelve", "thirteen", "fourteen", "fifteen", "sixteen",
                "seventeen", "eighteen", "nineteen", "twenty", "thirty", "forty", "fifty",
                "sixty", "seventy", "eighty", "ninety", "hundred", "thousand", "million",
                "billion", "dozen", "dozens", "hundreds", "thousands", "millions"});
    return m;
  }();
  return *kLexicon;
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool is_numeral(std::string_view tok) {
  bool digit = false;
  for (std::size_t i = 0; i < tok.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(tok[i]);
    if (std::isdigit(c)) {
      digit = true;
    } else if ((c == ',' || c == '.') && i > 0 && i + 1 < tok.size()) {
      continue;
    } else {
      return false;
    }
  }
  return digit;
}

bool is_punctuation(std::string_view tok) {
  for (unsigned char c : tok) {
    if (std::isalnum(c) || c >= 0x80) return false;
  }
  return !tok.empty();
}

bool is_alpha_word(std::string_view tok) {
  bool letter = false;
  for (unsigned char c : tok) {
    if (std::isalpha(c)) {
      letter = true;
    } else if (c != '-' && c != '\'') {
      return false;
    }
  }
  return letter;
}

bool ends_with_any(std::string_view word, std::initializer_list<std::string_view> suffixes,
                   std::size_t min_stem = 2) {
  for (auto s : suffixes) {
    if (word.size() >= s.size() + min_stem && word.ends_with(s)) return true;
  }
  return false;
}

std::string_view suffix_tag(std::string_view w) {
  if (ends_with_any(w, {"ly"})) return "ADV";
  if (ends_with_any(w, {"tion", "sion", "ment", "ness", "ity", "ism", "ist", "ship", "ance",
                        "ence", "ure", "age", "logy", "ia", "ists", "ments", "tions"})) {
    return "NOUN";
  }
  if (ends_with_any(w, {"ous", "ful", "ive", "able", "ible", "al", "ic", "less", "ary", "ical"})) {
    return "ADJ";
  }
  if (ends_with_any(w, {"ed", "ing", "ize", "ise", "ized", "ised", "ate", "ify"})) return "VERB";
  if (ends_with_any(w, {"s"}, 3) && !ends_with_any(w, {"ss", "us", "is"})) return "NOUN";
  return {};
}

std::string tag_one(std::string_view token) {
  if (is_numeral(token)) return "NUM";
  if (is_punctuation(token)) return "PUNCT";
  std::string lower = ascii_lower(token);
  auto it = lexicon().find(lower);
  if (it != lexicon().end()) return std::string(it->second);
  if (!is_alpha_word(token)) return "OTHER";

  // Hyphenated spelled-out numbers ("sixty-five").
  if (auto dash = lower.find('-'); dash != std::string::npos) {
    auto head = lexicon().find(std::string_view(lower).substr(0, dash));
    auto tail = lexicon().find(std::string_view(lower).substr(dash + 1));
    if (head != lexicon().end() && tail != lexicon().end() && head->second == "NUM" &&
        tail->second == "NUM") {
      return "NUM";
    }
  }
  if (auto tag = suffix_tag(lower); !tag.empty()) return std::string(tag);
  if (std::isupper(static_cast<unsigned char>(token.front()))) return "NOUN";
  return "OTHER";
}

}  // namespace

std::vector<std::string> pos_tag(std::span<const std::string> tokens) {
  std::vector<std::string> tags;
  tags.reserve(tokens.size());
  for (const auto &tok : tokens) tags.push_back(tag_one(tok));
  return tags;
}

}  // namespace outbreak::corpus

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

#include "outbreak/crf.h"
#include "outbreak/error.h"

namespace outbreak::crf {

namespace {

constexpr std::string_view kBos = "__BOS__";
constexpr std::string_view kEos = "__EOS__";

std::vector<std::string_view> code_points(std::string_view s) {
  std::vector<std::string_view> out;
  for (std::size_t i = 0; i < s.size();) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 6 ? 2 : (c >> 4) == 14 ? 3 : (c >> 3) == 30 ? 4 : 1;
    len = std::min(len, s.size() - i);
    out.push_back(s.substr(i, len));
    i += len;
  }
  return out;
}

std::string offset_name(char prefix, long offset, std::string_view value) {
  std::string name(1, prefix);
  name += '[';
  name += std::to_string(offset);
  name += "]=";
  name += value;
  return name;
}

}  // namespace

void FeatureConfig::validate() const {
  if (max_ngram_len < 1 || max_ngram_len > 12) {
    throw DomainError("max_ngram_len must lie in [1, 12], got " + std::to_string(max_ngram_len));
  }
  if (window < 0) throw DomainError("window must be non-negative");
  if (!(l2_lambda >= 0.0)) throw DomainError("l2_lambda must be non-negative");
}

std::string_view word_shape(std::string_view token) {
  if (token.empty()) return "other";
  std::size_t digits = 0, upper = 0, lower = 0, separators = 0, punct = 0;
  for (unsigned char c : token) {
    if (c >= 0x80) return "other";
    if (std::isdigit(c)) {
      ++digits;
    } else if (std::isupper(c)) {
      ++upper;
    } else if (std::islower(c)) {
      ++lower;
    } else if (std::ispunct(c)) {
      ++punct;
      if (c == ',' || c == '.') ++separators;
    } else {
      return "other";
    }
  }
  const std::size_t n = token.size();
  if (digits == n) return "all-digits";
  if (digits + separators == n && std::isdigit(static_cast<unsigned char>(token.front())) &&
      std::isdigit(static_cast<unsigned char>(token.back()))) {
    return "numeric";
  }
  if (punct == n) return "punct";
  if (upper + lower == n) {
    if (lower == 0 && n > 1) return "all-caps";
    if (lower == 0 || (upper == 1 && std::isupper(static_cast<unsigned char>(token.front())))) {
      return "init-cap";
    }
    if (upper == 0) return "lower";
  }
  return "mixed";
}

std::vector<std::string> extract_features(std::span<const std::string> tokens,
                                          std::span<const std::string> pos,
                                          std::size_t position, const FeatureConfig &config) {
  if (position >= tokens.size()) throw DomainError("feature position out of range");
  if (config.use_pos && pos.size() != tokens.size()) {
    throw DomainError("POS tags are not aligned with tokens");
  }
  std::vector<std::string> names;
  const long n = static_cast<long>(tokens.size());
  const long at = static_cast<long>(position);
  for (long off = -config.window; off <= config.window; ++off) {
    const long i = at + off;
    const bool before = i < 0;
    const bool after = i >= n;
    names.push_back(offset_name('w', off, before  ? kBos
                                          : after ? kEos
                                                  : std::string_view(tokens[i])));
    if (config.use_pos) {
      names.push_back(offset_name('p', off, before  ? kBos
                                            : after ? kEos
                                                    : std::string_view(pos[i])));
    }
  }
  if (config.use_shape) names.push_back("shape=" + std::string(word_shape(tokens[position])));

  auto points = code_points(tokens[position]);
  const std::size_t cap = static_cast<std::size_t>(std::max(config.max_ngram_len, 0));
  for (std::size_t start = 0; start < points.size(); ++start) {
    std::string gram = "ng=";
    for (std::size_t len = 1; len <= cap && start + len <= points.size(); ++len) {
      gram += points[start + len - 1];
      names.push_back(gram);
    }
  }
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  return names;
}

}  // namespace outbreak::crf

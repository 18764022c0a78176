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

#ifndef OUTBREAK_SRC_WIKITEXT_SCAN_H_
#define OUTBREAK_SRC_WIKITEXT_SCAN_H_

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>

// Delimiter matching shared by the markup stripper and the table parser.
// Every function returns the offset one past the closing delimiter, or npos
// when the construct is unterminated.
namespace outbreak::wikitext::scan {

inline constexpr std::size_t npos = std::string_view::npos;

inline bool starts_with_ci(std::string_view s, std::size_t pos, std::string_view prefix) {
  if (pos + prefix.size() > s.size()) return false;
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    if (std::tolower(static_cast<unsigned char>(s[pos + k])) !=
        std::tolower(static_cast<unsigned char>(prefix[k]))) {
      return false;
    }
  }
  return true;
}

inline std::size_t find_ci(std::string_view s, std::string_view needle, std::size_t from) {
  for (std::size_t i = from; i + needle.size() <= s.size(); ++i) {
    if (starts_with_ci(s, i, needle)) return i;
  }
  return npos;
}

inline std::size_t skip_comment(std::string_view s, std::size_t pos) {
  std::size_t end = s.find("-->", pos + 4);
  return end == npos ? npos : end + 3;
}

// pos at "{{".
inline std::size_t skip_template(std::string_view s, std::size_t pos) {
  int depth = 0;
  std::size_t i = pos;
  while (i < s.size()) {
    if (s.compare(i, 4, "<!--") == 0) {
      std::size_t end = skip_comment(s, i);
      if (end == npos) return npos;
      i = end;
    } else if (s.compare(i, 2, "{{") == 0) {
      ++depth;
      i += 2;
    } else if (s.compare(i, 2, "}}") == 0) {
      --depth;
      i += 2;
      if (depth == 0) return i;
    } else {
      ++i;
    }
  }
  return npos;
}

// pos at "{|". Templates and comments inside the table are skipped so that
// a "|}}" closing a template does not close the table.
inline std::size_t find_table_end(std::string_view s, std::size_t pos) {
  int depth = 0;
  std::size_t i = pos;
  while (i < s.size()) {
    if (s.compare(i, 4, "<!--") == 0) {
      std::size_t end = skip_comment(s, i);
      if (end == npos) return npos;
      i = end;
    } else if (s.compare(i, 2, "{{") == 0) {
      std::size_t end = skip_template(s, i);
      i = end == npos ? i + 2 : end;
    } else if (s.compare(i, 2, "{|") == 0) {
      ++depth;
      i += 2;
    } else if (s.compare(i, 2, "|}") == 0) {
      --depth;
      i += 2;
      if (depth == 0) return i;
    } else {
      ++i;
    }
  }
  return npos;
}

// pos at "[[". Nested links (image captions) are matched.
inline std::size_t find_link_end(std::string_view s, std::size_t pos) {
  int depth = 0;
  std::size_t i = pos;
  while (i < s.size()) {
    if (s.compare(i, 2, "[[") == 0) {
      ++depth;
      i += 2;
    } else if (s.compare(i, 2, "]]") == 0) {
      --depth;
      i += 2;
      if (depth == 0) return i;
    } else if (s[i] == '\n' && i + 1 < s.size() && s[i + 1] == '\n') {
      return npos;  // links never span paragraphs
    } else {
      ++i;
    }
  }
  return npos;
}

// First '|' outside nested [[...]] and {{...}}.
inline std::size_t find_top_level_pipe(std::string_view s) {
  int links = 0;
  int templates = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.compare(i, 2, "[[") == 0) {
      ++links;
      ++i;
    } else if (s.compare(i, 2, "]]") == 0 && links > 0) {
      --links;
      ++i;
    } else if (s.compare(i, 2, "{{") == 0) {
      ++templates;
      ++i;
    } else if (s.compare(i, 2, "}}") == 0 && templates > 0) {
      --templates;
      ++i;
    } else if (s[i] == '|' && links == 0 && templates == 0) {
      return i;
    }
  }
  return npos;
}

}  // namespace outbreak::wikitext::scan

#endif  // OUTBREAK_SRC_WIKITEXT_SCAN_H_

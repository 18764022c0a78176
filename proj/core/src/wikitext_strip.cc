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
#include <array>
#include <cctype>

#include "outbreak/wikitext.h"
#include "wikitext_scan.h"

namespace outbreak::wikitext {

namespace {

constexpr std::array<std::string_view, 11> kDroppedContentTags = {
    "ref",    "math",   "gallery",  "timeline",     "score",       "syntaxhighlight",
    "source", "graph",  "imagemap", "templatedata", "references",
};

constexpr std::array<std::string_view, 6> kMediaNamespaces = {
    "file", "image", "category", "media", "fichier", "datei",
};

bool is_url_start(std::string_view s, std::size_t i) {
  for (std::string_view scheme : {"http://", "https://", "ftp://", "//", "mailto:"}) {
    if (scan::starts_with_ci(s, i, scheme)) return true;
  }
  return false;
}

std::size_t line_end(std::string_view s, std::size_t i) {
  std::size_t nl = s.find('\n', i);
  return nl == std::string_view::npos ? s.size() : nl;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_media_link(std::string_view target) {
  target = trim(target);
  if (!target.empty() && target.front() == ':') target.remove_prefix(1);
  auto colon = target.find(':');
  if (colon == std::string_view::npos) return false;
  std::string ns = lower(trim(target.substr(0, colon)));
  return std::find(kMediaNamespaces.begin(), kMediaNamespaces.end(), ns) !=
         kMediaNamespaces.end();
}

std::string render_table(std::string_view block) {
  std::string out;
  auto tables = parse_tables(block);
  if (tables.empty()) return out;
  const RawTable &t = tables.front();
  auto emit_row = [&out](const std::vector<std::string> &cells) {
    std::string line;
    for (const auto &c : cells) {
      if (c.empty()) continue;
      if (!line.empty()) line += ' ';
      line += c;
    }
    if (!line.empty()) out += "\n" + line;
  };
  emit_row(t.header);
  for (const auto &row : t.rows) emit_row(row);
  out += '\n';
  return out;
}

class InlineStripper {
 public:
  InlineStripper(std::string_view text, bool remove_tables)
      : s_(text), remove_tables_(remove_tables) {}

  std::string run() {
    std::size_t i = 0;
    while (i < s_.size()) i = step(i);
    return std::move(out_);
  }

 private:
  std::size_t step(std::size_t i) {
    char c = s_[i];
    if (c == '<' && s_.compare(i, 4, "<!--") == 0) {
      std::size_t end = s_.find("-->", i + 4);
      if (end == std::string_view::npos) {
        spdlog::debug("unterminated comment at byte {}", i);
        return s_.size();
      }
      return end + 3;
    }
    if (c == '{' && i + 1 < s_.size() && s_[i + 1] == '{') {
      std::size_t end = scan::skip_template(s_, i);
      if (end == std::string_view::npos) {
        spdlog::debug("unterminated template at byte {}", i);
        return line_end(s_, i);
      }
      return end;
    }
    if (c == '{' && i + 1 < s_.size() && s_[i + 1] == '|') {
      std::size_t end = scan::find_table_end(s_, i);
      if (end == std::string_view::npos) {
        spdlog::debug("unterminated table at byte {}", i);
        return s_.size();
      }
      if (!remove_tables_) out_ += render_table(s_.substr(i, end - i));
      return end;
    }
    if (c == '[' && i + 1 < s_.size() && s_[i + 1] == '[') return internal_link(i);
    if (c == '[' && is_url_start(s_, i + 1)) return external_link(i);
    if (c == '<') return tag(i);
    if (c == '\'' && i + 1 < s_.size() && s_[i + 1] == '\'') {
      while (i < s_.size() && s_[i] == '\'') ++i;
      return i;
    }
    if (c == '_' && s_.compare(i, 2, "__") == 0) {
      std::size_t j = i + 2;
      while (j < s_.size() && std::isupper(static_cast<unsigned char>(s_[j]))) ++j;
      if (j > i + 2 && s_.compare(j, 2, "__") == 0) return j + 2;
    }
    if (c == '&') {
      if (s_.compare(i, 6, "&nbsp;") == 0) {
        out_ += ' ';
        return i + 6;
      }
      if (s_.compare(i, 7, "&ndash;") == 0) {
        out_ += "–";
        return i + 7;
      }
      if (s_.compare(i, 7, "&mdash;") == 0) {
        out_ += "—";
        return i + 7;
      }
    }
    out_ += c;
    return i + 1;
  }

  std::size_t internal_link(std::size_t i) {
    std::size_t end = scan::find_link_end(s_, i);
    if (end == std::string_view::npos) {
      spdlog::debug("unterminated link at byte {}", i);
      return i + 2;
    }
    std::string_view inner = s_.substr(i + 2, end - i - 4);
    std::size_t pipe = scan::find_top_level_pipe(inner);
    std::string_view target = inner.substr(0, pipe);
    if (is_media_link(target)) return end;
    std::string_view display = pipe == std::string_view::npos ? target : inner.substr(pipe + 1);
    out_ += InlineStripper(display, remove_tables_).run();
    return end;
  }

  std::size_t external_link(std::size_t i) {
    std::size_t close = s_.find(']', i);
    std::size_t eol = line_end(s_, i);
    if (close == std::string_view::npos || close > eol) {
      out_ += '[';
      return i + 1;
    }
    std::string_view inner = s_.substr(i + 1, close - i - 1);
    auto space = inner.find(' ');
    if (space != std::string_view::npos) {
      out_ += InlineStripper(inner.substr(space + 1), remove_tables_).run();
    }
    return close + 1;
  }

  std::size_t tag(std::size_t i) {
    std::size_t j = i + 1;
    bool closing = j < s_.size() && s_[j] == '/';
    if (closing) ++j;
    std::size_t name_begin = j;
    while (j < s_.size() && std::isalnum(static_cast<unsigned char>(s_[j]))) ++j;
    if (j == name_begin || !std::isalpha(static_cast<unsigned char>(s_[name_begin])) ||
        (j < s_.size() && !(s_[j] == '>' || s_[j] == '/' || std::isspace(static_cast<unsigned char>(s_[j]))))) {
      out_ += '<';
      return i + 1;
    }
    std::size_t gt = s_.find('>', j);
    if (gt == std::string_view::npos) {
      out_ += '<';
      return i + 1;
    }
    std::string name = lower(s_.substr(name_begin, j - name_begin));
    bool self_closing = s_[gt - 1] == '/';
    std::size_t after = gt + 1;
    if (closing || self_closing) {
      if (name == "br" ) out_ += ' ';
      return after;
    }
    if (name == "br") {
      out_ += ' ';
      return after;
    }
    bool drop = std::find(kDroppedContentTags.begin(), kDroppedContentTags.end(), name) !=
                kDroppedContentTags.end();
    if (drop || name == "nowiki" || name == "pre") {
      std::size_t close = scan::find_ci(s_, "</" + name, after);
      if (close == std::string_view::npos) {
        spdlog::debug("unterminated <{}> at byte {}", name, i);
        if (!drop) return after;
        return line_end(s_, after);
      }
      if (!drop) out_ += s_.substr(after, close - after);
      std::size_t close_gt = s_.find('>', close);
      return close_gt == std::string_view::npos ? s_.size() : close_gt + 1;
    }
    return after;
  }

  std::string_view s_;
  bool remove_tables_;
  std::string out_;
};

std::string clean_lines(std::string_view text) {
  std::string out;
  std::size_t pos = 0;
  bool first = true;
  bool previous_blank = false;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) {
      line.remove_suffix(1);
    }
    std::string_view body = line;
    while (!body.empty() && (body.front() == ' ' || body.front() == '\t')) body.remove_prefix(1);
    if (!body.empty() && body.front() == '=' && body.back() == '=') {
      while (!body.empty() && body.front() == '=') body.remove_prefix(1);
      while (!body.empty() && body.back() == '=') body.remove_suffix(1);
      line = trim(body);
    } else if (!body.empty() && std::string_view("*#:;").find(body.front()) != body.npos) {
      while (!body.empty() && std::string_view("*#:;").find(body.front()) != body.npos) {
        body.remove_prefix(1);
      }
      line = trim(body);
    } else if (body.starts_with("----") &&
               body.find_first_not_of('-') == std::string_view::npos) {
      line = {};
    }
    // Runs of blank lines collapse to one; leading blanks are dropped.
    if (!line.empty() || (!first && !previous_blank)) {
      if (!first) out += '\n';
      out += line;
      first = false;
      previous_blank = line.empty();
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  while (!out.empty() && out.back() == '\n') out.pop_back();
  return out;
}

}  // namespace

std::string strip_markup(std::string_view wikitext, bool remove_tables) {
  std::string current = clean_lines(InlineStripper(wikitext, remove_tables).run());
  // Removing one construct can splice together the delimiters of another
  // ("{<!-- -->{x}}"); iterate to a fixed point.
  for (int pass = 0; pass < 4; ++pass) {
    std::string next = clean_lines(InlineStripper(current, remove_tables).run());
    if (next == current) break;
    current = std::move(next);
  }
  return current;
}

}  // namespace outbreak::wikitext

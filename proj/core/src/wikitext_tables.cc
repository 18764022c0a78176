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
#include <charconv>

#include "outbreak/wikitext.h"
#include "wikitext_scan.h"

namespace outbreak::wikitext {

namespace {

constexpr int kMaxSpan = 500;

struct Cell {
  std::string raw;
  bool header = false;
  int rowspan = 1;
  int colspan = 1;
};

using Row = std::vector<Cell>;

int span_attribute(std::string_view attrs, std::string_view name) {
  std::size_t at = scan::find_ci(attrs, name, 0);
  if (at == scan::npos) return 1;
  std::size_t i = at + name.size();
  while (i < attrs.size() && (attrs[i] == ' ' || attrs[i] == '=' || attrs[i] == '"' ||
                              attrs[i] == '\'')) {
    ++i;
  }
  int value = 0;
  auto [ptr, ec] = std::from_chars(attrs.data() + i, attrs.data() + attrs.size(), value);
  if (ec != std::errc() || value < 1) return 1;
  return std::min(value, kMaxSpan);
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = true;
    } else {
      if (space && !out.empty()) out += ' ';
      space = false;
      out += c;
    }
  }
  return out;
}

// Splits "a || b || c" (or "!!" on header lines) at top level.
std::vector<std::string_view> split_cells(std::string_view line, bool header) {
  std::vector<std::string_view> cells;
  int links = 0;
  int templates = 0;
  std::size_t begin = 0;
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    if (line.compare(i, 2, "[[") == 0) {
      ++links;
      ++i;
    } else if (line.compare(i, 2, "]]") == 0 && links > 0) {
      --links;
      ++i;
    } else if (line.compare(i, 2, "{{") == 0) {
      ++templates;
      ++i;
    } else if (line.compare(i, 2, "}}") == 0 && templates > 0) {
      --templates;
      ++i;
    } else if (links == 0 && templates == 0 &&
               (line.compare(i, 2, "||") == 0 || (header && line.compare(i, 2, "!!") == 0))) {
      cells.push_back(line.substr(begin, i - begin));
      begin = i + 2;
      ++i;
    }
  }
  cells.push_back(line.substr(begin));
  return cells;
}

Cell make_cell(std::string_view text, bool header) {
  Cell cell;
  cell.header = header;
  std::size_t pipe = scan::find_top_level_pipe(text);
  if (pipe != scan::npos) {
    std::string_view attrs = text.substr(0, pipe);
    cell.rowspan = span_attribute(attrs, "rowspan");
    cell.colspan = span_attribute(attrs, "colspan");
    text = text.substr(pipe + 1);
  }
  cell.raw = std::string(text);
  return cell;
}

// Expands spans into a grid. Each output cell remembers whether the row
// that owns it declared it as a header cell.
struct Grid {
  std::vector<std::vector<std::string>> cells;
  std::vector<bool> all_header;  // per row: every declared cell is "!"
};

Grid expand(const std::vector<Row> &rows) {
  struct Pending {
    int remaining = 0;
    std::string text;
  };
  Grid grid;
  std::vector<Pending> pending;
  for (const Row &row : rows) {
    std::vector<std::string> out;
    std::size_t col = 0;
    auto fill_pending = [&] {
      while (col < pending.size() && pending[col].remaining > 0) {
        out.push_back(pending[col].text);
        --pending[col].remaining;
        ++col;
      }
    };
    bool all_header = true;
    for (const Cell &cell : row) {
      fill_pending();
      all_header = all_header && cell.header;
      std::string text = collapse_whitespace(strip_markup(cell.raw, true));
      for (int k = 0; k < cell.colspan; ++k) {
        out.push_back(text);
        if (pending.size() <= col) pending.resize(col + 1);
        if (cell.rowspan > 1) pending[col] = {cell.rowspan - 1, text};
        ++col;
      }
    }
    // Spans reaching past the last declared cell of this row.
    for (std::size_t c = col; c < pending.size(); ++c) {
      if (pending[c].remaining > 0) {
        out.resize(c, std::string());
        out.push_back(pending[c].text);
        --pending[c].remaining;
      }
    }
    grid.cells.push_back(std::move(out));
    grid.all_header.push_back(all_header);
  }
  return grid;
}

RawTable assemble(const std::vector<Row> &rows, std::size_t begin, std::size_t end) {
  RawTable table;
  table.begin = begin;
  table.end = end;
  Grid grid = expand(rows);

  std::size_t header_rows = 0;
  while (header_rows < grid.cells.size() && grid.all_header[header_rows]) ++header_rows;

  std::size_t width = 0;
  for (const auto &r : grid.cells) width = std::max(width, r.size());

  table.header.assign(width, std::string());
  for (std::size_t c = 0; c < width; ++c) {
    std::string merged;
    std::string last;
    for (std::size_t r = 0; r < header_rows; ++r) {
      const auto &cells = grid.cells[r];
      if (c >= cells.size() || cells[c].empty() || cells[c] == last) continue;
      if (!merged.empty()) merged += ' ';
      merged += cells[c];
      last = cells[c];
    }
    table.header[c] = std::move(merged);
  }
  for (std::size_t r = header_rows; r < grid.cells.size(); ++r) {
    auto row = std::move(grid.cells[r]);
    row.resize(width);
    table.rows.push_back(std::move(row));
  }
  return table;
}

class TableParser {
 public:
  TableParser(std::string_view text, std::vector<TableWarning> *warnings)
      : s_(text), warnings_(warnings) {}

  std::vector<RawTable> run() {
    std::size_t i = 0;
    while (i < s_.size()) {
      if (s_.compare(i, 4, "<!--") == 0) {
        std::size_t end = scan::skip_comment(s_, i);
        if (end == scan::npos) break;
        i = end;
      } else if (s_.compare(i, 2, "{{") == 0) {
        std::size_t end = scan::skip_template(s_, i);
        i = end == scan::npos ? i + 2 : end;
      } else if (s_.compare(i, 2, "{|") == 0) {
        std::size_t end = scan::find_table_end(s_, i);
        if (end == scan::npos) {
          warn(i, "unterminated table");
          i += 2;
        } else {
          parse_block(i, end);
          i = end;
        }
      } else {
        ++i;
      }
    }
    return std::move(tables_);
  }

 private:
  void warn(std::size_t offset, std::string message) {
    spdlog::debug("table at byte {}: {}", offset, message);
    if (warnings_) warnings_->push_back({offset, std::move(message)});
  }

  // [begin, end) spans "{|" ... "|}".
  void parse_block(std::size_t begin, std::size_t end) {
    std::size_t slot = tables_.size();
    tables_.emplace_back();

    // Content without nested tables and comments; nested blocks are parsed
    // on their own.
    std::string flat;
    std::size_t i = begin + 2;
    const std::size_t stop = end - 2;
    while (i < stop) {
      if (s_.compare(i, 4, "<!--") == 0) {
        std::size_t e = scan::skip_comment(s_, i);
        i = e == scan::npos || e > stop ? stop : e;
      } else if (s_.compare(i, 2, "{{") == 0) {
        std::size_t e = scan::skip_template(s_, i);
        if (e == scan::npos || e > stop) e = i + 2;
        flat.append(s_.substr(i, e - i));
        i = e;
      } else if (s_.compare(i, 2, "{|") == 0) {
        std::size_t e = scan::find_table_end(s_, i);
        if (e == scan::npos || e > stop) {
          warn(i, "unterminated nested table");
          i += 2;
        } else {
          parse_block(i, e);
          i = e;
        }
      } else {
        flat.push_back(s_[i]);
        ++i;
      }
    }
    tables_[slot] = assemble(parse_rows(flat), begin, end);
  }

  static std::vector<Row> parse_rows(std::string_view content) {
    std::vector<Row> rows;
    Row current;
    Cell *last = nullptr;
    bool in_caption = false;
    bool first_line = true;
    std::size_t pos = 0;
    while (pos <= content.size()) {
      std::size_t nl = content.find('\n', pos);
      std::string_view line =
          content.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
      pos = nl == std::string_view::npos ? content.size() + 1 : nl + 1;
      if (first_line) {  // table attributes
        first_line = false;
        continue;
      }
      std::string_view body = line;
      while (!body.empty() && (body.front() == ' ' || body.front() == '\t')) body.remove_prefix(1);
      if (body.starts_with("|+")) {
        in_caption = true;
        last = nullptr;
      } else if (body.starts_with("|-")) {
        in_caption = false;
        if (!current.empty()) rows.push_back(std::move(current));
        current.clear();
        last = nullptr;
      } else if (body.starts_with("!") || body.starts_with("|")) {
        in_caption = false;
        bool header = body.front() == '!';
        for (std::string_view piece : split_cells(body.substr(1), header)) {
          current.push_back(make_cell(piece, header));
        }
        last = &current.back();
      } else if (last != nullptr && !in_caption) {
        last->raw += '\n';
        last->raw += line;
      }
    }
    if (!current.empty()) rows.push_back(std::move(current));
    return rows;
  }

  std::string_view s_;
  std::vector<TableWarning> *warnings_;
  std::vector<RawTable> tables_;
};

}  // namespace

std::vector<RawTable> parse_tables(std::string_view wikitext,
                                   std::vector<TableWarning> *warnings) {
  return TableParser(wikitext, warnings).run();
}

}  // namespace outbreak::wikitext

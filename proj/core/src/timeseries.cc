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
#include "json.hpp"

#include "outbreak/error.h"
#include "outbreak/timeseries.h"

namespace outbreak::timeseries {

namespace {

using json = nlohmann::ordered_json;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

// True when `phrase` occurs in `text` bounded by non-alphanumerics.
bool contains_phrase(std::string_view text, std::string_view phrase) {
  if (phrase.empty()) return false;
  for (std::size_t pos = text.find(phrase); pos != std::string_view::npos;
       pos = text.find(phrase, pos + 1)) {
    const bool left = pos == 0 || !is_word_char(text[pos - 1]);
    const std::size_t end = pos + phrase.size();
    const bool right = end == text.size() || !is_word_char(text[end]);
    if (left && right) return true;
  }
  return false;
}

bool matches_any(std::string_view header, const std::vector<std::string> &aliases) {
  return std::any_of(aliases.begin(), aliases.end(),
                     [&](const std::string &a) { return contains_phrase(header, lower(a)); });
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Cell value with trailing footnote marks ("1,022*", "759 (est.)") removed.
std::optional<double> cell_count(std::string_view cell) {
  cell = trim(cell);
  std::size_t end = 0;
  while (end < cell.size() && !std::isspace(static_cast<unsigned char>(cell[end]))) ++end;
  std::string_view head = cell.substr(0, end);
  while (!head.empty() && (head.back() == '*' || head.back() == '+' || head.back() == ')' ||
                           head.back() == ']')) {
    head.remove_suffix(1);
  }
  return parse_count(head);
}

struct ColumnPlan {
  std::size_t date_column = 0;
  std::vector<std::pair<SeriesKey, std::size_t>> columns;
};

std::optional<ColumnPlan> plan_columns(const wikitext::RawTable &table,
                                       const ColumnMapping &mapping) {
  std::optional<std::size_t> date_column;
  std::vector<std::pair<SeriesKey, std::size_t>> columns;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    const std::string header = lower(table.header[c]);
    if (!date_column && matches_any(header, mapping.date_aliases)) {
      date_column = c;
      continue;
    }
    for (const auto &[country, aliases] : mapping.countries) {
      if (!matches_any(header, aliases)) continue;
      for (const auto &[metric, metric_aliases] : mapping.metric_aliases) {
        if (!matches_any(header, metric_aliases)) continue;
        SeriesKey key{country, metric};
        bool taken = std::any_of(columns.begin(), columns.end(),
                                 [&](const auto &p) { return p.first == key; });
        if (!taken) columns.emplace_back(key, c);
        break;
      }
      break;
    }
  }
  if (!date_column || columns.empty()) return std::nullopt;
  return ColumnPlan{*date_column, std::move(columns)};
}

json series_to_json(const TimeSeries &s) {
  json points = json::array();
  for (const auto &[d, v] : s.points) points.push_back(json::array({format_date(d), v}));
  json filled = json::array();
  for (const auto &d : s.interpolated_dates) filled.push_back(format_date(d));
  json j = {{"country", s.country}, {"metric", metric_name(s.metric)}};
  j["source_revision"] = s.source_revision ? json(*s.source_revision) : json(nullptr);
  j["points"] = std::move(points);
  j["interpolated"] = std::move(filled);
  return j;
}

TimeSeries series_from_json(const json &j) {
  TimeSeries s;
  s.country = j.at("country").get<std::string>();
  auto metric = parse_metric(j.at("metric").get<std::string>());
  if (!metric) throw ParseError("unknown metric in series JSON");
  s.metric = *metric;
  if (!j.at("source_revision").is_null()) {
    s.source_revision = j.at("source_revision").get<ingest::RevisionId>();
  }
  for (const auto &p : j.at("points")) {
    s.points[parse_iso_date(p.at(0).get<std::string>())] = p.at(1).get<double>();
  }
  for (const auto &d : j.at("interpolated")) {
    s.interpolated_dates.insert(parse_iso_date(d.get<std::string>()));
  }
  return s;
}

}  // namespace

std::string_view metric_name(Metric metric) {
  return metric == Metric::kCases ? "cases" : "deaths";
}

std::optional<Metric> parse_metric(std::string_view name) {
  if (name == "cases") return Metric::kCases;
  if (name == "deaths") return Metric::kDeaths;
  return std::nullopt;
}

bool same_values(const TimeSeries &a, const TimeSeries &b) {
  return a.country == b.country && a.metric == b.metric && a.points == b.points;
}

ColumnMapping ColumnMapping::ebola_defaults() {
  ColumnMapping m;
  m.date_aliases = {"date", "as of"};
  m.metric_aliases = {{Metric::kCases, {"cases", "case"}},
                      {Metric::kDeaths, {"deaths", "death"}}};
  m.countries = {
      {"Guinea", {"guinea"}},
      {"Liberia", {"liberia"}},
      {"Sierra Leone", {"sierra leone"}},
      {"Nigeria", {"nigeria"}},
      {"Senegal", {"senegal"}},
      {"Spain", {"spain"}},
      {"United States", {"united states", "usa", "u.s."}},
      {"Mali", {"mali"}},
      {"United Kingdom", {"united kingdom", "uk"}},
      {"Italy", {"italy"}},
  };
  return m;
}

ColumnMapping ColumnMapping::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception &e) {
    throw ParseError(std::string("column mapping: ") + e.what());
  }
  try {
    ColumnMapping m;
    m.date_aliases = j.at("date").get<std::vector<std::string>>();
    for (const auto &[name, aliases] : j.at("metrics").items()) {
      auto metric = parse_metric(name);
      if (!metric) throw ParseError("column mapping: unknown metric '" + name + "'");
      m.metric_aliases.emplace_back(*metric, aliases.get<std::vector<std::string>>());
    }
    for (const auto &[country, aliases] : j.at("countries").items()) {
      m.countries.emplace_back(country, aliases.get<std::vector<std::string>>());
    }
    if (m.date_aliases.empty() || m.metric_aliases.empty() || m.countries.empty()) {
      throw ParseError("column mapping: date, metrics and countries must be non-empty");
    }
    return m;
  } catch (const json::exception &e) {
    throw ParseError(std::string("column mapping: ") + e.what());
  }
}

std::string ColumnMapping::to_json() const {
  json metrics = json::object();
  for (const auto &[metric, aliases] : metric_aliases) metrics[metric_name(metric)] = aliases;
  json country_map = json::object();
  for (const auto &[country, aliases] : countries) country_map[country] = aliases;
  json j = {{"date", date_aliases}, {"metrics", metrics}, {"countries", country_map}};
  return j.dump(2) + "\n";
}

std::optional<double> parse_count(std::string_view cell) {
  cell = trim(cell);
  if (cell.empty()) return std::nullopt;
  std::string digits;
  bool seen_point = false;
  for (std::size_t i = 0; i < cell.size(); ++i) {
    char c = cell[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits += c;
    } else if (c == ',' && !seen_point) {
      // Thousands separator: exactly three digits follow before the next separator.
      std::size_t run = 0;
      while (i + 1 + run < cell.size() &&
             std::isdigit(static_cast<unsigned char>(cell[i + 1 + run]))) {
        ++run;
      }
      if (digits.empty() || run != 3) return std::nullopt;
    } else if (c == '.' && !seen_point && !digits.empty() && i + 1 < cell.size()) {
      seen_point = true;
      digits += c;
    } else {
      return std::nullopt;
    }
  }
  if (digits.empty()) return std::nullopt;
  return std::stod(digits);
}

std::optional<std::vector<TimeSeries>> extract_series(
    std::span<const wikitext::RawTable> tables, const ColumnMapping &mapping,
    std::optional<ingest::RevisionId> revision_id, std::vector<std::string> *warnings) {
  auto warn = [&](std::string message) {
    if (warnings) warnings->push_back(std::move(message));
  };
  for (const auto &table : tables) {
    auto plan = plan_columns(table, mapping);
    if (!plan) continue;

    std::vector<TimeSeries> out;
    for (const auto &[key, column] : plan->columns) {
      TimeSeries s;
      s.country = key.country;
      s.metric = key.metric;
      s.source_revision = revision_id;
      out.push_back(std::move(s));
    }
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const auto &row = table.rows[r];
      if (plan->date_column >= row.size()) continue;
      std::string_view date_cell = trim(row[plan->date_column]);
      if (date_cell.empty()) continue;
      auto date = parse_article_date(date_cell);
      if (!date) {
        warn("row " + std::to_string(r) + ": unparseable date '" + std::string(date_cell) + "'");
        continue;
      }
      for (std::size_t i = 0; i < plan->columns.size(); ++i) {
        const std::size_t column = plan->columns[i].second;
        if (column >= row.size()) continue;
        std::string_view cell = trim(row[column]);
        if (cell.empty() || cell == "-" || cell == "\xE2\x80\x94" || cell == "\xE2\x80\x93") {
          continue;
        }
        auto value = cell_count(cell);
        if (!value) {
          warn("row " + std::to_string(r) + ": unparseable count '" + std::string(cell) + "'");
          continue;
        }
        if (!out[i].points.emplace(*date, *value).second) {
          warn("row " + std::to_string(r) + ": repeated date " + format_date(*date) +
               " for " + out[i].country + " " + std::string(metric_name(out[i].metric)));
        }
      }
    }
    std::erase_if(out, [](const TimeSeries &s) { return s.points.empty(); });
    std::sort(out.begin(), out.end(),
              [](const TimeSeries &a, const TimeSeries &b) { return a.key() < b.key(); });
    return out;
  }
  return std::nullopt;
}

TimeSeries interpolate_daily(const TimeSeries &series) {
  TimeSeries out = series;
  if (series.points.size() < 2) return out;
  auto it = series.points.begin();
  auto next = std::next(it);
  for (; next != series.points.end(); ++it, ++next) {
    const auto [d0, v0] = *it;
    const auto [d1, v1] = *next;
    const double span = static_cast<double>((d1 - d0).count());
    for (Date d = d0 + std::chrono::days{1}; d < d1; d += std::chrono::days{1}) {
      const double offset = static_cast<double>((d - d0).count());
      out.points[d] = v0 + (v1 - v0) * offset / span;
      out.interpolated_dates.insert(d);
    }
  }
  return out;
}

bool same_values(const RevisionSeries &a, const RevisionSeries &b) {
  if (a.series.size() != b.series.size()) return false;
  for (std::size_t i = 0; i < a.series.size(); ++i) {
    if (!same_values(a.series[i], b.series[i])) return false;
  }
  return true;
}

std::vector<RevisionSeries> dedup_series(std::span<const RevisionSeries> per_revision) {
  std::vector<RevisionSeries> kept;
  for (const auto &set : per_revision) {
    if (!kept.empty() && same_values(kept.back(), set)) continue;
    kept.push_back(set);
  }
  return kept;
}

std::vector<RevisionSeries> extract_revision_series(
    std::span<const ingest::ArticleRevision> revisions, const ColumnMapping &mapping,
    ExtractionSummary *summary) {
  std::vector<RevisionSeries> out;
  ExtractionSummary local;
  for (const auto &rev : revisions) {
    ++local.revisions;
    std::vector<wikitext::TableWarning> table_warnings;
    auto tables = wikitext::parse_tables(rev.wikitext, &table_warnings);
    std::vector<std::string> warnings;
    auto series = extract_series(tables, mapping, rev.revision_id, &warnings);
    local.warnings += warnings.size() + table_warnings.size();
    for (const auto &w : warnings) spdlog::debug("revision {}: {}", rev.revision_id, w);
    for (const auto &w : table_warnings) {
      spdlog::debug("revision {}: offset {}: {}", rev.revision_id, w.offset, w.message);
    }
    if (!series || series->empty()) continue;
    ++local.matched;
    out.push_back({rev.revision_id, rev.timestamp, std::move(*series)});
  }
  if (summary) *summary = local;
  return out;
}

std::string revision_series_json(std::span<const RevisionSeries> sets) {
  json j = json::array();
  for (const auto &set : sets) {
    json series = json::array();
    for (const auto &s : set.series) series.push_back(series_to_json(s));
    j.push_back({{"revision_id", set.revision_id},
                 {"timestamp", format_timestamp(set.timestamp)},
                 {"series", std::move(series)}});
  }
  return j.dump(1) + "\n";
}

std::vector<RevisionSeries> revision_series_from_json(std::string_view text) {
  try {
    json j = json::parse(text);
    std::vector<RevisionSeries> out;
    for (const auto &item : j) {
      RevisionSeries set;
      set.revision_id = item.at("revision_id").get<ingest::RevisionId>();
      set.timestamp = parse_timestamp(item.at("timestamp").get<std::string>());
      for (const auto &s : item.at("series")) set.series.push_back(series_from_json(s));
      out.push_back(std::move(set));
    }
    return out;
  } catch (const json::exception &e) {
    throw ParseError(std::string("series JSON: ") + e.what());
  }
}

}  // namespace outbreak::timeseries

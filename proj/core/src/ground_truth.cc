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

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <tuple>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "outbreak/error.h"
#include "outbreak/report.h"
#include "outbreak/timeseries.h"

namespace outbreak::timeseries {

namespace {

using json = nlohmann::ordered_json;

// RFC 4180 fields of one line; quotes may wrap fields containing commas.
std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

bool read_line(std::istream &in, std::string &line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::optional<double> parse_number(std::string_view text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

// "SierraLeone" -> "Sierra Leone".
std::string split_camel(std::string_view name) {
  std::string out;
  for (std::size_t i = 0; i < name.size(); ++i) {
    if (i > 0 && std::isupper(static_cast<unsigned char>(name[i])) &&
        std::islower(static_cast<unsigned char>(name[i - 1]))) {
      out += ' ';
    }
    out += name[i];
  }
  return out;
}

}  // namespace

GroundTruthSet load_ground_truth(std::istream &in) {
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&line_no](const std::string &message) -> LoadError {
    return LoadError("ground truth row " + std::to_string(line_no) + ": " + message);
  };
  if (!read_line(in, line)) throw LoadError("ground truth is missing its header row");
  ++line_no;
  auto header = split_csv(line);
  auto column = [&](std::string_view name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw fail("missing column '" + std::string(name) + "'");
  };
  const std::size_t c_date = column("date");
  const std::size_t c_country = column("country");
  const std::size_t c_metric = column("metric");
  const std::size_t c_value = column("value");

  GroundTruthSet truth;
  while (read_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_csv(line);
    if (fields.size() != header.size()) {
      throw fail("expected " + std::to_string(header.size()) + " columns, found " +
                 std::to_string(fields.size()));
    }
    Date date;
    try {
      date = parse_iso_date(fields[c_date]);
    } catch (const ParseError &) {
      throw fail("bad date '" + fields[c_date] + "'");
    }
    if (fields[c_country].empty()) throw fail("empty country");
    auto metric = parse_metric(fields[c_metric]);
    if (!metric) throw fail("bad metric '" + fields[c_metric] + "'");
    auto value = parse_number(fields[c_value]);
    if (!value) throw fail("bad value '" + fields[c_value] + "'");
    if (*value < 0) throw fail("negative value " + fields[c_value]);

    SeriesKey key{fields[c_country], *metric};
    auto &series = truth.series[key];
    series.country = key.country;
    series.metric = key.metric;
    if (!series.points.emplace(date, *value).second) {
      throw fail("duplicate entry for " + fields[c_date] + " " + key.country + " " +
                 fields[c_metric]);
    }
  }
  for (auto &[key, series] : truth.series) series = interpolate_daily(series);
  return truth;
}

GroundTruthSet load_ground_truth(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open ground truth " + path.string());
  try {
    return load_ground_truth(in);
  } catch (const LoadError &e) {
    throw LoadError(path.string() + ": " + e.what());
  }
}

std::string import_rivers_csv(std::istream &in) {
  std::string line;
  if (!read_line(in, line)) throw LoadError("Rivers CSV is empty");
  auto header = split_csv(line);
  std::optional<std::size_t> date_column;
  std::vector<std::tuple<std::size_t, std::string, Metric>> columns;
  for (std::size_t i = 0; i < header.size(); ++i) {
    std::string_view h = header[i];
    if (h == "Date") {
      date_column = i;
    } else if (h.starts_with("Cases_")) {
      columns.emplace_back(i, split_camel(h.substr(6)), Metric::kCases);
    } else if (h.starts_with("Deaths_")) {
      columns.emplace_back(i, split_camel(h.substr(7)), Metric::kDeaths);
    }
  }
  if (!date_column) throw LoadError("Rivers CSV has no Date column");

  struct Row {
    Date date;
    std::string country;
    Metric metric;
    double value;
  };
  std::vector<Row> rows;
  std::set<std::tuple<Date, std::string, Metric>> seen;
  std::size_t line_no = 1;
  while (read_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_csv(line);
    if (*date_column >= fields.size()) {
      throw LoadError("Rivers CSV row " + std::to_string(line_no) + ": missing date");
    }
    auto date = parse_article_date(fields[*date_column]);
    if (!date) {
      throw LoadError("Rivers CSV row " + std::to_string(line_no) + ": bad date '" +
                      fields[*date_column] + "'");
    }
    for (const auto &[index, country, metric] : columns) {
      if (index >= fields.size() || fields[index].empty()) continue;
      auto value = parse_number(fields[index]);
      if (!value || *value < 0) {
        throw LoadError("Rivers CSV row " + std::to_string(line_no) + ": bad value '" +
                        fields[index] + "'");
      }
      if (!seen.emplace(*date, country, metric).second) {
        spdlog::warn("Rivers CSV row {}: duplicate {} {} {} ignored", line_no,
                     format_date(*date), country, metric_name(metric));
        continue;
      }
      rows.push_back({*date, country, metric, *value});
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row &a, const Row &b) {
    return std::tie(a.date, a.country, a.metric) < std::tie(b.date, b.country, b.metric);
  });
  std::string out = "date,country,metric,value\n";
  for (const auto &r : rows) {
    out += format_date(r.date) + "," + report::csv_field(r.country) + "," +
           std::string(metric_name(r.metric)) + "," + report::format_double(r.value) + "\n";
  }
  return out;
}

AlignedPair align(const TimeSeries &y_hat, const TimeSeries &y, std::optional<Date> from) {
  AlignedPair pair;
  for (const auto &[date, value] : y_hat.points) {
    if (from && date < *from) continue;
    auto it = y.points.find(date);
    if (it == y.points.end()) continue;
    pair.dates.push_back(date);
    pair.y_hat.push_back(value);
    pair.y.push_back(it->second);
  }
  if (pair.dates.empty()) {
    throw AlignmentError("no common dates for " + y_hat.country + " " +
                         std::string(metric_name(y_hat.metric)));
  }
  return pair;
}

double rmse(const AlignedPair &pair) {
  if (pair.n() == 0 || pair.y.size() != pair.n() || pair.y_hat.size() != pair.n()) {
    throw AlignmentError("RMSE needs two equal-length non-empty vectors");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < pair.n(); ++i) {
    const double d = pair.y_hat[i] - pair.y[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(pair.n()));
}

RmseReport rmse_report(std::span<const RevisionSeries> unique_sets, const GroundTruthSet &truth,
                       std::optional<Date> from) {
  RmseReport report;
  std::map<SeriesKey, std::pair<double, std::size_t>> sums;
  for (const auto &set : unique_sets) {
    for (const auto &series : set.series) {
      const SeriesKey key = series.key();
      auto it = truth.series.find(key);
      if (it == truth.series.end()) {
        report.gaps.push_back({set.revision_id, key, "no ground truth"});
        continue;
      }
      AlignedPair pair;
      try {
        pair = align(interpolate_daily(series), it->second, from);
      } catch (const AlignmentError &) {
        report.gaps.push_back({set.revision_id, key, "no overlapping dates"});
        continue;
      }
      const double value = rmse(pair);
      report.per_revision.push_back({set.revision_id, set.timestamp, key, value, pair.n()});
      auto &[sum, count] = sums[key];
      sum += value;
      ++count;
    }
  }
  for (const auto &[key, acc] : sums) {
    report.mean_per_country[key] = acc.first / static_cast<double>(acc.second);
  }
  return report;
}

void write_rmse_csv(std::ostream &out, const RmseReport &report) {
  out << "revision_id,timestamp,country,metric,rmse\n";
  for (const auto &e : report.per_revision) {
    out << e.revision_id << ',' << format_timestamp(e.timestamp) << ','
        << report::csv_field(e.key.country) << ',' << metric_name(e.key.metric) << ','
        << report::format_double(e.rmse) << '\n';
  }
}

void write_summary_csv(std::ostream &out, const RmseReport &report) {
  out << "country,metric,mean_rmse\n";
  for (const auto &[key, mean] : report.mean_per_country) {
    out << report::csv_field(key.country) << ',' << metric_name(key.metric) << ','
        << report::format_double(mean) << '\n';
  }
}

std::string rmse_report_json(const RmseReport &report) {
  json per_revision = json::array();
  for (const auto &e : report.per_revision) {
    per_revision.push_back({{"revision_id", e.revision_id},
                            {"timestamp", format_timestamp(e.timestamp)},
                            {"country", e.key.country},
                            {"metric", metric_name(e.key.metric)},
                            {"rmse", e.rmse},
                            {"n", e.n}});
  }
  json means = json::array();
  for (const auto &[key, mean] : report.mean_per_country) {
    means.push_back(
        {{"country", key.country}, {"metric", metric_name(key.metric)}, {"mean_rmse", mean}});
  }
  json gaps = json::array();
  for (const auto &g : report.gaps) {
    gaps.push_back({{"revision_id", g.revision_id},
                    {"country", g.key.country},
                    {"metric", metric_name(g.key.metric)},
                    {"reason", g.reason}});
  }
  json j = {{"per_revision", per_revision}, {"mean_per_country", means}, {"gaps", gaps}};
  return j.dump(2) + "\n";
}

}  // namespace outbreak::timeseries

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

#ifndef OUTBREAK_TIMESERIES_H_
#define OUTBREAK_TIMESERIES_H_

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "outbreak/date.h"
#include "outbreak/ingest.h"
#include "outbreak/wikitext.h"

namespace outbreak::timeseries {

enum class Metric { kCases, kDeaths };
std::string_view metric_name(Metric metric);
std::optional<Metric> parse_metric(std::string_view name);

struct SeriesKey {
  std::string country;
  Metric metric = Metric::kCases;

  auto operator<=>(const SeriesKey &) const = default;
  bool operator==(const SeriesKey &) const = default;
};

struct TimeSeries {
  std::string country;
  Metric metric = Metric::kCases;
  std::map<Date, double> points;
  std::optional<ingest::RevisionId> source_revision;
  std::set<Date> interpolated_dates;

  SeriesKey key() const { return {country, metric}; }
  bool operator==(const TimeSeries &) const = default;
};

// Same country, metric, dates and values. Provenance is ignored.
bool same_values(const TimeSeries &a, const TimeSeries &b);

// Header vocabulary used to find the date column and the per-country
// case/death columns of a table. Matching is on lowercased words.
struct ColumnMapping {
  std::vector<std::string> date_aliases;
  std::vector<std::pair<Metric, std::vector<std::string>>> metric_aliases;
  std::vector<std::pair<std::string, std::vector<std::string>>> countries;

  // Header words of the 2014 West Africa Ebola article tables.
  static ColumnMapping ebola_defaults();
  // {"date": [...], "metrics": {"cases": [...], ...},
  //  "countries": {"Guinea": [...], ...}}. Throws ParseError.
  static ColumnMapping from_json(std::string_view json);
  std::string to_json() const;
};

// Parses "1,022", "759", "3.5". nullopt on anything else or negatives.
std::optional<double> parse_count(std::string_view cell);

// Picks the first table with a date column and at least one matching
// (country, metric) column and emits one series per matched pair.
// Unparseable cells are skipped and reported. nullopt means no table
// matched.
std::optional<std::vector<TimeSeries>> extract_series(
    std::span<const wikitext::RawTable> tables, const ColumnMapping &mapping,
    std::optional<ingest::RevisionId> revision_id,
    std::vector<std::string> *warnings = nullptr);

// Fills every missing day between the first and last point by linear
// interpolation between the bracketing points. No extrapolation.
TimeSeries interpolate_daily(const TimeSeries &series);

// The series extracted from one revision, sorted by key.
struct RevisionSeries {
  ingest::RevisionId revision_id = 0;
  Timestamp timestamp{};
  std::vector<TimeSeries> series;
};

bool same_values(const RevisionSeries &a, const RevisionSeries &b);

// Drops a set iff it is value-identical to the most recently kept one.
std::vector<RevisionSeries> dedup_series(std::span<const RevisionSeries> per_revision);

struct ExtractionSummary {
  std::size_t revisions = 0;
  std::size_t matched = 0;
  std::size_t warnings = 0;
};

// Table parsing plus extract_series over a revision history. Revisions
// without a matching table are left out.
std::vector<RevisionSeries> extract_revision_series(
    std::span<const ingest::ArticleRevision> revisions, const ColumnMapping &mapping,
    ExtractionSummary *summary = nullptr);

struct GroundTruthSet {
  std::map<SeriesKey, TimeSeries> series;
};

// CSV with header date,country,metric,value. Every series is interpolated
// to daily values. Throws LoadError with the row number on a missing
// column, bad date, bad or negative value, or duplicate key.
GroundTruthSet load_ground_truth(std::istream &in);
GroundTruthSet load_ground_truth(const std::filesystem::path &path);

// Converts a country_timeseries.csv from the crowdsourced Ebola repository
// (Date,Day,Cases_Guinea,...,Deaths_Guinea,...) to canonical truth CSV.
std::string import_rivers_csv(std::istream &in);

struct AlignedPair {
  std::vector<Date> dates;
  std::vector<double> y_hat;
  std::vector<double> y;
  std::size_t n() const { return dates.size(); }
};

// Common dates of two daily series, optionally clipped to dates >= from.
// Throws AlignmentError when nothing is left.
AlignedPair align(const TimeSeries &y_hat, const TimeSeries &y,
                  std::optional<Date> from = std::nullopt);

double rmse(const AlignedPair &pair);

struct RmseEntry {
  ingest::RevisionId revision_id = 0;
  Timestamp timestamp{};
  SeriesKey key;
  double rmse = 0.0;
  std::size_t n = 0;
};

struct RmseGap {
  ingest::RevisionId revision_id = 0;
  SeriesKey key;
  std::string reason;
};

struct RmseReport {
  std::vector<RmseEntry> per_revision;         // by revision, then key
  std::map<SeriesKey, double> mean_per_country;  // equal weight per revision
  std::vector<RmseGap> gaps;
};

RmseReport rmse_report(std::span<const RevisionSeries> unique_sets,
                       const GroundTruthSet &truth, std::optional<Date> from);

// revision_id,timestamp,country,metric,rmse
void write_rmse_csv(std::ostream &out, const RmseReport &report);
// country,metric,mean_rmse
void write_summary_csv(std::ostream &out, const RmseReport &report);
std::string rmse_report_json(const RmseReport &report);

std::string revision_series_json(std::span<const RevisionSeries> sets);
std::vector<RevisionSeries> revision_series_from_json(std::string_view json);

}  // namespace outbreak::timeseries

#endif  // OUTBREAK_TIMESERIES_H_

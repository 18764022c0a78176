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

#include <charconv>
#include <fstream>
#include <ostream>

#include "outbreak/error.h"
#include "outbreak/report.h"

namespace outbreak::report {

std::vector<PlotRow> plot_rows(const timeseries::RmseReport &report) {
  std::vector<PlotRow> rows;
  for (const auto &e : report.per_revision) {
    rows.push_back({std::to_string(e.revision_id), e.key.country,
                    std::string(timeseries::metric_name(e.key.metric)), e.rmse});
  }
  return rows;
}

std::vector<PlotRow> plot_rows(std::span<const nereval::SweepRow> sweep) {
  std::vector<PlotRow> rows;
  for (const auto &r : sweep) {
    const std::string x = std::to_string(r.max_ngram_len);
    rows.push_back({x, "sweep", "precision", r.metrics.precision});
    rows.push_back({x, "sweep", "recall", r.metrics.recall});
    rows.push_back({x, "sweep", "f1", r.metrics.f1});
  }
  return rows;
}

std::vector<PlotRow> plot_rows(const nereval::MetricsReport &report) {
  std::vector<PlotRow> rows;
  for (const auto &[label, m] : report.per_label) {
    const std::string x(corpus::label_name(label));
    rows.push_back({x, "per_label", "precision", m.precision});
    rows.push_back({x, "per_label", "recall", m.recall});
    rows.push_back({x, "per_label", "f1", m.f1});
  }
  if (report.folds > 0) {
    rows.push_back({"aggregate", "aggregate", "precision", report.aggregate.precision});
    rows.push_back({"aggregate", "aggregate", "recall", report.aggregate.recall});
    rows.push_back({"aggregate", "aggregate", "f1", report.aggregate.f1});
  }
  return rows;
}

std::vector<PlotRow> plot_rows(const std::map<Date, std::size_t> &activity) {
  std::vector<PlotRow> rows;
  for (const auto &[date, count] : activity) {
    rows.push_back({format_date(date), "revisions", "count", static_cast<double>(count)});
  }
  return rows;
}

void write_plot_csv(std::ostream &out, std::span<const PlotRow> rows) {
  out << "x,series,metric,value\n";
  for (const auto &r : rows) {
    out << csv_field(r.x) << ',' << csv_field(r.series) << ',' << csv_field(r.metric) << ','
        << format_double(r.value) << '\n';
  }
}

void emit_plot_data(const std::filesystem::path &path, std::span<const PlotRow> rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_plot_csv(out, rows);
  if (!out.flush()) throw Error("failed writing " + path.string());
}

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

}  // namespace outbreak::report

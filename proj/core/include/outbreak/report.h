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

#ifndef OUTBREAK_REPORT_H_
#define OUTBREAK_REPORT_H_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "outbreak/date.h"
#include "outbreak/nereval.h"
#include "outbreak/timeseries.h"

namespace outbreak::report {

// One observation of tidy long-format plot data.
struct PlotRow {
  std::string x;
  std::string series;
  std::string metric;
  double value = 0.0;
};

std::vector<PlotRow> plot_rows(const timeseries::RmseReport &report);
std::vector<PlotRow> plot_rows(std::span<const nereval::SweepRow> sweep);
std::vector<PlotRow> plot_rows(const nereval::MetricsReport &report);
std::vector<PlotRow> plot_rows(const std::map<Date, std::size_t> &activity);

// Header x,series,metric,value then one line per row.
void write_plot_csv(std::ostream &out, std::span<const PlotRow> rows);
void emit_plot_data(const std::filesystem::path &path, std::span<const PlotRow> rows);

// Quotes a CSV field when it contains a comma, quote or line break.
std::string csv_field(std::string_view value);
// Shortest decimal form that reads back to the same double.
std::string format_double(double value);

}  // namespace outbreak::report

#endif  // OUTBREAK_REPORT_H_

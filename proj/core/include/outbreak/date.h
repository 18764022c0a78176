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

#ifndef OUTBREAK_DATE_H_
#define OUTBREAK_DATE_H_

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace outbreak {

// Calendar day in UTC.
using Date = std::chrono::sys_days;
// UTC instant with second precision.
using Timestamp = std::chrono::sys_seconds;

// "2014-06-30". Throws ParseError.
Date parse_iso_date(std::string_view text);
std::string format_date(Date date);

// "2014-03-29T18:00:00Z"; a bare date is accepted as midnight.
// Throws ParseError.
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);

// Lenient parser for dates as they appear in article tables and
// third-party CSV files: "30 June 2014", "30 Jun 2014", "June 30, 2014",
// "2014-06-30", "6/30/2014" (month first). Returns nullopt when the text is
// not a recognizable date.
std::optional<Date> parse_article_date(std::string_view text);

inline Date day_of(Timestamp ts) {
  return std::chrono::floor<std::chrono::days>(ts);
}

}  // namespace outbreak

#endif  // OUTBREAK_DATE_H_

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

#include "outbreak/date.h"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <string>
#include <vector>

#include "outbreak/error.h"

namespace outbreak {

namespace {

using std::chrono::day;
using std::chrono::month;
using std::chrono::year;
using std::chrono::year_month_day;

constexpr std::array<std::string_view, 12> kMonthNames = {
    "january", "february", "march",     "april",   "may",      "june",
    "july",    "august",   "september", "october", "november", "december",
};

bool parse_int(std::string_view s, int &out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::optional<Date> make_date(int y, int m, int d) {
  if (m < 1 || m > 12 || d < 1 || d > 31) return std::nullopt;
  year_month_day ymd{year{y}, month{static_cast<unsigned>(m)},
                     day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return Date{ymd};
}

// 1..12 for full names and three-letter abbreviations ("Sept" too).
int month_from_name(std::string_view word) {
  std::string lower;
  for (char c : word) {
    if (c == '.') continue;
    lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (lower.size() < 3) return 0;
  for (std::size_t i = 0; i < kMonthNames.size(); ++i) {
    if (lower == kMonthNames[i]) return static_cast<int>(i) + 1;
    if (lower.size() <= 4 && kMonthNames[i].starts_with(lower)) {
      return static_cast<int>(i) + 1;
    }
  }
  return 0;
}

std::vector<std::string_view> words(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() &&
           (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ',')) {
      ++i;
    }
    std::size_t j = i;
    while (j < text.size() &&
           !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != ',') {
      ++j;
    }
    if (j > i) out.push_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<Date> try_iso(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  int y, m, d;
  if (!parse_int(s.substr(0, 4), y) || !parse_int(s.substr(5, 2), m) ||
      !parse_int(s.substr(8, 2), d)) {
    return std::nullopt;
  }
  return make_date(y, m, d);
}

}  // namespace

Date parse_iso_date(std::string_view text) {
  if (auto d = try_iso(trim(text))) return *d;
  throw ParseError("bad ISO date: '" + std::string(text) + "'");
}

std::string format_date(Date date) {
  year_month_day ymd{date};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

Timestamp parse_timestamp(std::string_view text) {
  std::string_view s = trim(text);
  auto fail = [&]() -> Timestamp {
    throw ParseError("bad timestamp: '" + std::string(text) + "'");
  };
  auto date = try_iso(s.substr(0, std::min<std::size_t>(s.size(), 10)));
  if (!date) return fail();
  if (s.size() == 10) return Timestamp{*date};
  // 2014-03-29T18:00:00Z
  if (s.size() < 19 || (s[10] != 'T' && s[10] != ' ') || s[13] != ':' || s[16] != ':') {
    return fail();
  }
  int hh, mm, ss;
  if (!parse_int(s.substr(11, 2), hh) || !parse_int(s.substr(14, 2), mm) ||
      !parse_int(s.substr(17, 2), ss) || hh > 23 || mm > 59 || ss > 60) {
    return fail();
  }
  std::string_view rest = s.substr(19);
  if (!(rest.empty() || rest == "Z" || rest == "+00:00")) return fail();
  return Timestamp{*date} + std::chrono::hours{hh} + std::chrono::minutes{mm} +
         std::chrono::seconds{ss};
}

std::string format_timestamp(Timestamp ts) {
  Date d = day_of(ts);
  auto secs = (ts - Timestamp{d}).count();
  char buf[8 + 16];
  std::snprintf(buf, sizeof(buf), "T%02lld:%02lld:%02lldZ",
                static_cast<long long>(secs / 3600),
                static_cast<long long>(secs / 60 % 60),
                static_cast<long long>(secs % 60));
  return format_date(d) + buf;
}

std::optional<Date> parse_article_date(std::string_view text) {
  std::string_view s = trim(text);
  if (auto d = try_iso(s)) return d;

  // 6/30/2014
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto slash2 = s.find('/', slash + 1);
    if (slash2 == std::string_view::npos) return std::nullopt;
    int m, d, y;
    if (!parse_int(s.substr(0, slash), m) ||
        !parse_int(s.substr(slash + 1, slash2 - slash - 1), d) ||
        !parse_int(s.substr(slash2 + 1), y)) {
      return std::nullopt;
    }
    if (y < 100) y += 2000;
    return make_date(y, m, d);
  }

  auto w = words(s);
  if (w.size() != 3) return std::nullopt;
  int d, y, m;
  // 30 June 2014
  if (parse_int(w[0], d) && (m = month_from_name(w[1])) && parse_int(w[2], y)) {
    return make_date(y, m, d);
  }
  // June 30, 2014
  if ((m = month_from_name(w[0])) && parse_int(w[1], d) && parse_int(w[2], y)) {
    return make_date(y, m, d);
  }
  return std::nullopt;
}

}  // namespace outbreak

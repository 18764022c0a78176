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

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <system_error>

#include "json.hpp"
#include "outbreak/error.h"
#include "outbreak/ingest.h"

namespace outbreak::ingest {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string escape_title(std::string_view title) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : title) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 15]);
    }
  }
  return out;
}

void write_atomic(const fs::path &path, std::string_view data) {
  fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw Error("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json bound(const std::optional<Timestamp> &t) {
  return t ? json(format_timestamp(*t)) : json(nullptr);
}

std::optional<Timestamp> read_bound(const json &j) {
  if (j.is_null()) return std::nullopt;
  return parse_timestamp(j.get<std::string>());
}

json load_index(const fs::path &dir, const std::string &title) {
  fs::path path = dir / "index.json";
  if (!fs::exists(path)) {
    return json{{"title", title},
                {"revisions", json::array()},
                {"windows", json::array()},
                {"pending", nullptr}};
  }
  json index = json::parse(read_file(path), nullptr, false);
  if (index.is_discarded() || !index.is_object()) {
    throw ParseError("corrupt cache index " + path.string());
  }
  return index;
}

void save_index(const fs::path &dir, const json &index) {
  write_atomic(dir / "index.json", index.dump(1) + "\n");
}

bool same_window(const json &w, const RevisionQuery &q) {
  return w.at("start") == bound(q.start) && w.at("end") == bound(q.end);
}

}  // namespace

RevisionCache::RevisionCache(fs::path root, Mode mode) : root_(std::move(root)), mode_(mode) {}

fs::path RevisionCache::article_dir(const std::string &title) const {
  return root_ / escape_title(title);
}

void RevisionCache::require_writable() const {
  if (read_only()) throw Error("cache " + root_.string() + " is opened read-only");
}

bool RevisionCache::covers(const RevisionQuery &query) const {
  fs::path dir = article_dir(query.article_title);
  if (!fs::exists(dir / "index.json")) return false;
  json index = load_index(dir, query.article_title);
  for (const auto &w : index["windows"]) {
    auto ws = read_bound(w.at("start"));
    auto we = read_bound(w.at("end"));
    bool start_ok = !ws || (query.start && *ws <= *query.start);
    // A fetch without an end bound is taken as complete for any end bound;
    // refreshing it requires a new cache directory.
    bool end_ok = !we || (query.end && *query.end <= *we);
    if (start_ok && end_ok) return true;
  }
  return false;
}

std::vector<ArticleRevision> RevisionCache::load(const std::string &title,
                                                 std::optional<Timestamp> start,
                                                 std::optional<Timestamp> end) const {
  fs::path dir = article_dir(title);
  std::vector<ArticleRevision> out;
  if (!fs::exists(dir / "index.json")) return out;
  json index = load_index(dir, title);
  for (const auto &entry : index["revisions"]) {
    Timestamp ts = parse_timestamp(entry.at("timestamp").get<std::string>());
    if ((start && ts < *start) || (end && ts > *end)) continue;
    auto id = entry.at("revid").get<RevisionId>();
    out.push_back(revision_from_record(read_file(dir / ("rev-" + std::to_string(id) + ".json"))));
  }
  std::sort(out.begin(), out.end(), [](const ArticleRevision &a, const ArticleRevision &b) {
    return std::tie(a.timestamp, a.revision_id) < std::tie(b.timestamp, b.revision_id);
  });
  return out;
}

void RevisionCache::store(const std::string &title, std::span<const ApiPage::Record> records) {
  require_writable();
  if (records.empty()) return;
  fs::path dir = article_dir(title);
  json index = load_index(dir, title);
  std::vector<RevisionId> known;
  for (const auto &e : index["revisions"]) known.push_back(e.at("revid").get<RevisionId>());
  std::sort(known.begin(), known.end());
  for (const auto &record : records) {
    const ArticleRevision &rev = *record.revision;
    write_atomic(dir / ("rev-" + std::to_string(rev.revision_id) + ".json"), record.raw_json);
    if (!std::binary_search(known.begin(), known.end(), rev.revision_id)) {
      index["revisions"].push_back(
          {{"revid", rev.revision_id}, {"timestamp", format_timestamp(rev.timestamp)}});
    }
  }
  save_index(dir, index);
}

std::string RevisionCache::pending_continuation(const RevisionQuery &query) const {
  fs::path dir = article_dir(query.article_title);
  if (!fs::exists(dir / "index.json")) return {};
  json index = load_index(dir, query.article_title);
  const json &pending = index["pending"];
  if (pending.is_object() && same_window(pending, query)) {
    return pending.at("rvcontinue").get<std::string>();
  }
  return {};
}

void RevisionCache::set_pending(const RevisionQuery &query, const std::string &token) {
  require_writable();
  fs::path dir = article_dir(query.article_title);
  json index = load_index(dir, query.article_title);
  index["pending"] = {{"start", bound(query.start)}, {"end", bound(query.end)},
                      {"rvcontinue", token}};
  save_index(dir, index);
}

void RevisionCache::mark_complete(const RevisionQuery &query, std::size_t suppressed) {
  require_writable();
  fs::path dir = article_dir(query.article_title);
  json index = load_index(dir, query.article_title);
  index["pending"] = nullptr;
  index["windows"].push_back(
      {{"start", bound(query.start)}, {"end", bound(query.end)}, {"suppressed", suppressed}});
  save_index(dir, index);
}

}  // namespace outbreak::ingest

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
#include <thread>

#include "json.hpp"
#include "outbreak/error.h"
#include "outbreak/ingest.h"

namespace outbreak::ingest {

using nlohmann::json;

namespace {

std::string fragment(std::string_view body) {
  constexpr std::size_t kMax = 120;
  std::string out(body.substr(0, kMax));
  if (body.size() > kMax) out += "...";
  return out;
}

const json *find_content(const json &rev) {
  if (auto slots = rev.find("slots"); slots != rev.end() && slots->is_object()) {
    if (auto main = slots->find("main"); main != slots->end() && main->is_object()) {
      if (main->contains("texthidden")) return nullptr;
      if (auto c = main->find("content"); c != main->end() && c->is_string()) return &*c;
      if (auto c = main->find("*"); c != main->end() && c->is_string()) return &*c;
      return nullptr;
    }
  }
  if (rev.contains("texthidden")) return nullptr;
  if (auto c = rev.find("content"); c != rev.end() && c->is_string()) return &*c;
  if (auto c = rev.find("*"); c != rev.end() && c->is_string()) return &*c;
  return nullptr;
}

std::string string_or_empty(const json &obj, const char *key) {
  auto it = obj.find(key);
  return it != obj.end() && it->is_string() ? it->get<std::string>() : std::string();
}

// nullopt for suppressed or deleted revisions.
std::optional<ArticleRevision> decode_revision(const json &rev) {
  if (!rev.is_object()) throw ParseError("revision is not an object: " + fragment(rev.dump()));
  auto id = rev.find("revid");
  auto ts = rev.find("timestamp");
  if (id == rev.end() || !id->is_number_integer() || id->get<std::int64_t>() <= 0) {
    throw ParseError("revision without a valid revid: " + fragment(rev.dump()));
  }
  const json *content = find_content(rev);
  if (content == nullptr) return std::nullopt;
  if (ts == rev.end() || !ts->is_string()) {
    throw ParseError("revision without timestamp: " + fragment(rev.dump()));
  }
  ArticleRevision out;
  out.revision_id = id->get<std::int64_t>();
  if (auto p = rev.find("parentid"); p != rev.end() && p->is_number_integer() &&
                                     p->get<std::int64_t>() > 0) {
    out.parent_id = p->get<std::int64_t>();
  }
  out.timestamp = parse_timestamp(ts->get<std::string>());
  out.editor = string_or_empty(rev, "user");
  out.comment = string_or_empty(rev, "comment");
  out.wikitext = content->get<std::string>();
  return out;
}

bool in_window(Timestamp ts, const RevisionQuery &q) {
  return (!q.start || ts >= *q.start) && (!q.end || ts <= *q.end);
}

class RateLimiter {
 public:
  explicit RateLimiter(std::chrono::milliseconds interval) : interval_(interval) {}
  void wait() {
    auto now = std::chrono::steady_clock::now();
    if (last_ && now - *last_ < interval_) std::this_thread::sleep_for(interval_ - (now - *last_));
    last_ = std::chrono::steady_clock::now();
  }

 private:
  std::chrono::milliseconds interval_;
  std::optional<std::chrono::steady_clock::time_point> last_;
};

}  // namespace

void RevisionQuery::validate() const {
  if (article_title.empty()) throw DomainError("empty article title");
  if (start && end && *start > *end) throw DomainError("query start is after end");
  if (min_request_interval.count() < 0) throw DomainError("negative request interval");
  if (max_retries < 0) throw DomainError("negative retry count");
  if (page_size < 1) throw DomainError("page size must be positive");
  if (api_endpoint.empty()) throw DomainError("empty API endpoint");
}

ApiPage parse_revisions_page(std::string_view body) {
  json doc = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw ParseError("malformed API payload: " + fragment(body));
  }
  if (auto err = doc.find("error"); err != doc.end()) {
    std::string code = err->is_object() ? string_or_empty(*err, "code") : std::string();
    std::string info = err->is_object() ? string_or_empty(*err, "info") : std::string();
    if (code == "missingtitle" || code == "invalidtitle") {
      throw NotFoundError("article not found: " + info);
    }
    throw ParseError("API error " + code + ": " + info);
  }
  auto query = doc.find("query");
  if (query == doc.end() || !query->is_object() || !query->contains("pages")) {
    throw ParseError("API payload without query.pages: " + fragment(body));
  }
  const json &pages_node = (*query)["pages"];
  std::vector<const json *> pages;
  if (pages_node.is_array()) {
    for (const auto &p : pages_node) pages.push_back(&p);
  } else if (pages_node.is_object()) {
    for (const auto &[key, p] : pages_node.items()) pages.push_back(&p);
  } else {
    throw ParseError("query.pages is neither array nor object: " + fragment(body));
  }

  ApiPage page;
  for (const json *p : pages) {
    if (!p->is_object()) throw ParseError("page entry is not an object: " + fragment(p->dump()));
    if (p->contains("missing") || p->contains("invalid")) {
      page.missing = true;
      continue;
    }
    auto revs = p->find("revisions");
    if (revs == p->end()) continue;
    if (!revs->is_array()) throw ParseError("revisions is not an array: " + fragment(revs->dump()));
    for (const auto &rev : *revs) {
      page.records.push_back({rev.dump(), decode_revision(rev)});
    }
  }
  if (auto cont = doc.find("continue"); cont != doc.end() && cont->is_object()) {
    page.continuation = string_or_empty(*cont, "rvcontinue");
  }
  return page;
}

ArticleRevision revision_from_record(std::string_view raw_json) {
  json rev = json::parse(raw_json, nullptr, false);
  if (rev.is_discarded()) throw ParseError("malformed cached record: " + fragment(raw_json));
  auto decoded = decode_revision(rev);
  if (!decoded) throw ParseError("cached record has no content: " + fragment(raw_json));
  return *decoded;
}

std::vector<ArticleRevision> fetch_revisions(const RevisionQuery &query, RevisionCache &cache,
                                             Transport &transport, FetchReport *report) {
  query.validate();
  FetchReport local;
  FetchReport &rep = report ? *report : local;
  rep = FetchReport{};

  if (cache.covers(query)) {
    rep.served_from_cache = true;
    auto revisions = cache.load(query.article_title, query.start, query.end);
    rep.revisions = revisions.size();
    return revisions;
  }

  RateLimiter limiter(query.min_request_interval);
  std::string token = cache.pending_continuation(query);
  if (!token.empty()) spdlog::info("resuming '{}' at {}", query.article_title, token);

  while (true) {
    const std::string url = build_request_url(query, token);
    std::string failure;
    std::optional<HttpResponse> response;
    for (int attempt = 0; attempt <= query.max_retries; ++attempt) {
      if (attempt > 0) {
        auto backoff = query.retry_backoff * (1 << std::min(attempt - 1, 6));
        spdlog::warn("retrying in {} ms: {}", backoff.count(), failure);
        std::this_thread::sleep_for(backoff);
      }
      limiter.wait();
      ++rep.requests;
      try {
        HttpResponse r = transport.get(url);
        if (r.status == 200) {
          response = std::move(r);
          break;
        }
        failure = "HTTP status " + std::to_string(r.status);
        if (r.status != 429 && r.status < 500) break;
      } catch (const std::exception &e) {
        failure = e.what();
      }
    }
    if (!response) throw TransportError("fetch failed: " + failure, token);

    ApiPage page = parse_revisions_page(response->body);
    if (page.missing) throw NotFoundError("article not found: " + query.article_title);

    std::vector<ApiPage::Record> keep;
    for (auto &record : page.records) {
      if (!record.revision) {
        ++rep.suppressed;
        continue;
      }
      if (in_window(record.revision->timestamp, query)) keep.push_back(std::move(record));
    }
    cache.store(query.article_title, keep);
    if (page.continuation.empty()) break;
    token = page.continuation;
    cache.set_pending(query, token);
  }

  cache.mark_complete(query, rep.suppressed);
  auto revisions = cache.load(query.article_title, query.start, query.end);
  rep.revisions = revisions.size();
  if (rep.suppressed > 0) {
    spdlog::info("skipped {} suppressed revisions of '{}'", rep.suppressed, query.article_title);
  }
  return revisions;
}

std::map<Date, std::size_t> revision_activity(std::span<const ArticleRevision> revisions) {
  std::map<Date, std::size_t> counts;
  if (revisions.empty()) return counts;
  Date first = day_of(revisions.front().timestamp);
  Date last = first;
  for (const auto &r : revisions) {
    Date d = day_of(r.timestamp);
    ++counts[d];
    first = std::min(first, d);
    last = std::max(last, d);
  }
  for (Date d = first; d <= last; d += std::chrono::days{1}) counts.try_emplace(d, 0);
  return counts;
}

}  // namespace outbreak::ingest

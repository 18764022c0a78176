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

#ifndef OUTBREAK_INGEST_H_
#define OUTBREAK_INGEST_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "outbreak/date.h"

namespace outbreak::ingest {

using RevisionId = std::int64_t;

// One stored version of a wiki article.
struct ArticleRevision {
  RevisionId revision_id = 0;
  std::optional<RevisionId> parent_id;
  Timestamp timestamp{};
  std::string editor;
  std::string comment;
  std::string wikitext;

  bool operator==(const ArticleRevision &) const = default;
};

inline constexpr std::string_view kDefaultEndpoint =
    "https://en.wikipedia.org/w/api.php";
inline constexpr std::string_view kUserAgent =
    "outbreak-wiki/0.1 (revision-history research client; libcurl)";

struct RevisionQuery {
  std::string article_title;
  std::optional<Timestamp> start;
  std::optional<Timestamp> end;
  std::string api_endpoint{kDefaultEndpoint};
  std::chrono::milliseconds min_request_interval{200};
  int max_retries = 3;
  std::chrono::milliseconds retry_backoff{1000};
  int page_size = 50;

  // Throws DomainError on an empty title, start > end, negative interval.
  void validate() const;
};

struct HttpResponse {
  long status = 0;
  std::string body;
};

// Source of API responses. Implementations throw std::runtime_error (or a
// subclass) when the request could not be completed at all.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse get(const std::string &url) = 0;
};

// libcurl-backed HTTPS client.
class CurlTransport : public Transport {
 public:
  explicit CurlTransport(std::string user_agent = std::string(kUserAgent),
                         long timeout_seconds = 60);
  ~CurlTransport() override;
  CurlTransport(const CurlTransport &) = delete;
  CurlTransport &operator=(const CurlTransport &) = delete;

  HttpResponse get(const std::string &url) override;

 private:
  std::string user_agent_;
  long timeout_seconds_;
  void *handle_;
};

// Serves recorded API pages from a directory. The request without a
// continuation token maps to "start.json"; a request carrying
// rvcontinue=TOKEN maps to "TOKEN.json" with '|' replaced by '_'.
class ReplayTransport : public Transport {
 public:
  explicit ReplayTransport(std::filesystem::path directory);
  HttpResponse get(const std::string &url) override;

 private:
  std::filesystem::path directory_;
};

// "file:///dir" and "file:dir" endpoints replay recorded pages; anything
// else goes over HTTP.
std::unique_ptr<Transport> make_transport(std::string_view endpoint);

// Builds the action=query&prop=revisions request for one page of results.
std::string build_request_url(const RevisionQuery &query,
                              const std::string &continuation);

// One decoded API response page.
struct ApiPage {
  struct Record {
    std::string raw_json;  // the revision object exactly as cached
    std::optional<ArticleRevision> revision;  // nullopt when suppressed
  };
  std::vector<Record> records;
  std::string continuation;  // empty when the history is exhausted
  bool missing = false;
};

// Throws ParseError with the offending fragment on malformed payloads.
ApiPage parse_revisions_page(std::string_view body);

// Decodes one cached revision record. Throws ParseError.
ArticleRevision revision_from_record(std::string_view raw_json);

// On-disk cache: <root>/<escaped title>/rev-<id>.json holds the raw API
// record for one revision, <root>/<escaped title>/index.json lists the
// cached revisions, the fetched windows, and the continuation token of an
// interrupted fetch. All writes go through a temporary file and a rename.
class RevisionCache {
 public:
  enum class Mode { kReadWrite, kReadOnly };

  explicit RevisionCache(std::filesystem::path root,
                         Mode mode = Mode::kReadWrite);

  const std::filesystem::path &root() const { return root_; }
  bool read_only() const { return mode_ == Mode::kReadOnly; }

  // True when a completed fetch covers [start, end] for this title.
  bool covers(const RevisionQuery &query) const;

  // Cached revisions of a title inside [start, end], ascending by
  // (timestamp, revision id).
  std::vector<ArticleRevision> load(
      const std::string &title, std::optional<Timestamp> start = std::nullopt,
      std::optional<Timestamp> end = std::nullopt) const;

  // Writes each record file, then the index once.
  void store(const std::string &title, std::span<const ApiPage::Record> records);

  // Continuation token of an interrupted fetch of exactly this window.
  std::string pending_continuation(const RevisionQuery &query) const;
  void set_pending(const RevisionQuery &query, const std::string &token);
  void mark_complete(const RevisionQuery &query, std::size_t suppressed);

  std::filesystem::path article_dir(const std::string &title) const;

 private:
  void require_writable() const;

  std::filesystem::path root_;
  Mode mode_;
};

struct FetchReport {
  std::size_t requests = 0;
  std::size_t revisions = 0;
  std::size_t suppressed = 0;
  bool served_from_cache = false;
};

// Returns every non-suppressed revision of the article in [start, end],
// ascending by timestamp. Pages are requested until the continuation
// tokens run out; each revision is cached before the function returns. A
// window already covered by the cache costs zero requests.
std::vector<ArticleRevision> fetch_revisions(const RevisionQuery &query,
                                             RevisionCache &cache,
                                             Transport &transport,
                                             FetchReport *report = nullptr);

// Revisions per UTC calendar day over the spanned range, zero-filled.
std::map<Date, std::size_t> revision_activity(
    std::span<const ArticleRevision> revisions);

}  // namespace outbreak::ingest

#endif  // OUTBREAK_INGEST_H_

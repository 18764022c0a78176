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
#include <chrono>
#include <random>

#include "doctest.h"
#include "outbreak/error.h"
#include "outbreak/ingest.h"
#include "support.h"

using namespace outbreak;
using namespace outbreak::ingest;
using outbreak::testing::TempDir;

namespace {

class CountingTransport : public Transport {
 public:
  explicit CountingTransport(std::string fixture_dir)
      : inner_(outbreak::testing::fixture(fixture_dir)) {}
  HttpResponse get(const std::string &url) override {
    ++calls;
    if (fail_after >= 0 && calls > fail_after) throw std::runtime_error("connection reset");
    return inner_.get(url);
  }
  int calls = 0;
  int fail_after = -1;

 private:
  ReplayTransport inner_;
};

RevisionQuery fixture_query() {
  RevisionQuery q;
  q.article_title = std::string(outbreak::testing::kTabularTitle);
  q.api_endpoint = "file://unused";
  q.min_request_interval = std::chrono::milliseconds(0);
  q.retry_backoff = std::chrono::milliseconds(0);
  q.max_retries = 1;
  return q;
}

ArticleRevision revision_at(RevisionId id, const char *ts) {
  ArticleRevision r;
  r.revision_id = id;
  r.timestamp = parse_timestamp(ts);
  r.wikitext = "x";
  return r;
}

}  // namespace

TEST_CASE("paged fixture yields three ascending revisions") {
  TempDir dir;
  RevisionCache cache(dir.path());
  CountingTransport transport("api/paged");
  FetchReport report;
  auto revs = fetch_revisions(fixture_query(), cache, transport, &report);
  REQUIRE(revs.size() == 3);
  CHECK(revs[0].revision_id == 501);
  CHECK(revs[1].revision_id == 502);
  CHECK(revs[2].revision_id == 503);
  CHECK(revs[0].wikitext == "First version.");
  CHECK(report.requests == 3);
  CHECK(transport.calls == 3);
  for (std::size_t i = 0; i + 1 < revs.size(); ++i) {
    CHECK(revs[i].timestamp <= revs[i + 1].timestamp);
  }
}

TEST_CASE("warm cache performs zero requests and is byte-identical") {
  TempDir dir;
  RevisionCache cache(dir.path());
  CountingTransport transport("api/paged");
  auto first = fetch_revisions(fixture_query(), cache, transport);
  CountingTransport second_transport("api/paged");
  FetchReport report;
  auto second = fetch_revisions(fixture_query(), cache, second_transport, &report);
  CHECK(second_transport.calls == 0);
  CHECK(report.requests == 0);
  CHECK(report.served_from_cache);
  CHECK(first == second);

  RevisionCache reader(dir.path(), RevisionCache::Mode::kReadOnly);
  CountingTransport third("api/paged");
  CHECK(fetch_revisions(fixture_query(), reader, third) == first);
  CHECK(third.calls == 0);
}

TEST_CASE("each record is written to its own cache file") {
  TempDir dir;
  RevisionCache cache(dir.path());
  CountingTransport transport("api/paged");
  fetch_revisions(fixture_query(), cache, transport);
  std::size_t files = 0;
  for (const auto &entry :
       std::filesystem::recursive_directory_iterator(cache.article_dir(fixture_query().article_title))) {
    if (entry.is_regular_file()) ++files;
  }
  CHECK(files >= 3);
}

TEST_CASE("an instant with no revisions gives an empty list") {
  TempDir dir;
  RevisionCache cache(dir.path());
  CountingTransport transport("api/paged");
  auto q = fixture_query();
  q.start = parse_timestamp("2014-04-01T12:00:00Z");
  q.end = q.start;
  CHECK(fetch_revisions(q, cache, transport).empty());
}

TEST_CASE("window filter keeps only revisions in range") {
  TempDir dir;
  RevisionCache cache(dir.path());
  CountingTransport transport("api/paged");
  auto q = fixture_query();
  q.start = parse_timestamp("2014-04-02T00:00:00Z");
  auto revs = fetch_revisions(q, cache, transport);
  REQUIRE(revs.size() == 2);
  CHECK(revs[0].revision_id == 502);
}

TEST_CASE("missing article raises not-found") {
  TempDir dir;
  RevisionCache cache(dir.path());
  CountingTransport missing("api/missing");
  CHECK_THROWS_AS(fetch_revisions(fixture_query(), cache, missing), NotFoundError);
  CountingTransport error("api/error");
  CHECK_THROWS_AS(fetch_revisions(fixture_query(), cache, error), NotFoundError);
}

TEST_CASE("malformed payload raises parse error with the fragment") {
  TempDir dir;
  RevisionCache cache(dir.path());
  CountingTransport transport("api/malformed");
  auto body = outbreak::testing::read_text(outbreak::testing::fixture("api/malformed/start.json"));
  try {
    fetch_revisions(fixture_query(), cache, transport);
    FAIL("expected ParseError");
  } catch (const ParseError &e) {
    std::string what = e.what();
    CHECK(what.find(body.substr(0, 12)) != std::string::npos);
  }
}

TEST_CASE("suppressed revisions are skipped and counted") {
  TempDir dir;
  RevisionCache cache(dir.path());
  CountingTransport transport("api/suppressed");
  FetchReport report;
  auto revs = fetch_revisions(fixture_query(), cache, transport, &report);
  REQUIRE(revs.size() == 2);
  CHECK(revs[0].revision_id == 601);
  CHECK(revs[1].revision_id == 603);
  CHECK(report.suppressed == 1);
}

TEST_CASE("transport failure names the last continuation token and resumes") {
  TempDir dir;
  RevisionCache cache(dir.path());
  CountingTransport transport("api/paged");
  transport.fail_after = 1;
  try {
    fetch_revisions(fixture_query(), cache, transport);
    FAIL("expected TransportError");
  } catch (const TransportError &e) {
    CHECK(e.continuation() == "20140402000000|502");
    CHECK(std::string(e.what()).find("20140402000000|502") != std::string::npos);
  }
  CHECK(cache.pending_continuation(fixture_query()) == "20140402000000|502");

  CountingTransport resumed("api/paged");
  auto revs = fetch_revisions(fixture_query(), cache, resumed);
  CHECK(resumed.calls == 2);
  CHECK(revs.size() == 3);
}

TEST_CASE("read-only cache refuses writes") {
  TempDir dir;
  RevisionCache cache(dir.path(), RevisionCache::Mode::kReadOnly);
  CountingTransport transport("api/paged");
  CHECK_THROWS(fetch_revisions(fixture_query(), cache, transport));
}

TEST_CASE("query validation") {
  auto q = fixture_query();
  q.article_title.clear();
  CHECK_THROWS_AS(q.validate(), DomainError);
  q = fixture_query();
  q.start = parse_timestamp("2014-05-02T00:00:00Z");
  q.end = parse_timestamp("2014-05-01T00:00:00Z");
  CHECK_THROWS_AS(q.validate(), DomainError);
  q = fixture_query();
  q.min_request_interval = std::chrono::milliseconds(-1);
  CHECK_THROWS_AS(q.validate(), DomainError);
}

TEST_CASE("request url carries the paging parameters") {
  auto q = fixture_query();
  q.api_endpoint = "https://en.wikipedia.org/w/api.php";
  q.article_title = "Ebola virus epidemic";
  auto url = build_request_url(q, "20140402000000|502");
  CHECK(url.find("prop=revisions") != std::string::npos);
  CHECK(url.find("rvdir=newer") != std::string::npos);
  CHECK(url.find("redirects=1") != std::string::npos);
  CHECK(url.find("titles=Ebola%20virus%20epidemic") != std::string::npos);
  CHECK(url.find("rvcontinue=20140402000000%7C502") != std::string::npos);
}

TEST_CASE("revision activity fills zero days") {
  CHECK(revision_activity({}).empty());
  std::vector<ArticleRevision> revs = {
      revision_at(1, "2014-04-01T01:00:00Z"),
      revision_at(2, "2014-04-01T23:59:59Z"),
      revision_at(3, "2014-04-04T00:00:00Z"),
  };
  auto counts = revision_activity(revs);
  REQUIRE(counts.size() == 4);
  std::vector<std::size_t> values;
  for (const auto &[day, n] : counts) values.push_back(n);
  CHECK(values == std::vector<std::size_t>{2, 0, 0, 1});
  CHECK(counts.begin()->first == parse_iso_date("2014-04-01"));
}

TEST_CASE("revision activity sums to the input length") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = rng() % 40;
    std::vector<ArticleRevision> revs;
    auto base = parse_timestamp("2014-03-29T00:00:00Z");
    for (std::size_t i = 0; i < n; ++i) {
      ArticleRevision r;
      r.revision_id = static_cast<RevisionId>(i + 1);
      r.timestamp = base + std::chrono::seconds(rng() % (86400 * 30));
      revs.push_back(r);
    }
    std::size_t total = 0;
    for (const auto &[day, count] : revision_activity(revs)) total += count;
    CHECK(total == n);
  }
}

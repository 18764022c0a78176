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

#include <curl/curl.h>

#include <cctype>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>

#include "outbreak/error.h"
#include "outbreak/ingest.h"

namespace outbreak::ingest {

namespace {

std::string percent_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 15]);
    }
  }
  return out;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string percent_decode(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size()) {
      int hi = hex_value(s[i + 1]);
      int lo = hex_value(s[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out.push_back(static_cast<char>(hi * 16 + lo));
        i += 2;
        continue;
      }
    }
    out.push_back(s[i] == '+' ? ' ' : s[i]);
  }
  return out;
}

std::string query_param(std::string_view url, std::string_view name) {
  auto q = url.find('?');
  if (q == std::string_view::npos) return {};
  std::string_view rest = url.substr(q + 1);
  while (!rest.empty()) {
    const auto amp = rest.find('&');
    const std::size_t len = amp == std::string_view::npos ? rest.size() : amp;
    const std::string_view pair(rest.data(), len);
    const auto eq = pair.find('=');
    if (pair.substr(0, eq) == name) {
      return eq == std::string_view::npos ? std::string() : percent_decode(pair.substr(eq + 1));
    }
    if (amp == std::string_view::npos) break;
    rest.remove_prefix(amp + 1);
  }
  return {};
}

std::size_t write_body(char *data, std::size_t size, std::size_t count, void *user) {
  static_cast<std::string *>(user)->append(data, size * count);
  return size * count;
}

void global_curl_init() {
  static std::once_flag once;
  std::call_once(once, [] { curl_global_init(CURL_GLOBAL_DEFAULT); });
}

}  // namespace

CurlTransport::CurlTransport(std::string user_agent, long timeout_seconds)
    : user_agent_(std::move(user_agent)), timeout_seconds_(timeout_seconds) {
  global_curl_init();
  handle_ = curl_easy_init();
  if (handle_ == nullptr) throw std::runtime_error("curl_easy_init failed");
}

CurlTransport::~CurlTransport() { curl_easy_cleanup(static_cast<CURL *>(handle_)); }

HttpResponse CurlTransport::get(const std::string &url) {
  CURL *curl = static_cast<CURL *>(handle_);
  curl_easy_reset(curl);
  HttpResponse response;
  curl_easy_setopt(curl, CURLOPT_URL, url.c_str());
  curl_easy_setopt(curl, CURLOPT_USERAGENT, user_agent_.c_str());
  curl_easy_setopt(curl, CURLOPT_FOLLOWLOCATION, 1L);
  curl_easy_setopt(curl, CURLOPT_TIMEOUT, timeout_seconds_);
  curl_easy_setopt(curl, CURLOPT_ACCEPT_ENCODING, "");
  curl_easy_setopt(curl, CURLOPT_WRITEFUNCTION, write_body);
  curl_easy_setopt(curl, CURLOPT_WRITEDATA, &response.body);
  CURLcode rc = curl_easy_perform(curl);
  if (rc != CURLE_OK) {
    throw std::runtime_error(std::string("HTTP request failed: ") + curl_easy_strerror(rc));
  }
  curl_easy_getinfo(curl, CURLINFO_RESPONSE_CODE, &response.status);
  return response;
}

ReplayTransport::ReplayTransport(std::filesystem::path directory)
    : directory_(std::move(directory)) {}

HttpResponse ReplayTransport::get(const std::string &url) {
  std::string token = query_param(url, "rvcontinue");
  std::string name = token.empty() ? std::string{"start"} : token;
  for (char &c : name) {
    if (c == '|' || c == '/' || c == '\\') c = '_';
  }
  auto path = directory_ / (name + ".json");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("no recorded page " + path.string());
  std::ostringstream body;
  body << in.rdbuf();
  return {200, body.str()};
}

std::unique_ptr<Transport> make_transport(std::string_view endpoint) {
  if (endpoint.starts_with("file://")) {
    return std::make_unique<ReplayTransport>(std::string(endpoint.substr(7)));
  }
  if (endpoint.starts_with("file:")) {
    return std::make_unique<ReplayTransport>(std::string(endpoint.substr(5)));
  }
  return std::make_unique<CurlTransport>();
}

std::string build_request_url(const RevisionQuery &query, const std::string &continuation) {
  std::string url = query.api_endpoint;
  url += url.find('?') == std::string::npos ? '?' : '&';
  url +=
      "action=query&format=json&formatversion=2&prop=revisions"
      "&rvprop=" +
      percent_encode("ids|timestamp|user|comment|content") +
      "&rvslots=main&rvdir=newer&redirects=1&rvlimit=" + std::to_string(query.page_size) +
      "&titles=" + percent_encode(query.article_title);
  if (query.start) url += "&rvstart=" + percent_encode(format_timestamp(*query.start));
  if (query.end) url += "&rvend=" + percent_encode(format_timestamp(*query.end));
  if (!continuation.empty()) url += "&rvcontinue=" + percent_encode(continuation);
  return url;
}

}  // namespace outbreak::ingest

// Copyright 2026 The Curata Authors.
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

// Live HTTP client backed by cpp-httplib. Only translation units that need
// network access include this header; the rest of the library takes an
// HttpClient capability instead.

#pragma once

#include <chrono>
#include <cstdlib>
#include <string>

#include "curata/detail/url.hpp"
#include "curata/error.hpp"
#include "curata/http.hpp"
#include "httplib.h"

namespace curata {

inline constexpr int kDefaultTimeoutMs = 10000;

// CURATA_TIMEOUT_MS when set to a positive integer, else 10 s.
inline std::chrono::milliseconds timeout_from_env() {
  if (const char* env = std::getenv("CURATA_TIMEOUT_MS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) {
      return std::chrono::milliseconds(value);
    }
  }
  return std::chrono::milliseconds(kDefaultTimeoutMs);
}

// Blocking GET client that follows redirects. Transport failures raise
// FetchError with status 0; HTTP error statuses are returned as responses.
inline HttpClient make_http_client(
    std::chrono::milliseconds timeout = timeout_from_env()) {
  return [timeout](const std::string& url) -> HttpResponse {
    const auto parts = detail::split_url(url);
    if (!parts) throw ArgumentError("not an absolute http(s) URL: " + url);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (parts->scheme == "https") {
      throw FetchError("https is not supported in this build: " + url, 0);
    }
#endif
    httplib::Client client(parts->scheme + "://" + parts->authority);
    client.set_follow_location(true);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    auto result = client.Get(parts->path,
                             httplib::Headers{{"User-Agent", "curata/1.0"},
                                              {"Accept", "*/*"}});
    if (!result) {
      throw FetchError("request failed for " + url + ": " +
                           httplib::to_string(result.error()),
                       0);
    }
    return HttpResponse{result->status, result->body};
  };
}

}  // namespace curata

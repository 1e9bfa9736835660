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

// HTTP retrieval capability shared by page extraction and the knowledge-base
// clients.

#pragma once

#include <functional>
#include <string>

#include "curata/detail/url.hpp"
#include "curata/error.hpp"

namespace curata {

struct HttpResponse {
  int status = 0;
  std::string body;
};

// Retrieval capability injected into fetch(); throws FetchError when no
// response could be obtained.
using HttpClient = std::function<HttpResponse(const std::string& url)>;

// Body of `url` via `client`. Non-2xx statuses raise FetchError carrying the
// status.
inline std::string fetch(const std::string& url, const HttpClient& client) {
  if (!detail::split_url(url)) {
    throw ArgumentError("not an absolute http(s) URL: " + url);
  }
  HttpResponse response = client(url);
  if (response.status < 200 || response.status >= 300) {
    throw FetchError("HTTP " + std::to_string(response.status) + " for " + url,
                     response.status);
  }
  return std::move(response.body);
}

}  // namespace curata

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

#pragma once

#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace curata::detail {

// RFC 3986 percent-encoding; unreserved characters pass through.
inline std::string url_encode(std::string_view s) {
  std::string out;
  for (unsigned char c : s) {
    if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
        (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.' ||
        c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      char buf[4];
      std::snprintf(buf, sizeof buf, "%%%02X", c);
      out += buf;
    }
  }
  return out;
}

struct UrlParts {
  std::string scheme;     // lowercase
  std::string authority;  // host[:port]
  std::string path;       // starts with '/', includes query
};

// Splits an absolute http(s) URL; nullopt when it is not one.
inline std::optional<UrlParts> split_url(std::string_view url) {
  const auto sep = url.find("://");
  if (sep == std::string_view::npos || sep == 0) return std::nullopt;
  std::string scheme;
  for (char c : url.substr(0, sep)) {
    scheme.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c);
  }
  if (scheme != "http" && scheme != "https") return std::nullopt;
  const std::string_view rest = url.substr(sep + 3);
  const auto slash = rest.find_first_of("/?#");
  std::string authority(rest.substr(0, slash));
  if (authority.empty() ||
      authority.find_first_of(" \t\r\n") != std::string::npos) {
    return std::nullopt;
  }
  std::string path = slash == std::string_view::npos
                         ? std::string("/")
                         : std::string(rest.substr(slash));
  if (const auto hash = path.find('#'); hash != std::string::npos) {
    path.erase(hash);
  }
  if (path.empty() || path[0] != '/') path.insert(path.begin(), '/');
  return UrlParts{scheme, authority, path};
}

}  // namespace curata::detail

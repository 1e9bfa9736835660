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

#include <array>
#include <charconv>
#include <string>
#include <string_view>
#include <utility>

#include "curata/detail/utf8.hpp"

namespace curata::detail {

inline constexpr std::array<std::pair<std::string_view, char32_t>, 22>
    kNamedEntities = {{
        {"amp", U'&'},     {"lt", U'<'},        {"gt", U'>'},
        {"quot", U'"'},    {"apos", U'\''},     {"nbsp", U' '},
        {"copy", 0xA9},    {"reg", 0xAE},       {"trade", 0x2122},
        {"mdash", 0x2014}, {"ndash", 0x2013},   {"hellip", 0x2026},
        {"lsquo", 0x2018}, {"rsquo", 0x2019},   {"ldquo", 0x201C},
        {"rdquo", 0x201D}, {"euro", 0x20AC},    {"pound", 0xA3},
        {"yen", 0xA5},     {"cent", 0xA2},      {"deg", 0xB0},
        {"middot", 0xB7},
    }};

// Decodes named and numeric character references. Unknown or unterminated
// references are copied through verbatim.
inline std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    const std::size_t semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back(s[i++]);
      continue;
    }
    const std::string_view name = s.substr(i + 1, semi - i - 1);
    bool decoded = false;
    if (name.size() > 1 && name[0] == '#') {
      unsigned long value = 0;
      const bool hex = name[1] == 'x' || name[1] == 'X';
      const std::string_view digits = name.substr(hex ? 2 : 1);
      const auto [ptr, ec] = std::from_chars(
          digits.data(), digits.data() + digits.size(), value, hex ? 16 : 10);
      if (ec == std::errc() && ptr == digits.data() + digits.size() &&
          !digits.empty() && value > 0 && value <= 0x10FFFF) {
        append_utf8(out, static_cast<char32_t>(value));
        decoded = true;
      }
    } else {
      for (const auto& [entity, cp] : kNamedEntities) {
        if (entity == name) {
          append_utf8(out, cp);
          decoded = true;
          break;
        }
      }
    }
    if (decoded) {
      i = semi + 1;
    } else {
      out.push_back(s[i++]);
    }
  }
  return out;
}

// Escapes the five XML special characters.
inline std::string escape_xml(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace curata::detail

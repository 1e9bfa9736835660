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

// Tolerant HTML parsing and page content extraction.

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "curata/detail/entities.hpp"
#include "curata/detail/utf8.hpp"
#include "curata/error.hpp"
#include "curata/http.hpp"
#include "curata/text.hpp"

namespace curata {

// Node of an HtmlDocument. Element nodes have a lowercase `tag`; text nodes
// have an empty tag and carry decoded `text`.
struct HtmlNode {
  std::string tag;
  std::string text;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<std::size_t> children;
  std::size_t parent = 0;

  bool is_text() const { return tag.empty(); }

  const std::string* attribute(std::string_view name) const {
    for (const auto& [k, v] : attributes) {
      if (k == name) return &v;
    }
    return nullptr;
  }
};

// Arena of nodes; node 0 is the document root (tag "#document").
class HtmlDocument {
 public:
  HtmlDocument() { nodes_.push_back(HtmlNode{"#document", {}, {}, {}, 0}); }

  const HtmlNode& root() const { return nodes_.front(); }
  const HtmlNode& node(std::size_t id) const { return nodes_.at(id); }
  std::size_t size() const { return nodes_.size(); }

  std::size_t append(std::size_t parent, HtmlNode node) {
    node.parent = parent;
    nodes_.push_back(std::move(node));
    nodes_[parent].children.push_back(nodes_.size() - 1);
    return nodes_.size() - 1;
  }

  // Pre-order traversal of element ids, excluding the root.
  template <typename Fn>
  void for_each_element(Fn&& fn) const {
    walk(0, fn);
  }

  std::string source;

 private:
  template <typename Fn>
  void walk(std::size_t id, Fn& fn) const {
    for (std::size_t child : nodes_[id].children) {
      if (nodes_[child].is_text()) continue;
      fn(child);
      walk(child, fn);
    }
  }

  std::vector<HtmlNode> nodes_;
};

namespace detail {

inline bool is_void_tag(std::string_view tag) {
  static constexpr std::array<std::string_view, 14> kVoid = {
      "area", "base",  "br",   "col",   "embed",  "hr",    "img",
      "input", "link", "meta", "param", "source", "track", "wbr"};
  return std::find(kVoid.begin(), kVoid.end(), tag) != kVoid.end();
}

// Opening one of these closes an open <p>.
inline bool closes_paragraph(std::string_view tag) {
  static constexpr std::array<std::string_view, 22> kTags = {
      "address", "article", "aside", "blockquote", "div", "dl", "fieldset",
      "footer",  "form",    "h1",    "h2",         "h3",  "h4", "h5",
      "h6",      "header",  "hr",    "ol",         "p",   "pre", "table",
      "ul"};
  return std::find(kTags.begin(), kTags.end(), tag) != kTags.end();
}

// Elements that bound the search for an implicitly closed p or li.
inline bool is_scope_boundary(std::string_view tag) {
  return tag == "#document" || tag == "html" || tag == "body" ||
         tag == "td" || tag == "th" || tag == "table" || tag == "button";
}

inline bool is_name_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '-' || c == '_' || c == ':' ||
         c == '.';
}

}  // namespace detail

// Never fails: tags are matched tolerantly, unknown end tags are ignored,
// open elements are closed by the end tag of an ancestor, and <p>/<li> close
// implicitly. Script and style contents are dropped.
inline HtmlDocument parse_html(std::string_view html) {
  HtmlDocument doc;
  std::vector<std::size_t> open{0};
  const auto tag_of = [&](std::size_t id) -> const std::string& {
    return doc.node(id).tag;
  };
  // Pops up to and including the nearest open `tag` if it is found before a
  // scope boundary (or `stop_at_list` list element).
  const auto close_implied = [&](std::string_view tag, bool stop_at_list) {
    for (std::size_t k = open.size(); k-- > 1;) {
      const std::string& t = tag_of(open[k]);
      if (t == tag) {
        open.resize(k);
        return;
      }
      if (detail::is_scope_boundary(t)) return;
      if (stop_at_list && (t == "ul" || t == "ol")) return;
    }
  };

  std::string text_run;
  const auto flush_text = [&] {
    if (text_run.empty()) return;
    HtmlNode n;
    n.text = detail::decode_entities(text_run);
    doc.append(open.back(), std::move(n));
    text_run.clear();
  };

  std::size_t i = 0;
  while (i < html.size()) {
    if (html[i] != '<') {
      text_run.push_back(html[i++]);
      continue;
    }
    if (html.compare(i, 4, "<!--") == 0) {
      flush_text();
      const auto end = html.find("-->", i + 4);
      i = end == std::string_view::npos ? html.size() : end + 3;
      continue;
    }
    if (i + 1 < html.size() && (html[i + 1] == '!' || html[i + 1] == '?')) {
      flush_text();
      const auto end = html.find('>', i);
      i = end == std::string_view::npos ? html.size() : end + 1;
      continue;
    }
    const bool closing = i + 1 < html.size() && html[i + 1] == '/';
    std::size_t p = i + (closing ? 2 : 1);
    std::string name;
    while (p < html.size() && detail::is_name_char(html[p])) {
      name.push_back(detail::ascii_lower(html[p++]));
    }
    if (name.empty() || (name[0] >= '0' && name[0] <= '9')) {
      text_run.push_back(html[i++]);  // a literal '<'
      continue;
    }
    flush_text();

    // Attributes up to '>' (quoted values may contain '>').
    std::vector<std::pair<std::string, std::string>> attributes;
    bool self_closing = false;
    bool terminated = false;
    while (p < html.size()) {
      const char c = html[p];
      if (c == '>') {
        terminated = true;
        ++p;
        break;
      }
      if (c == '/') {
        self_closing = true;
        ++p;
        continue;
      }
      if (detail::is_space(c)) {
        ++p;
        continue;
      }
      self_closing = false;
      std::string key;
      while (p < html.size() && !detail::is_space(html[p]) && html[p] != '=' &&
             html[p] != '>' && html[p] != '/') {
        key.push_back(detail::ascii_lower(html[p++]));
      }
      if (key.empty()) {
        ++p;
        continue;
      }
      while (p < html.size() && detail::is_space(html[p])) ++p;
      std::string value;
      if (p < html.size() && html[p] == '=') {
        ++p;
        while (p < html.size() && detail::is_space(html[p])) ++p;
        if (p < html.size() && (html[p] == '"' || html[p] == '\'')) {
          const char quote = html[p++];
          const auto end = html.find(quote, p);
          const auto stop = end == std::string_view::npos ? html.size() : end;
          value = html.substr(p, stop - p);
          p = end == std::string_view::npos ? html.size() : end + 1;
        } else {
          while (p < html.size() && !detail::is_space(html[p]) &&
                 html[p] != '>') {
            value.push_back(html[p++]);
          }
        }
      }
      attributes.emplace_back(std::move(key), detail::decode_entities(value));
    }
    if (!terminated) break;  // unterminated tag at end of input
    i = p;

    if (closing) {
      for (std::size_t k = open.size(); k-- > 1;) {
        if (tag_of(open[k]) == name) {
          open.resize(k);
          break;
        }
      }
      continue;
    }

    if (name == "script" || name == "style") {
      const auto end = detail::find_icase(html, i, "</" + name);
      if (end == std::string_view::npos) {
        i = html.size();
      } else {
        const auto gt = html.find('>', end);
        i = gt == std::string_view::npos ? html.size() : gt + 1;
      }
      HtmlNode n;
      n.tag = name;
      n.attributes = std::move(attributes);
      doc.append(open.back(), std::move(n));
      continue;
    }

    if (detail::closes_paragraph(name)) close_implied("p", false);
    if (name == "li") close_implied("li", true);

    HtmlNode n;
    n.tag = name;
    n.attributes = std::move(attributes);
    const std::size_t id = doc.append(open.back(), std::move(n));
    if (!self_closing && !detail::is_void_tag(name)) open.push_back(id);
  }
  flush_text();
  return doc;
}

namespace detail {

inline void collect_text(const HtmlDocument& doc, std::size_t id,
                         std::string& out) {
  const HtmlNode& n = doc.node(id);
  if (n.is_text()) {
    out += n.text;
    return;
  }
  if (n.tag == "br") {
    out.push_back(' ');
    return;
  }
  const bool block = is_block_tag(n.tag);
  if (block) out.push_back(' ');
  for (std::size_t child : n.children) collect_text(doc, child, out);
  if (block) out.push_back(' ');
}

}  // namespace detail

// Whitespace-normalized text content of a node.
inline std::string text_content(const HtmlDocument& doc, std::size_t id) {
  std::string raw;
  detail::collect_text(doc, id, raw);
  return detail::collapse_whitespace(raw);
}

struct Heading {
  int level = 1;
  std::string text;

  friend bool operator==(const Heading&, const Heading&) = default;
};

struct PageExtract {
  std::optional<std::string> title;
  std::vector<Heading> headings;
  std::vector<std::string> paragraphs;
  std::vector<std::string> anchor_texts;
  std::vector<std::string> image_alts;
  std::vector<std::string> list_items;

  friend bool operator==(const PageExtract&, const PageExtract&) = default;
};

inline std::optional<std::string> extract_title(const HtmlDocument& doc) {
  std::optional<std::string> title;
  doc.for_each_element([&](std::size_t id) {
    if (!title && doc.node(id).tag == "title") title = text_content(doc, id);
  });
  return title;
}

// h1..h4 in document order.
inline std::vector<Heading> extract_headings(const HtmlDocument& doc) {
  std::vector<Heading> out;
  doc.for_each_element([&](std::size_t id) {
    const std::string& tag = doc.node(id).tag;
    if (tag.size() == 2 && tag[0] == 'h' && tag[1] >= '1' && tag[1] <= '4') {
      out.push_back(Heading{tag[1] - '0', text_content(doc, id)});
    }
  });
  return out;
}

namespace detail {

inline std::vector<std::string> texts_of(const HtmlDocument& doc,
                                         std::string_view tag) {
  std::vector<std::string> out;
  doc.for_each_element([&](std::size_t id) {
    if (doc.node(id).tag != tag) return;
    std::string text = text_content(doc, id);
    if (!text.empty()) out.push_back(std::move(text));
  });
  return out;
}

}  // namespace detail

// Non-empty <p> texts in document order.
inline std::vector<std::string> extract_paragraphs(const HtmlDocument& doc) {
  return detail::texts_of(doc, "p");
}

// 0-based; RangeError when `index` is past the last paragraph.
inline std::string extract_paragraph_at(const HtmlDocument& doc,
                                        std::size_t index) {
  auto paragraphs = extract_paragraphs(doc);
  if (index >= paragraphs.size()) {
    throw RangeError("paragraph " + std::to_string(index) + " out of range (" +
                     std::to_string(paragraphs.size()) + " paragraphs)");
  }
  return std::move(paragraphs[index]);
}

// Caption text of <a> elements (not the href).
inline std::vector<std::string> extract_anchor_texts(const HtmlDocument& doc) {
  return detail::texts_of(doc, "a");
}

inline std::vector<std::string> extract_image_alts(const HtmlDocument& doc) {
  std::vector<std::string> out;
  doc.for_each_element([&](std::size_t id) {
    const HtmlNode& n = doc.node(id);
    if (n.tag != "img") return;
    if (const auto* alt = n.attribute("alt")) {
      std::string text = detail::collapse_whitespace(*alt);
      if (!text.empty()) out.push_back(std::move(text));
    }
  });
  return out;
}

// <li> items whose nearest list ancestor is a <ul>.
inline std::vector<std::string> extract_list_texts(const HtmlDocument& doc) {
  std::vector<std::string> out;
  doc.for_each_element([&](std::size_t id) {
    if (doc.node(id).tag != "li") return;
    std::size_t up = doc.node(id).parent;
    while (up != 0 && doc.node(up).tag != "ul" && doc.node(up).tag != "ol") {
      up = doc.node(up).parent;
    }
    if (doc.node(up).tag != "ul") return;
    std::string text = text_content(doc, id);
    if (!text.empty()) out.push_back(std::move(text));
  });
  return out;
}

inline PageExtract extract_page(const HtmlDocument& doc) {
  return PageExtract{extract_title(doc),        extract_headings(doc),
                     extract_paragraphs(doc),   extract_anchor_texts(doc),
                     extract_image_alts(doc),   extract_list_texts(doc)};
}

}  // namespace curata

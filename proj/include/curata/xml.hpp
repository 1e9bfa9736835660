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

// Minimal XML 1.0 reader and a validator for a small XML Schema subset, used
// to check curation output against the shipped schema.
//
// Supported schema constructs: top-level xs:element with an inline
// xs:complexType; xs:sequence of xs:element (minOccurs, maxOccurs including
// "unbounded"); xs:attribute (type, use="required"); xs:simpleContent with an
// xs:extension carrying attributes; simple types xs:string, xs:integer,
// xs:nonNegativeInteger, xs:decimal and xs:double.

#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "curata/detail/utf8.hpp"
#include "curata/error.hpp"

namespace curata {

struct XmlElement {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<XmlElement> children;
  std::string text;  // concatenated character data of this element

  const std::string* attribute(std::string_view key) const {
    for (const auto& [k, v] : attributes) {
      if (k == key) return &v;
    }
    return nullptr;
  }
};

namespace detail {

class XmlReader {
 public:
  explicit XmlReader(std::string_view s) : s_(s) {}

  XmlElement document() {
    if (s_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
    misc();
    if (!at("<")) fail("expected root element");
    XmlElement root = element();
    misc();
    if (pos_ != s_.size()) fail("content after root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    std::size_t line = 1;
    for (std::size_t i = 0; i < pos_ && i < s_.size(); ++i) line += s_[i] == '\n';
    throw ParseError(what, line);
  }

  bool at(std::string_view t) const { return s_.substr(pos_, t.size()) == t; }

  void skip_ws() {
    while (pos_ < s_.size() && is_space(s_[pos_])) ++pos_;
  }

  void skip_past(std::string_view end, const char* what) {
    const std::size_t e = s_.find(end, pos_);
    if (e == std::string_view::npos) fail(std::string("unterminated ") + what);
    pos_ = e + end.size();
  }

  // Prolog/epilog: whitespace, comments, processing instructions, doctype.
  void misc() {
    while (true) {
      skip_ws();
      if (at("<?")) {
        skip_past("?>", "processing instruction");
      } else if (at("<!--")) {
        skip_past("-->", "comment");
      } else if (at("<!DOCTYPE")) {
        skip_past(">", "doctype");
      } else {
        return;
      }
    }
  }

  static bool name_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' ||
           c == ':' || static_cast<unsigned char>(c) >= 0x80;
  }
  static bool name_char(char c) {
    return name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
  }

  std::string name() {
    if (pos_ >= s_.size() || !name_start(s_[pos_])) fail("expected a name");
    const std::size_t start = pos_;
    while (pos_ < s_.size() && name_char(s_[pos_])) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  std::string reference() {
    const std::size_t semi = s_.find(';', pos_);
    if (semi == std::string_view::npos || semi - pos_ > 12) fail("bad reference");
    const std::string_view ref = s_.substr(pos_ + 1, semi - pos_ - 1);
    pos_ = semi + 1;
    if (ref == "amp") return "&";
    if (ref == "lt") return "<";
    if (ref == "gt") return ">";
    if (ref == "quot") return "\"";
    if (ref == "apos") return "'";
    if (ref.size() > 1 && ref[0] == '#') {
      unsigned long cp = 0;
      const bool hex = ref[1] == 'x';
      const std::string digits(ref.substr(hex ? 2 : 1));
      if (digits.empty()) fail("bad character reference");
      char* end = nullptr;
      cp = std::strtoul(digits.c_str(), &end, hex ? 16 : 10);
      if (*end != '\0' || cp == 0 || cp > 0x10FFFF) fail("bad character reference");
      std::string out;
      append_utf8(out, static_cast<char32_t>(cp));
      return out;
    }
    fail("unknown entity &" + std::string(ref) + ";");
  }

  std::string attribute_value() {
    if (pos_ >= s_.size() || (s_[pos_] != '"' && s_[pos_] != '\'')) {
      fail("expected quoted attribute value");
    }
    const char quote = s_[pos_++];
    std::string out;
    while (true) {
      if (pos_ >= s_.size()) fail("unterminated attribute value");
      const char c = s_[pos_];
      if (c == quote) break;
      if (c == '<') fail("'<' in attribute value");
      if (c == '&') {
        out += reference();
      } else {
        out += c;
        ++pos_;
      }
    }
    ++pos_;
    return out;
  }

  XmlElement element() {
    ++pos_;  // '<'
    XmlElement el;
    el.name = name();
    while (true) {
      const std::size_t before = pos_;
      skip_ws();
      if (at("/>")) {
        pos_ += 2;
        return el;
      }
      if (at(">")) {
        ++pos_;
        break;
      }
      if (pos_ == before) fail("expected whitespace before attribute");
      std::string key = name();
      skip_ws();
      if (!at("=")) fail("expected '=' after attribute name");
      ++pos_;
      skip_ws();
      if (el.attribute(key)) fail("duplicate attribute " + key);
      el.attributes.emplace_back(std::move(key), attribute_value());
    }
    while (true) {
      if (pos_ >= s_.size()) fail("unclosed element <" + el.name + ">");
      if (at("</")) {
        pos_ += 2;
        if (name() != el.name) fail("mismatched end tag for <" + el.name + ">");
        skip_ws();
        if (!at(">")) fail("expected '>'");
        ++pos_;
        return el;
      }
      if (at("<!--")) {
        skip_past("-->", "comment");
      } else if (at("<![CDATA[")) {
        const std::size_t start = pos_ + 9;
        skip_past("]]>", "CDATA section");
        el.text.append(s_.substr(start, pos_ - 3 - start));
      } else if (at("<?")) {
        skip_past("?>", "processing instruction");
      } else if (at("<")) {
        el.children.push_back(element());
      } else if (at("&")) {
        el.text += reference();
      } else {
        el.text += s_[pos_++];
      }
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline XmlElement parse_xml(std::string_view xml) {
  return detail::XmlReader(xml).document();
}

// ---------------------------------------------------------------------------
// Schema subset

enum class XsdType { kString, kInteger, kNonNegativeInteger, kDecimal, kDouble };

struct XsdAttribute {
  std::string name;
  XsdType type = XsdType::kString;
  bool required = false;
};

struct XsdElement {
  std::string name;
  std::size_t min_occurs = 1;
  std::optional<std::size_t> max_occurs = 1;  // nullopt = unbounded
  // Simple text content (xs:string etc.) when set; otherwise element-only.
  std::optional<XsdType> text_type;
  std::vector<XsdAttribute> attributes;
  std::vector<XsdElement> sequence;
};

struct XmlSchema {
  XsdElement root;
};

namespace detail {

inline std::string_view local_name(std::string_view qname) {
  const std::size_t colon = qname.find(':');
  return colon == std::string_view::npos ? qname : qname.substr(colon + 1);
}

inline XsdType xsd_type(std::string_view qname) {
  const std::string_view t = local_name(qname);
  if (t == "string") return XsdType::kString;
  if (t == "integer") return XsdType::kInteger;
  if (t == "nonNegativeInteger") return XsdType::kNonNegativeInteger;
  if (t == "decimal") return XsdType::kDecimal;
  if (t == "double") return XsdType::kDouble;
  throw ArgumentError("unsupported schema type " + std::string(qname));
}

inline std::vector<XsdAttribute> xsd_attributes(const XmlElement& parent) {
  std::vector<XsdAttribute> out;
  for (const auto& a : parent.children) {
    if (local_name(a.name) != "attribute") continue;
    const std::string* name = a.attribute("name");
    if (!name) throw ArgumentError("xs:attribute without name");
    const std::string* type = a.attribute("type");
    const std::string* use = a.attribute("use");
    out.push_back({*name, type ? xsd_type(*type) : XsdType::kString,
                   use && *use == "required"});
  }
  return out;
}

inline XsdElement xsd_element(const XmlElement& decl) {
  XsdElement el;
  const std::string* name = decl.attribute("name");
  if (!name) throw ArgumentError("xs:element without name");
  el.name = *name;
  if (const auto* v = decl.attribute("minOccurs")) el.min_occurs = std::stoul(*v);
  if (const auto* v = decl.attribute("maxOccurs")) {
    el.max_occurs = *v == "unbounded" ? std::nullopt
                                      : std::optional<std::size_t>(std::stoul(*v));
  }
  if (const auto* type = decl.attribute("type")) {
    el.text_type = xsd_type(*type);
    return el;
  }
  for (const auto& c : decl.children) {
    if (local_name(c.name) != "complexType") continue;
    el.attributes = xsd_attributes(c);
    for (const auto& part : c.children) {
      const std::string_view kind = local_name(part.name);
      if (kind == "sequence") {
        for (const auto& item : part.children) {
          if (local_name(item.name) != "element") {
            throw ArgumentError("unsupported particle " + item.name);
          }
          el.sequence.push_back(xsd_element(item));
        }
      } else if (kind == "simpleContent") {
        for (const auto& ext : part.children) {
          if (local_name(ext.name) != "extension") continue;
          const std::string* base = ext.attribute("base");
          el.text_type = base ? xsd_type(*base) : XsdType::kString;
          el.attributes = xsd_attributes(ext);
        }
      } else if (kind != "attribute") {
        throw ArgumentError("unsupported schema construct " + part.name);
      }
    }
  }
  return el;
}

inline bool matches_type(XsdType type, std::string_view v) {
  static const std::regex kInteger(R"([+-]?[0-9]+)");
  static const std::regex kNonNegative(R"(\+?[0-9]+)");
  static const std::regex kDecimal(R"([+-]?([0-9]+(\.[0-9]*)?|\.[0-9]+))");
  static const std::regex kDouble(
      R"([+-]?([0-9]+(\.[0-9]*)?|\.[0-9]+)([eE][+-]?[0-9]+)?|[+-]?INF|NaN)");
  const std::string s(trim(v));
  switch (type) {
    case XsdType::kString:
      return true;
    case XsdType::kInteger:
      return std::regex_match(s, kInteger);
    case XsdType::kNonNegativeInteger:
      return std::regex_match(s, kNonNegative);
    case XsdType::kDecimal:
      return std::regex_match(s, kDecimal);
    case XsdType::kDouble:
      return std::regex_match(s, kDouble);
  }
  return false;
}

inline void validate_element(const XmlElement& el, const XsdElement& decl,
                             const std::string& path,
                             std::vector<std::string>& errors) {
  const std::string here = path + "/" + el.name;
  for (const auto& a : decl.attributes) {
    const std::string* v = el.attribute(a.name);
    if (!v) {
      if (a.required) errors.push_back(here + ": missing attribute " + a.name);
    } else if (!matches_type(a.type, *v)) {
      errors.push_back(here + ": bad value for attribute " + a.name);
    }
  }
  for (const auto& [k, v] : el.attributes) {
    bool known = false;
    for (const auto& a : decl.attributes) known = known || a.name == k;
    if (!known) errors.push_back(here + ": unexpected attribute " + k);
  }

  if (decl.text_type) {
    if (!el.children.empty()) errors.push_back(here + ": unexpected child elements");
    if (!matches_type(*decl.text_type, el.text)) {
      errors.push_back(here + ": bad text content");
    }
    return;
  }
  if (!trim(el.text).empty()) errors.push_back(here + ": unexpected text content");

  std::size_t i = 0;
  for (const auto& item : decl.sequence) {
    std::size_t n = 0;
    while (i < el.children.size() && el.children[i].name == item.name &&
           (!item.max_occurs || n < *item.max_occurs)) {
      validate_element(el.children[i], item, here, errors);
      ++i;
      ++n;
    }
    if (n < item.min_occurs) {
      errors.push_back(here + ": expected <" + item.name + ">");
    }
  }
  if (i < el.children.size()) {
    errors.push_back(here + ": unexpected element <" + el.children[i].name + ">");
  }
}

}  // namespace detail

inline XmlSchema parse_schema(std::string_view xsd) {
  const XmlElement doc = parse_xml(xsd);
  if (detail::local_name(doc.name) != "schema") {
    throw ArgumentError("not an XML schema");
  }
  for (const auto& c : doc.children) {
    if (detail::local_name(c.name) == "element") {
      return XmlSchema{detail::xsd_element(c)};
    }
  }
  throw ArgumentError("schema declares no element");
}

// Empty when `doc` conforms to `schema`.
inline std::vector<std::string> validate(const XmlElement& doc,
                                         const XmlSchema& schema) {
  std::vector<std::string> errors;
  if (doc.name != schema.root.name) {
    errors.push_back("root element is <" + doc.name + ">, expected <" +
                     schema.root.name + ">");
    return errors;
  }
  detail::validate_element(doc, schema.root, "", errors);
  return errors;
}

}  // namespace curata

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

// Dictionary and pattern based named-entity extraction.
//
// Extraction runs three passes over the token sequence, each allowed to claim
// only spans no earlier pass claimed:
//   1. leftmost-longest gazetteer matches,
//   2. DATE / MONEY / PERCENT patterns,
//   3. runs of capitalized tokens typed PERSON or ORGANIZATION.

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "curata/detail/utf8.hpp"
#include "curata/error.hpp"
#include "curata/text.hpp"

namespace curata {

enum class EntityType {
  kPerson,
  kOrganization,
  kLocation,
  kCity,
  kCountry,
  kContinent,
  kCompany,
  kDrug,
  kCrime,
  kSport,
  kHoliday,
  kProduct,
  kDisaster,
  kOs,
  kSportEvent,
  kGeo,
  kRegion,
  kState,
  kDegree,
  kMedia,
  kDisease,
  kMoney,
  kDate,
  kTime,
  kPercent,
  kEmail,
  kIpAddress,
};

inline constexpr std::array<std::pair<EntityType, std::string_view>, 27>
    kEntityTypeNames = {{
        {EntityType::kPerson, "PERSON"},
        {EntityType::kOrganization, "ORGANIZATION"},
        {EntityType::kLocation, "LOCATION"},
        {EntityType::kCity, "CITY"},
        {EntityType::kCountry, "COUNTRY"},
        {EntityType::kContinent, "CONTINENT"},
        {EntityType::kCompany, "COMPANY"},
        {EntityType::kDrug, "DRUG"},
        {EntityType::kCrime, "CRIME"},
        {EntityType::kSport, "SPORT"},
        {EntityType::kHoliday, "HOLIDAY"},
        {EntityType::kProduct, "PRODUCT"},
        {EntityType::kDisaster, "DISASTER"},
        {EntityType::kOs, "OS"},
        {EntityType::kSportEvent, "SPORTEV"},
        {EntityType::kGeo, "GEO"},
        {EntityType::kRegion, "REGION"},
        {EntityType::kState, "STATE"},
        {EntityType::kDegree, "DEGREE"},
        {EntityType::kMedia, "MEDIA"},
        {EntityType::kDisease, "DISEASE"},
        {EntityType::kMoney, "MONEY"},
        {EntityType::kDate, "DATE"},
        {EntityType::kTime, "TIME"},
        {EntityType::kPercent, "PERCENT"},
        {EntityType::kEmail, "EMAIL"},
        {EntityType::kIpAddress, "IPADDR"},
    }};

inline std::string_view to_string(EntityType type) {
  for (const auto& [t, name] : kEntityTypeNames) {
    if (t == type) return name;
  }
  return "OTHER";
}

// Case-insensitive; accepts the labels used in gazetteer files.
inline std::optional<EntityType> parse_entity_type(std::string_view label) {
  std::string upper;
  for (char c : detail::trim(label)) {
    upper.push_back((c >= 'a' && c <= 'z') ? static_cast<char>(c - 32) : c);
  }
  for (const auto& [t, name] : kEntityTypeNames) {
    if (name == upper) return t;
  }
  return std::nullopt;
}

struct NamedEntity {
  std::string word;
  EntityType type = EntityType::kPerson;
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const NamedEntity&, const NamedEntity&) = default;
};

// Token-trie over lowercased surfaces. Entries sharing a surface keep every
// declared type.
class Gazetteer {
 public:
  struct Match {
    std::size_t length = 0;  // tokens consumed
    std::span<const EntityType> types;
  };

  Gazetteer() : nodes_(1) {}

  void add(std::string_view surface, EntityType type) {
    if (surface.find('\t') != std::string_view::npos) {
      throw ArgumentError("gazetteer surface contains a tab");
    }
    const std::vector<Token> tokens = tokenize(surface);
    if (tokens.empty()) {
      throw ArgumentError("gazetteer surface has no word characters: '" +
                          std::string(surface) + "'");
    }
    std::size_t node = 0;
    for (const Token& t : tokens) {
      auto it = nodes_[node].children.find(t.surface);
      if (it == nodes_[node].children.end()) {
        nodes_.emplace_back();
        it = nodes_[node].children.emplace(t.surface, nodes_.size() - 1).first;
      }
      node = it->second;
    }
    auto& types = nodes_[node].types;
    if (std::find(types.begin(), types.end(), type) == types.end()) {
      types.push_back(type);
    }
    ++entry_count_;
  }

  // Types of the entry whose surface equals `surface` (case-insensitive).
  std::vector<EntityType> lookup(std::string_view surface) const {
    const std::vector<Token> tokens = tokenize(surface);
    if (tokens.empty()) return {};
    const auto match = longest_match(tokens, 0);
    if (!match || match->length != tokens.size()) return {};
    return {match->types.begin(), match->types.end()};
  }

  // Longest entry matching tokens[from..]; surfaces must already be lowercase.
  std::optional<Match> longest_match(std::span<const Token> tokens,
                                     std::size_t from) const {
    std::optional<Match> best;
    std::size_t node = 0;
    for (std::size_t i = from; i < tokens.size(); ++i) {
      const auto it = nodes_[node].children.find(tokens[i].surface);
      if (it == nodes_[node].children.end()) break;
      node = it->second;
      if (!nodes_[node].types.empty()) {
        best = Match{i - from + 1, nodes_[node].types};
      }
    }
    return best;
  }

  std::size_t entry_count() const { return entry_count_; }
  bool empty() const { return entry_count_ == 0; }

  // Lines rejected while loading (no tab, unknown type, no word characters).
  std::size_t warnings() const { return warnings_; }
  void add_warning() { ++warnings_; }

 private:
  struct Node {
    std::map<std::string, std::size_t, std::less<>> children;
    std::vector<EntityType> types;
  };
  std::vector<Node> nodes_;
  std::size_t entry_count_ = 0;
  std::size_t warnings_ = 0;
};

// `surface<TAB>type` per line. Blank lines are ignored; malformed lines are
// skipped and counted in Gazetteer::warnings().
inline Gazetteer load_gazetteer(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open gazetteer: " + path);
  Gazetteer gaz;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      gaz.add_warning();
      continue;
    }
    const auto type = parse_entity_type(std::string_view(line).substr(tab + 1));
    const std::string_view surface =
        detail::trim(std::string_view(line).substr(0, tab));
    if (!type || surface.empty()) {
      gaz.add_warning();
      continue;
    }
    try {
      gaz.add(surface, *type);
    } catch (const ArgumentError&) {
      gaz.add_warning();
    }
  }
  return gaz;
}

struct NerOptions {
  // Never part of a capitalized name run. Defaults to english_stopwords().
  const StopwordList* stopwords = nullptr;
  // Ordinary words that do not start a name run at the beginning of a
  // sentence, where capitalization carries no signal.
  const StopwordList* common_words = nullptr;
};

namespace detail {

struct Span {
  std::size_t start;
  std::size_t end;
};

inline bool overlaps(const std::vector<Span>& claimed, std::size_t start,
                     std::size_t end) {
  return std::any_of(claimed.begin(), claimed.end(), [&](const Span& s) {
    return start < s.end && s.start < end;
  });
}

inline bool is_digit_or_dot(char c) { return (c >= '0' && c <= '9') || c == '.'; }

inline bool is_word_byte(char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z');
}

struct PatternRule {
  std::regex pattern;
  EntityType type;
};

inline const std::vector<PatternRule>& pattern_rules() {
  static const std::vector<PatternRule> rules = [] {
    const std::string month =
        "(?:January|February|March|April|May|June|July|August|September|"
        "October|November|December|Jan|Feb|Mar|Apr|Jun|Jul|Aug|Sept|Sep|Oct|"
        "Nov|Dec)";
    const std::string day = "\\d{1,2}(?:st|nd|rd|th)?";
    std::vector<PatternRule> r;
    r.push_back({std::regex(month + "\\.?\\s+" + day +
                            "(?:,?\\s+\\d{4})?(?![\\w])"),
                 EntityType::kDate});
    r.push_back({std::regex(day + "\\s+" + month + "\\.?(?:,?\\s+\\d{4})?" +
                            "(?![\\w])"),
                 EntityType::kDate});
    r.push_back({std::regex("\\d{1,2}([/.-])\\d{1,2}\\1(?:\\d{4}|\\d{2})"
                            "(?![\\d.]\\d|\\d)"),
                 EntityType::kDate});
    r.push_back({std::regex("(?:\\$|\xE2\x82\xAC|\xC2\xA3|\xC2\xA5)\\s?"
                            "\\d+(?:,\\d{3})*(?:\\.\\d+)?"),
                 EntityType::kMoney});
    r.push_back({std::regex("\\d+(?:\\.\\d+)?\\s?%"), EntityType::kPercent});
    return r;
  }();
  return rules;
}

inline bool is_org_cue(std::string_view lower) {
  static constexpr std::array<std::string_view, 6> kCues = {
      "hospital", "inc", "ltd", "university", "bank", "department"};
  return std::find(kCues.begin(), kCues.end(), lower) != kCues.end();
}

inline bool starts_upper(std::string_view text, const Token& t) {
  return is_upper(decode_utf8(text, t.start).value);
}

}  // namespace detail

inline std::vector<NamedEntity> extract_entities(
    std::string_view text, const Gazetteer& gaz,
    const NerOptions& options = {}) {
  const StopwordList& stopwords =
      options.stopwords ? *options.stopwords : english_stopwords();
  const auto is_common = [&](const Token& t) {
    return options.common_words != nullptr &&
           options.common_words->contains(t.surface);
  };
  const std::vector<Token> tokens = tokenize(text);
  std::vector<NamedEntity> out;
  std::vector<detail::Span> claimed;
  std::vector<bool> token_claimed(tokens.size(), false);

  const auto slice = [&](std::size_t start, std::size_t end) {
    return std::string(text.substr(start, end - start));
  };

  // Gazetteer: leftmost-longest, non-overlapping.
  for (std::size_t i = 0; i < tokens.size();) {
    const auto match = gaz.longest_match(tokens, i);
    if (!match) {
      ++i;
      continue;
    }
    const std::size_t start = tokens[i].start;
    const std::size_t end = tokens[i + match->length - 1].end;
    for (EntityType type : match->types) {
      out.push_back(NamedEntity{slice(start, end), type, start, end});
    }
    claimed.push_back({start, end});
    std::fill_n(token_claimed.begin() + static_cast<std::ptrdiff_t>(i),
                match->length, true);
    i += match->length;
  }

  // Patterns: earliest start first, longer match first at equal start.
  struct Hit {
    std::size_t start;
    std::size_t end;
    EntityType type;
  };
  std::vector<Hit> hits;
  for (const auto& rule : detail::pattern_rules()) {
    for (auto it = std::cregex_iterator(text.data(), text.data() + text.size(),
                                        rule.pattern);
         it != std::cregex_iterator(); ++it) {
      const auto start = static_cast<std::size_t>(it->position(0));
      const auto end = start + static_cast<std::size_t>(it->length(0));
      if (start > 0) {
        const char before = text[start - 1];
        if (detail::is_word_byte(before)) continue;
        if (rule.type != EntityType::kMoney && before == '.') continue;
      }
      hits.push_back({start, end, rule.type});
    }
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    return a.start != b.start ? a.start < b.start : a.end > b.end;
  });
  for (const Hit& h : hits) {
    if (detail::overlaps(claimed, h.start, h.end)) continue;
    out.push_back(NamedEntity{slice(h.start, h.end), h.type, h.start, h.end});
    claimed.push_back({h.start, h.end});
  }

  // Capitalized runs.
  const std::vector<Sentence> sentences = split_sentences(text);
  std::vector<bool> sentence_initial(tokens.size(), false);
  {
    std::size_t s = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      while (s < sentences.size() && sentences[s].end <= tokens[i].start) ++s;
      if (s < sentences.size() && tokens[i].start >= sentences[s].start &&
          (i == 0 || tokens[i - 1].start < sentences[s].start)) {
        sentence_initial[i] = true;
      }
    }
  }
  const auto eligible = [&](std::size_t i) {
    const Token& t = tokens[i];
    return !token_claimed[i] && detail::starts_upper(text, t) &&
           !stopwords.contains(t.surface) &&
           !detail::overlaps(claimed, t.start, t.end);
  };
  const auto gap_of = [&](std::size_t prev, std::size_t next) {
    return text.substr(tokens[prev].end, tokens[next].start - tokens[prev].end);
  };
  // "M. Turnbull": an initial may carry its period, even though the splitter
  // ends a sentence there.
  const auto after_initial = [&](std::size_t prev, std::size_t next) {
    const std::string_view gap = gap_of(prev, next);
    return !gap.empty() && gap.front() == '.' &&
           tokens[prev].end - tokens[prev].start == 1;
  };
  const auto joinable = [&](std::size_t prev, std::size_t next) {
    std::string_view gap = gap_of(prev, next);
    if (after_initial(prev, next)) gap.remove_prefix(1);
    return !gap.empty() && std::all_of(gap.begin(), gap.end(), [](char c) {
      return c == ' ' || c == '\t';
    });
  };
  for (std::size_t i = 0; i < tokens.size();) {
    if (!eligible(i) || (sentence_initial[i] && is_common(tokens[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < tokens.size() && eligible(j) && joinable(j - 1, j) &&
           (!sentence_initial[j] || after_initial(j - 1, j))) {
      ++j;
    }
    bool organization = false;
    for (std::size_t k = i; k < j; ++k) {
      organization = organization || detail::is_org_cue(tokens[k].surface);
    }
    const std::size_t start = tokens[i].start;
    const std::size_t end = tokens[j - 1].end;
    out.push_back(NamedEntity{
        slice(start, end),
        organization ? EntityType::kOrganization : EntityType::kPerson, start,
        end});
    i = j;
  }

  std::stable_sort(out.begin(), out.end(),
                   [](const NamedEntity& a, const NamedEntity& b) {
                     return a.start < b.start;
                   });
  return out;
}

inline std::vector<std::string> extract_by_type(std::string_view text,
                                                const Gazetteer& gaz,
                                                EntityType type,
                                                const NerOptions& options = {}) {
  std::vector<std::string> words;
  for (auto& e : extract_entities(text, gaz, options)) {
    if (e.type == type) words.push_back(std::move(e.word));
  }
  return words;
}

inline std::vector<std::string> extract_emails(std::string_view text) {
  static const std::regex kEmail(
      "[A-Za-z0-9._%+-]+@[A-Za-z0-9-]+(?:\\.[A-Za-z0-9-]+)*\\.[A-Za-z]{2,}");
  std::vector<std::string> out;
  for (auto it = std::cregex_iterator(text.data(), text.data() + text.size(),
                                      kEmail);
       it != std::cregex_iterator(); ++it) {
    out.push_back(it->str(0));
  }
  return out;
}

// Dotted quads whose octets are all in 0..255. Candidates are maximal runs
// of digits and dots, so "256.1.1.1" is rejected whole rather than matched
// as "56.1.1.1".
inline std::vector<std::string> extract_ips(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!detail::is_digit_or_dot(text[i]) ||
        (i > 0 && detail::is_word_byte(text[i - 1]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && detail::is_digit_or_dot(text[j])) ++j;
    std::string_view run = text.substr(i, j - i);
    const bool word_after = j < text.size() && detail::is_word_byte(text[j]);
    i = j;
    while (!run.empty() && run.back() == '.') run.remove_suffix(1);
    if (word_after || run.empty() || run.front() == '.') continue;
    std::size_t parts = 0;
    bool valid = true;
    std::size_t pos = 0;
    while (valid && pos <= run.size()) {
      const auto dot = std::min(run.find('.', pos), run.size());
      const std::string_view octet = run.substr(pos, dot - pos);
      valid = !octet.empty() && octet.size() <= 3 &&
              std::stoi(std::string(octet)) <= 255;
      ++parts;
      pos = dot + 1;
    }
    if (valid && parts == 4) out.emplace_back(run);
  }
  return out;
}

}  // namespace curata

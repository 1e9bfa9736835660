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

// Text core: format stripping, tokenization, sentence splitting, stopword
// filtering and keyword extraction.

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "curata/detail/entities.hpp"
#include "curata/detail/utf8.hpp"
#include "curata/error.hpp"

namespace curata {

struct Document {
  std::string id;
  std::string text;
  std::optional<std::string> source;
};

// A word of the input. `start`/`end` are byte offsets into the original text
// and `surface` is the lowercased slice. `index` is the ordinal of the token
// among all tokens of the text, counted before stopword removal, so gaps in
// `index` mark removed stopwords.
struct Token {
  std::string surface;
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t index = 0;

  friend bool operator==(const Token&, const Token&) = default;
};

struct Sentence {
  std::string text;
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t index = 0;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct Keyword {
  std::string term;
  std::size_t frequency = 0;
  double score = 0.0;

  friend bool operator==(const Keyword&, const Keyword&) = default;
};

// Set of lowercase words without internal whitespace.
class StopwordList {
 public:
  StopwordList() = default;

  template <typename Range>
  explicit StopwordList(const Range& words) {
    for (const auto& w : words) insert(w);
  }
  StopwordList(std::initializer_list<std::string_view> words) {
    for (const auto& w : words) insert(w);
  }

  void insert(std::string_view word) {
    const std::string_view trimmed = detail::trim(word);
    if (trimmed.empty()) return;
    for (char c : trimmed) {
      if (detail::is_space(c)) {
        throw ArgumentError("stopword contains whitespace: '" +
                            std::string(trimmed) + "'");
      }
    }
    words_.insert(detail::to_lower(trimmed));
  }

  bool contains(std::string_view lowercase_word) const {
    return words_.find(std::string(lowercase_word)) != words_.end();
  }

  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  const std::set<std::string>& words() const { return words_; }

  friend bool operator==(const StopwordList&, const StopwordList&) = default;

 private:
  std::set<std::string> words_;
};

// English function words. Shipped verbatim as resources/stopwords.txt.
inline const StopwordList& english_stopwords() {
  static const StopwordList list{
      "a",       "about",   "above",   "after",   "again",   "against",
      "all",     "am",      "an",      "and",     "any",     "are",
      "as",      "at",      "be",      "because", "been",    "before",
      "being",   "below",   "between", "both",    "but",     "by",
      "can",     "could",   "did",     "do",      "does",    "doing",
      "down",    "during",  "each",    "few",     "for",     "from",
      "further", "had",     "has",     "have",    "having",  "he",
      "her",     "here",    "hers",    "herself", "him",     "himself",
      "his",     "how",     "i",       "if",      "in",      "into",
      "is",      "it",      "its",     "itself",  "just",    "me",
      "more",    "most",    "my",      "myself",  "no",      "nor",
      "not",     "now",     "of",      "off",     "on",      "once",
      "only",    "or",      "other",   "our",     "ours",    "ourselves",
      "out",     "over",    "own",     "same",    "she",     "should",
      "so",      "some",    "such",    "than",    "that",    "the",
      "their",   "theirs",  "them",    "themselves", "then", "there",
      "these",   "they",    "this",    "those",   "through", "to",
      "too",     "under",   "until",   "up",      "very",    "was",
      "we",      "were",    "what",    "when",    "where",   "which",
      "while",   "who",     "whom",    "why",     "will",    "with",
      "would",   "you",     "your",    "yours",   "yourself", "yourselves",
  };
  return list;
}

// One word per line, `#` starts a comment.
inline StopwordList load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open stopword file: " + path);
  StopwordList list;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    const std::string_view word = detail::trim(line);
    if (word.empty()) continue;
    if (std::any_of(word.begin(), word.end(), detail::is_space)) {
      throw ParseError("stopword contains whitespace in " + path, line_no);
    }
    list.insert(word);
  }
  return list;
}

// Relative frequencies of terms in a large reference corpus.
using ReferenceFrequencies = std::unordered_map<std::string, double>;

// TSV `term<TAB>relative_frequency`; blank lines and `#` comments skipped.
inline ReferenceFrequencies load_reference_frequencies(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open reference table: " + path);
  ReferenceFrequencies table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError("expected term<TAB>frequency in " + path, line_no);
    }
    std::size_t consumed = 0;
    double value = 0;
    try {
      value = std::stod(line.substr(tab + 1), &consumed);
    } catch (const std::exception&) {
      throw ParseError("bad frequency in " + path, line_no);
    }
    if (value < 0) throw ParseError("negative frequency in " + path, line_no);
    table[detail::to_lower(detail::trim(line.substr(0, tab)))] = value;
  }
  return table;
}

enum class FormatKind { kHtml, kPlain };

namespace detail {

inline std::string normalize_newlines(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\r') {
      out.push_back('\n');
      if (i + 1 < s.size() && s[i + 1] == '\n') ++i;
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

inline bool is_block_tag(std::string_view name) {
  static constexpr std::array<std::string_view, 28> kBlock = {
      "address", "article", "aside", "blockquote", "br", "dd", "div",
      "dl",      "dt",      "footer", "form",     "h1", "h2", "h3",
      "h4",      "h5",      "h6",     "header",   "hr", "li", "ol",
      "p",       "pre",     "section", "table",   "title", "tr", "ul"};
  return std::find(kBlock.begin(), kBlock.end(), name) != kBlock.end();
}

inline char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline bool starts_with_icase(std::string_view s, std::size_t pos,
                              std::string_view prefix) {
  if (pos + prefix.size() > s.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (ascii_lower(s[pos + i]) != prefix[i]) return false;
  }
  return true;
}

inline std::size_t find_icase(std::string_view s, std::size_t pos,
                              std::string_view needle) {
  for (std::size_t i = pos; i + needle.size() <= s.size(); ++i) {
    if (starts_with_icase(s, i, needle)) return i;
  }
  return std::string_view::npos;
}

inline std::string strip_html(std::string_view raw) {
  std::string out;
  std::string run;
  const auto flush = [&] {
    out += decode_entities(run);
    run.clear();
  };
  const auto newline = [&] {
    flush();
    if (!out.empty() && out.back() != '\n') out.push_back('\n');
  };
  std::size_t i = 0;
  while (i < raw.size()) {
    if (raw[i] != '<') {
      run.push_back(raw[i++]);
      continue;
    }
    if (raw.compare(i, 4, "<!--") == 0) {
      const auto close = raw.find("-->", i + 4);
      i = close == std::string_view::npos ? raw.size() : close + 3;
      continue;
    }
    const auto gt = raw.find('>', i + 1);
    if (gt == std::string_view::npos) break;  // unclosed tag: drop the rest
    std::string_view body = raw.substr(i + 1, gt - i - 1);
    const bool closing = !body.empty() && body[0] == '/';
    if (closing) body.remove_prefix(1);
    std::string name;
    for (char c : body) {
      if (is_space(c) || c == '/') break;
      name.push_back(ascii_lower(c));
    }
    i = gt + 1;
    if (!closing && (name == "script" || name == "style")) {
      const auto end = find_icase(raw, i, "</" + name);
      if (end == std::string_view::npos) {
        i = raw.size();
      } else {
        const auto end_gt = raw.find('>', end);
        i = end_gt == std::string_view::npos ? raw.size() : end_gt + 1;
      }
      continue;
    }
    // Block boundaries become a single newline.
    if (is_block_tag(name)) newline();
  }
  flush();
  return normalize_newlines(out);
}

}  // namespace detail

// Removes markup from `raw`. For kHtml, tags and comments are dropped, the
// contents of script/style are skipped, entities are decoded and block-level
// boundaries become newlines. Both kinds normalize line endings to LF.
inline std::string strip_format(std::string_view raw, FormatKind kind) {
  if (kind == FormatKind::kPlain) return detail::normalize_newlines(raw);
  return detail::strip_html(raw);
}

// Tokens are maximal runs of letters, digits and apostrophes, with leading
// and trailing apostrophes trimmed. Stopwords are dropped but still consume
// an ordinal.
inline std::vector<Token> tokenize(std::string_view text,
                                   const StopwordList& stopwords) {
  std::vector<Token> tokens;
  std::size_t ordinal = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    auto cp = detail::decode_utf8(text, i);
    if (!detail::is_alnum(cp.value) && !detail::is_apostrophe(cp.value)) {
      i += cp.length;
      continue;
    }
    std::size_t start = i;
    std::size_t end = i;
    std::size_t last_alnum_end = std::string_view::npos;
    std::size_t first_alnum = std::string_view::npos;
    while (end < text.size()) {
      cp = detail::decode_utf8(text, end);
      const bool alnum = detail::is_alnum(cp.value);
      if (!alnum && !detail::is_apostrophe(cp.value)) break;
      if (alnum) {
        if (first_alnum == std::string_view::npos) first_alnum = end;
        last_alnum_end = end + cp.length;
      }
      end += cp.length;
    }
    i = end;
    if (first_alnum == std::string_view::npos) continue;  // apostrophes only
    start = first_alnum;
    end = last_alnum_end;
    std::string surface = detail::to_lower(text.substr(start, end - start));
    const std::size_t index = ordinal++;
    if (stopwords.contains(surface)) continue;
    tokens.push_back(Token{std::move(surface), start, end, index});
  }
  return tokens;
}

inline std::vector<Token> tokenize(std::string_view text) {
  return tokenize(text, StopwordList{});
}

namespace detail {

inline bool is_abbreviation(std::string_view word) {
  static constexpr std::array<std::string_view, 30> kAbbrev = {
      "mr",  "mrs", "ms",  "dr",  "prof", "sr",   "jr",  "st",
      "vs",  "etc", "inc", "ltd", "co",   "corp", "mt",  "gen",
      "col", "lt",  "sgt", "rev", "hon",  "ft",   "fig", "e.g",
      "i.e", "u.s", "approx", "dept", "est", "ave"};
  const std::string lower = to_lower(word);
  return std::find(kAbbrev.begin(), kAbbrev.end(), lower) != kAbbrev.end();
}

inline bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

}  // namespace detail

// Splits on runs of . ! ? followed by whitespace and an uppercase letter or
// digit, or by the end of the text. A period that ends a known abbreviation
// (Mr., Dr., Inc., ...) never splits.
inline std::vector<Sentence> split_sentences(std::string_view text) {
  std::vector<Sentence> sentences;
  const auto emit = [&](std::size_t start, std::size_t end) {
    while (start < end && detail::is_space(text[start])) ++start;
    while (end > start && detail::is_space(text[end - 1])) --end;
    if (start == end) return;
    sentences.push_back(Sentence{std::string(text.substr(start, end - start)),
                                 start, end, sentences.size()});
  };
  std::size_t sentence_start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!detail::is_terminator(text[i])) {
      ++i;
      continue;
    }
    const std::size_t punct = i;
    std::size_t run_end = i;
    while (run_end < text.size() && detail::is_terminator(text[run_end])) {
      ++run_end;
    }
    // Closing quotes and brackets stay with the sentence they end.
    while (run_end < text.size() &&
           (text[run_end] == '"' || text[run_end] == '\'' ||
            text[run_end] == ')')) {
      ++run_end;
    }
    std::size_t next = run_end;
    while (next < text.size() && detail::is_space(text[next])) ++next;
    bool boundary = false;
    if (next == text.size()) {
      boundary = true;
    } else if (next > run_end) {
      const auto cp = detail::decode_utf8(text, next);
      boundary = detail::is_upper(cp.value) || detail::is_digit(cp.value) ||
                 text[next] == '"';
    }
    if (boundary && text[punct] == '.' && run_end - punct == 1) {
      std::size_t w = punct;
      while (w > sentence_start &&
             (detail::is_alnum(detail::decode_utf8(text, w - 1).value) ||
              text[w - 1] == '.')) {
        --w;
      }
      if (detail::is_abbreviation(text.substr(w, punct - w))) boundary = false;
    }
    if (boundary) {
      emit(sentence_start, run_end);
      sentence_start = run_end;
    }
    i = run_end;
  }
  emit(sentence_start, text.size());
  return sentences;
}

// One keyword per distinct non-stopword token, ordered by score (descending)
// then term. With a reference table the score is the ratio of the term's
// relative frequency in the document (over all tokens, stopwords included) to
// its reference relative frequency, floored at 1e-6 for unseen terms. Without
// a reference the score is the raw frequency.
inline std::vector<Keyword> extract_keywords(
    const Document& doc, const StopwordList& stopwords,
    const ReferenceFrequencies* reference = nullptr) {
  constexpr double kUnseenFloor = 1e-6;
  const std::vector<Token> all = tokenize(doc.text);
  std::map<std::string, std::size_t> counts;
  for (const Token& t : all) {
    if (!stopwords.contains(t.surface)) ++counts[t.surface];
  }
  std::vector<Keyword> keywords;
  keywords.reserve(counts.size());
  for (const auto& [term, freq] : counts) {
    double score = static_cast<double>(freq);
    if (reference != nullptr) {
      double expected = kUnseenFloor;
      if (const auto it = reference->find(term); it != reference->end()) {
        expected = std::max(it->second, kUnseenFloor);
      }
      score = (static_cast<double>(freq) / static_cast<double>(all.size())) /
              expected;
    }
    keywords.push_back(Keyword{term, freq, score});
  }
  std::stable_sort(keywords.begin(), keywords.end(),
                   [](const Keyword& a, const Keyword& b) {
                     return a.score > b.score;
                   });
  return keywords;
}

}  // namespace curata

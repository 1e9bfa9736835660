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

// Lexicon-driven part-of-speech tagging and chunking, stemming, word-form
// lookup and synonym/hypernym lookup.

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "curata/detail/utf8.hpp"
#include "curata/error.hpp"
#include "curata/text.hpp"

namespace curata {

enum class PosTag {
  kNoun,
  kVerb,
  kAdj,
  kAdv,
  kPron,
  kDet,
  kPrep,
  kConj,
  kNum,
  kInterj,
  kPunct,
  kOther,
};

inline constexpr std::array<std::pair<PosTag, std::string_view>, 12>
    kPosTagNames = {{
        {PosTag::kNoun, "NOUN"},
        {PosTag::kVerb, "VERB"},
        {PosTag::kAdj, "ADJ"},
        {PosTag::kAdv, "ADV"},
        {PosTag::kPron, "PRON"},
        {PosTag::kDet, "DET"},
        {PosTag::kPrep, "PREP"},
        {PosTag::kConj, "CONJ"},
        {PosTag::kNum, "NUM"},
        {PosTag::kInterj, "INTERJ"},
        {PosTag::kPunct, "PUNCT"},
        {PosTag::kOther, "OTHER"},
    }};

inline std::string_view to_string(PosTag tag) {
  for (const auto& [t, name] : kPosTagNames) {
    if (t == tag) return name;
  }
  return "OTHER";
}

inline std::optional<PosTag> parse_pos_tag(std::string_view label) {
  std::string upper;
  for (char c : detail::trim(label)) {
    upper.push_back((c >= 'a' && c <= 'z') ? static_cast<char>(c - 32) : c);
  }
  for (const auto& [t, name] : kPosTagNames) {
    if (name == upper) return t;
  }
  return std::nullopt;
}

struct TaggedToken {
  std::string word_part;
  PosTag tag = PosTag::kOther;

  friend bool operator==(const TaggedToken&, const TaggedToken&) = default;
};

namespace detail {

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    parts.push_back(s.substr(pos, next == std::string_view::npos
                                      ? std::string_view::npos
                                      : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return parts;
}

// Calls `row(fields, line_no)` for each non-blank, non-comment TSV line.
template <typename RowFn>
void for_each_tsv_row(const std::string& path, RowFn&& row) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line[0] == '#') continue;
    row(split(line, '\t'), line_no);
  }
}

}  // namespace detail

// Word -> possible tags (most frequent first), plus suffix rules for words
// the lexicon does not know. Rules are kept longest-suffix-first.
class PosLexicon {
 public:
  void add_word(std::string_view word, std::vector<PosTag> tags) {
    if (tags.empty()) throw ArgumentError("lexicon word without tags");
    words_[detail::to_lower(detail::trim(word))] = std::move(tags);
  }

  void add_suffix_rule(std::string_view suffix, PosTag tag) {
    const std::string s = detail::to_lower(detail::trim(suffix));
    if (s.empty()) throw ArgumentError("empty suffix rule");
    const auto pos = std::find_if(
        suffixes_.begin(), suffixes_.end(),
        [&](const auto& rule) { return rule.first.size() < s.size(); });
    suffixes_.insert(pos, {s, tag});
  }

  std::span<const PosTag> tags_of(std::string_view lowercase_word) const {
    const auto it = words_.find(std::string(lowercase_word));
    if (it == words_.end()) return {};
    return it->second;
  }

  std::optional<PosTag> suffix_tag(std::string_view lowercase_word) const {
    for (const auto& [suffix, tag] : suffixes_) {
      if (lowercase_word.size() > suffix.size() &&
          lowercase_word.ends_with(suffix)) {
        return tag;
      }
    }
    return std::nullopt;
  }

  const std::vector<std::pair<std::string, PosTag>>& suffix_rules() const {
    return suffixes_;
  }
  std::size_t size() const { return words_.size(); }

  // Every known word, for use as a common-word list.
  StopwordList vocabulary() const {
    StopwordList list;
    for (const auto& [word, tags] : words_) {
      if (word.find(' ') == std::string::npos) list.insert(word);
    }
    return list;
  }

 private:
  std::unordered_map<std::string, std::vector<PosTag>> words_;
  std::vector<std::pair<std::string, PosTag>> suffixes_;
};

// Lexicon TSV `word<TAB>tag1,tag2,...`; suffix TSV `suffix<TAB>tag`.
inline PosLexicon load_pos_lexicon(const std::string& lexicon_path,
                                   const std::string& suffix_path) {
  PosLexicon lex;
  detail::for_each_tsv_row(lexicon_path, [&](const auto& fields,
                                             std::size_t line) {
    if (fields.size() != 2) throw ParseError("expected word<TAB>tags", line);
    std::vector<PosTag> tags;
    for (auto label : detail::split(fields[1], ',')) {
      const auto tag = parse_pos_tag(label);
      if (!tag) throw ParseError("unknown tag '" + std::string(label) + "'", line);
      tags.push_back(*tag);
    }
    lex.add_word(fields[0], std::move(tags));
  });
  detail::for_each_tsv_row(suffix_path, [&](const auto& fields,
                                            std::size_t line) {
    if (fields.size() != 2) throw ParseError("expected suffix<TAB>tag", line);
    const auto tag = parse_pos_tag(fields[1]);
    if (!tag) throw ParseError("unknown tag", line);
    lex.add_suffix_rule(fields[0], *tag);
  });
  return lex;
}

namespace detail {

inline PosTag tag_unknown(std::string_view word, const PosLexicon& lex) {
  bool has_letter = false;
  bool has_digit = false;
  for (std::size_t i = 0; i < word.size();) {
    const auto cp = decode_utf8(word, i);
    has_digit = has_digit || is_digit(cp.value);
    has_letter = has_letter || (is_alnum(cp.value) && !is_digit(cp.value));
    i += cp.length;
  }
  if (!has_letter) return has_digit ? PosTag::kNum : PosTag::kPunct;
  return lex.suffix_tag(word).value_or(PosTag::kNoun);
}

}  // namespace detail

// One tag per token (stopwords retained). Known words take their first
// lexicon tag, except that a word directly after a determiner is tagged NOUN
// when NOUN is one of its readings. Unknown words use the longest matching
// suffix rule, defaulting to NOUN; digit-only tokens are NUM.
inline std::vector<TaggedToken> tag_pos(std::string_view text,
                                        const PosLexicon& lex) {
  std::vector<TaggedToken> out;
  for (const Token& t : tokenize(text)) {
    const auto tags = lex.tags_of(t.surface);
    PosTag tag;
    if (tags.empty()) {
      tag = detail::tag_unknown(t.surface, lex);
    } else {
      tag = tags.front();
      if (!out.empty() && out.back().tag == PosTag::kDet &&
          std::find(tags.begin(), tags.end(), PosTag::kNoun) != tags.end()) {
        tag = PosTag::kNoun;
      }
    }
    out.push_back(
        TaggedToken{std::string(text.substr(t.start, t.end - t.start)), tag});
  }
  return out;
}

// Words of one open class (NOUN, VERB, ADJ or ADV) in document order.
inline std::vector<std::string> extract_pos_class(std::string_view text,
                                                  const PosLexicon& lex,
                                                  PosTag cls) {
  if (cls != PosTag::kNoun && cls != PosTag::kVerb && cls != PosTag::kAdj &&
      cls != PosTag::kAdv) {
    throw ArgumentError("unsupported word class: " +
                        std::string(to_string(cls)));
  }
  std::vector<std::string> words;
  for (auto& t : tag_pos(text, lex)) {
    if (t.tag == cls) words.push_back(std::move(t.word_part));
  }
  return words;
}

enum class ChunkLabel { kNP, kVP, kO };

inline std::string_view to_string(ChunkLabel label) {
  switch (label) {
    case ChunkLabel::kNP: return "NP";
    case ChunkLabel::kVP: return "VP";
    case ChunkLabel::kO: return "O";
  }
  return "O";
}

struct Chunk {
  ChunkLabel label = ChunkLabel::kO;
  std::vector<TaggedToken> tokens;

  friend bool operator==(const Chunk&, const Chunk&) = default;
};

// Chunks partition the tagged token sequence in order.
struct ChunkTree {
  std::vector<Chunk> chunks;

  friend bool operator==(const ChunkTree&, const ChunkTree&) = default;
};

// Greedy left-to-right chunking: DET? ADJ* NOUN+ is an NP, ADV* VERB+ a VP.
// Tokens matching neither form O chunks, one per maximal run.
inline ChunkTree extract_phrases(std::string_view text, const PosLexicon& lex) {
  const std::vector<TaggedToken> tagged = tag_pos(text, lex);
  const auto at = [&](std::size_t i, PosTag tag) {
    return i < tagged.size() && tagged[i].tag == tag;
  };
  // Length of the phrase of `label` starting at i, 0 when none.
  const auto match = [&](std::size_t i, ChunkLabel label) -> std::size_t {
    std::size_t j = i;
    if (label == ChunkLabel::kNP) {
      if (at(j, PosTag::kDet)) ++j;
      while (at(j, PosTag::kAdj)) ++j;
      const std::size_t heads = j;
      while (at(j, PosTag::kNoun)) ++j;
      return j > heads ? j - i : 0;
    }
    while (at(j, PosTag::kAdv)) ++j;
    const std::size_t heads = j;
    while (at(j, PosTag::kVerb)) ++j;
    return j > heads ? j - i : 0;
  };

  ChunkTree tree;
  std::size_t i = 0;
  while (i < tagged.size()) {
    ChunkLabel label = ChunkLabel::kNP;
    std::size_t len = match(i, ChunkLabel::kNP);
    if (len == 0) {
      label = ChunkLabel::kVP;
      len = match(i, ChunkLabel::kVP);
    }
    if (len == 0) {
      if (tree.chunks.empty() || tree.chunks.back().label != ChunkLabel::kO) {
        tree.chunks.push_back(Chunk{ChunkLabel::kO, {}});
      }
      tree.chunks.back().tokens.push_back(tagged[i++]);
      continue;
    }
    tree.chunks.push_back(Chunk{
        label, {tagged.begin() + static_cast<std::ptrdiff_t>(i),
                tagged.begin() + static_cast<std::ptrdiff_t>(i + len)}});
    i += len;
  }
  return tree;
}

// Tags the text found between paired double quotes. An unpaired final quote
// is ignored.
inline std::vector<TaggedToken> extract_quotation(std::string_view text,
                                                  const PosLexicon& lex) {
  std::string quoted;
  std::size_t open = std::string_view::npos;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '"') continue;
    if (open == std::string_view::npos) {
      open = i;
    } else {
      quoted.append(text.substr(open + 1, i - open - 1));
      quoted.push_back(' ');
      open = std::string_view::npos;
    }
  }
  return tag_pos(quoted, lex);
}

namespace detail {

// Porter-style helpers over lowercase ASCII; other characters count as
// consonants.
inline bool is_consonant(std::string_view w, std::size_t i) {
  switch (w[i]) {
    case 'a': case 'e': case 'i': case 'o': case 'u': return false;
    case 'y': return i == 0 || !is_consonant(w, i - 1);
    default: return true;
  }
}

// Number of VC sequences in [C](VC)^m[V].
inline std::size_t measure(std::string_view w) {
  std::size_t m = 0;
  std::size_t i = 0;
  while (i < w.size() && is_consonant(w, i)) ++i;
  while (i < w.size()) {
    while (i < w.size() && !is_consonant(w, i)) ++i;
    if (i == w.size()) break;
    while (i < w.size() && is_consonant(w, i)) ++i;
    ++m;
  }
  return m;
}

inline bool has_vowel(std::string_view w) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!is_consonant(w, i)) return true;
  }
  return false;
}

inline bool ends_double_consonant(std::string_view w) {
  const std::size_t n = w.size();
  return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

// consonant-vowel-consonant ending, last consonant not w, x or y.
inline bool ends_cvc(std::string_view w) {
  const std::size_t n = w.size();
  if (n < 3) return false;
  const char last = w[n - 1];
  return is_consonant(w, n - 3) && !is_consonant(w, n - 2) &&
         is_consonant(w, n - 1) && last != 'w' && last != 'x' && last != 'y';
}

inline std::size_t letter_count(std::string_view w) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < w.size();) {
    const auto cp = decode_utf8(w, i);
    if (is_alnum(cp.value) && !is_digit(cp.value)) ++n;
    i += cp.length;
  }
  return n;
}

inline std::string strip_inflection(std::string w) {
  // Plurals and third person -s.
  if (w.ends_with("sses")) {
    w.erase(w.size() - 2);
  } else if (w.ends_with("ies") && w.size() > 4) {
    w.replace(w.size() - 3, 3, "y");
  } else if (w.ends_with("ies")) {
    w.erase(w.size() - 1);
  } else if (w.size() > 4 && (w.ends_with("xes") || w.ends_with("ches") ||
                              w.ends_with("shes") || w.ends_with("zzes"))) {
    w.erase(w.size() - 2);
  } else if (w.size() > 3 && w.back() == 's') {
    const char before = w[w.size() - 2];
    if (before != 's' && before != 'u' && before != 'i') w.pop_back();
  }

  // -eed / -ed / -ing with e-restoration and doubled-consonant undoing.
  bool stripped = false;
  if (w.ends_with("eed")) {
    if (measure(std::string_view(w).substr(0, w.size() - 3)) > 0) w.pop_back();
  } else if (w.ends_with("ed") && has_vowel(std::string_view(w).substr(0, w.size() - 2))) {
    w.erase(w.size() - 2);
    stripped = true;
  } else if (w.ends_with("ing") &&
             has_vowel(std::string_view(w).substr(0, w.size() - 3))) {
    w.erase(w.size() - 3);
    stripped = true;
  }
  if (stripped) {
    if (w.ends_with("at") || w.ends_with("bl") || w.ends_with("iz")) {
      w.push_back('e');
    } else if (ends_double_consonant(w) && w.back() != 'l' && w.back() != 's' &&
               w.back() != 'z') {
      w.pop_back();
    } else if (measure(w) == 1 && ends_cvc(w)) {
      w.push_back('e');
    }
  }
  return w;
}

inline std::string strip_derivation(std::string w) {
  static constexpr std::array<std::string_view, 11> kSuffixes = {
      "fulness", "ships", "fully", "ment", "ness", "ship",
      "tion",    "iest",  "ful",   "ier",  "ly"};
  for (std::string_view suffix : kSuffixes) {
    if (w.ends_with(suffix) &&
        letter_count(std::string_view(w).substr(0, w.size() - suffix.size())) >=
            3) {
      w.erase(w.size() - suffix.size());
      break;
    }
  }
  return w;
}

}  // namespace detail

// Lowercases `word`, strips inflectional suffixes (-s, -es, -ed, -ing) and
// then one derivational suffix (-ship(s), -ness, -ful(ly|ness), -ier, -iest,
// -ly, -ment, -tion) whose removal leaves at least three letters. The two
// stages repeat until the word stops changing, so stem(stem(w)) == stem(w).
inline std::string stem(std::string_view word) {
  std::string w = detail::to_lower(detail::trim(word));
  if (w.empty()) throw ArgumentError("cannot stem an empty word");
  while (true) {
    std::string next = detail::strip_derivation(detail::strip_inflection(w));
    if (next == w || next.empty()) return w;
    w = std::move(next);
  }
}

struct WordForms {
  std::string lemma;
  std::optional<std::string> noun;
  std::optional<std::string> verb;
  std::optional<std::string> adjective;
  std::optional<std::string> adverb;

  friend bool operator==(const WordForms&, const WordForms&) = default;
};

class WordFormsDb {
 public:
  void add(WordForms row) {
    if (!row.noun && !row.verb && !row.adjective && !row.adverb &&
        row.lemma.empty()) {
      throw ArgumentError("word-forms row without any form");
    }
    const std::size_t id = rows_.size();
    for (const auto* cell :
         {&row.lemma, row.noun ? &*row.noun : nullptr, row.verb ? &*row.verb : nullptr,
          row.adjective ? &*row.adjective : nullptr,
          row.adverb ? &*row.adverb : nullptr}) {
      if (cell != nullptr && !cell->empty()) {
        index_.emplace(detail::to_lower(*cell), id);  // first row wins
      }
    }
    rows_.push_back(std::move(row));
  }

  // Row containing `word` in any column; nullopt when absent.
  std::optional<WordForms> find(std::string_view word) const {
    const auto it = index_.find(detail::to_lower(detail::trim(word)));
    if (it == index_.end()) return std::nullopt;
    return rows_[it->second];
  }

  std::size_t size() const { return rows_.size(); }

 private:
  std::vector<WordForms> rows_;
  std::unordered_map<std::string, std::size_t> index_;
};

// TSV `lemma<TAB>noun<TAB>verb<TAB>adjective<TAB>adverb`, empty cells allowed.
inline WordFormsDb load_word_forms(const std::string& path) {
  WordFormsDb db;
  detail::for_each_tsv_row(path, [&](const auto& fields, std::size_t line) {
    if (fields.size() < 2 || fields.size() > 5) {
      throw ParseError("expected lemma and up to four forms", line);
    }
    const auto cell = [&](std::size_t i) -> std::optional<std::string> {
      if (i >= fields.size()) return std::nullopt;
      const auto v = detail::trim(fields[i]);
      if (v.empty()) return std::nullopt;
      return std::string(v);
    };
    WordForms row{std::string(detail::trim(fields[0])), cell(1), cell(2),
                  cell(3), cell(4)};
    if (!row.noun && !row.verb && !row.adjective && !row.adverb) {
      throw ParseError("row has no forms", line);
    }
    db.add(std::move(row));
  });
  return db;
}

inline std::optional<WordForms> derived_forms(std::string_view word,
                                              const WordFormsDb& db) {
  return db.find(word);
}

// Synonym and hypernym sets per word. Synonymy is stored symmetrically and a
// word is never its own synonym.
class SynsetLexicon {
 public:
  void add_synonym(std::string_view a, std::string_view b) {
    const std::string x = normalize(a);
    const std::string y = normalize(b);
    if (x.empty() || y.empty() || x == y) return;
    entries_[x].synonyms.insert(y);
    entries_[y].synonyms.insert(x);
  }

  void add_hypernym(std::string_view word, std::string_view hypernym) {
    const std::string x = normalize(word);
    const std::string y = normalize(hypernym);
    if (x.empty() || y.empty()) return;
    entries_[x].hypernyms.insert(y);
  }

  std::vector<std::string> synonyms(std::string_view word) const {
    const auto it = entries_.find(normalize(word));
    if (it == entries_.end()) return {};
    return {it->second.synonyms.begin(), it->second.synonyms.end()};
  }

  std::vector<std::string> hypernyms(std::string_view word) const {
    const auto it = entries_.find(normalize(word));
    if (it == entries_.end()) return {};
    return {it->second.hypernyms.begin(), it->second.hypernyms.end()};
  }

  std::size_t size() const { return entries_.size(); }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (const auto& [word, entry] : entries_) {
      fn(word, entry.synonyms, entry.hypernyms);
    }
  }

 private:
  struct Entry {
    std::set<std::string> synonyms;
    std::set<std::string> hypernyms;
  };

  static std::string normalize(std::string_view s) {
    return detail::collapse_whitespace(detail::to_lower(s));
  }

  std::map<std::string, Entry, std::less<>> entries_;
};

// TSV `word<TAB>SYN|HYP<TAB>target`.
inline SynsetLexicon load_synsets(const std::string& path) {
  SynsetLexicon lex;
  detail::for_each_tsv_row(path, [&](const auto& fields, std::size_t line) {
    if (fields.size() != 3) throw ParseError("expected word<TAB>rel<TAB>target", line);
    const auto rel = detail::trim(fields[1]);
    if (rel == "SYN") {
      lex.add_synonym(fields[0], fields[2]);
    } else if (rel == "HYP") {
      lex.add_hypernym(fields[0], fields[2]);
    } else {
      throw ParseError("relation must be SYN or HYP", line);
    }
  });
  return lex;
}

inline std::vector<std::string> synonyms(std::string_view word,
                                         const SynsetLexicon& lex) {
  return lex.synonyms(word);
}

inline std::vector<std::string> hypernyms(std::string_view word,
                                          const SynsetLexicon& lex) {
  return lex.hypernyms(word);
}

struct WordSynonyms {
  std::string word;
  std::vector<std::string> synonyms;

  friend bool operator==(const WordSynonyms&, const WordSynonyms&) = default;
};

// One entry per distinct non-stopword token that has synonyms, in order of
// first occurrence.
inline std::vector<WordSynonyms> synonyms_text(
    std::string_view text, const SynsetLexicon& lex,
    const StopwordList& stopwords = english_stopwords()) {
  std::vector<WordSynonyms> out;
  std::set<std::string> seen;
  for (const Token& t : tokenize(text, stopwords)) {
    if (!seen.insert(t.surface).second) continue;
    auto syns = lex.synonyms(t.surface);
    if (!syns.empty()) out.push_back(WordSynonyms{t.surface, std::move(syns)});
  }
  return out;
}

}  // namespace curata

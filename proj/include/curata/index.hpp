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

// Positional inverted index with order-insensitive proximity ("slop") search
// and a binary on-disk form.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "curata/error.hpp"
#include "curata/text.hpp"

namespace curata {

class InvertedIndex;
InvertedIndex deserialize_index(std::string_view data);

struct Posting {
  std::string doc_id;
  std::vector<std::size_t> positions;  // strictly increasing token ordinals

  friend bool operator==(const Posting&, const Posting&) = default;
};

struct SlopQuery {
  std::vector<std::string> terms;
  std::size_t slop = 0;
};

struct SearchHit {
  std::string doc_id;
  std::string sentence;
  std::size_t spread = 0;

  friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

// Work counters filled in by search().
struct SearchStats {
  std::size_t candidate_docs = 0;
  std::size_t positions_read = 0;
};

class InvertedIndex {
 public:
  explicit InvertedIndex(StopwordList stopwords = english_stopwords())
      : stopwords_(std::move(stopwords)) {}

  void add_document(const Document& doc) {
    if (docs_.count(doc.id)) {
      throw ArgumentError("duplicate document id: " + doc.id);
    }
    std::map<std::string, std::vector<std::size_t>> positions;
    for (const Token& t : tokenize(doc.text, stopwords_)) {
      positions[t.surface].push_back(t.index);
    }
    for (auto& [term, pos] : positions) {
      auto& list = postings_[term];
      auto at = std::lower_bound(
          list.begin(), list.end(), doc.id,
          [](const Posting& p, const std::string& id) { return p.doc_id < id; });
      list.insert(at, Posting{doc.id, std::move(pos)});
    }
    docs_.emplace(doc.id, doc.text);
  }

  std::size_t doc_count() const { return docs_.size(); }
  std::size_t term_count() const { return postings_.size(); }

  const std::vector<Posting>& postings(std::string_view term) const {
    static const std::vector<Posting> kNone;
    auto it = postings_.find(detail::to_lower(term));
    return it == postings_.end() ? kNone : it->second;
  }

  std::optional<std::string> text(const std::string& doc_id) const {
    auto it = docs_.find(doc_id);
    if (it == docs_.end()) return std::nullopt;
    return it->second;
  }

  const StopwordList& stopwords() const { return stopwords_; }
  const std::map<std::string, std::string>& documents() const { return docs_; }
  const std::map<std::string, std::vector<Posting>>& all_postings() const {
    return postings_;
  }

  friend bool operator==(const InvertedIndex&, const InvertedIndex&) = default;

 private:
  friend InvertedIndex deserialize_index(std::string_view data);

  StopwordList stopwords_;
  std::map<std::string, std::string> docs_;
  std::map<std::string, std::vector<Posting>> postings_;
};

inline InvertedIndex build_index(const std::vector<Document>& docs,
                                 StopwordList stopwords = english_stopwords()) {
  InvertedIndex index(std::move(stopwords));
  for (const auto& d : docs) index.add_document(d);
  return index;
}

// Lowercased query tokens; stopwords are dropped since they are never indexed.
inline SlopQuery make_query(std::string_view text, std::size_t slop,
                            const StopwordList& stopwords = english_stopwords()) {
  SlopQuery q{{}, slop};
  for (const Token& t : tokenize(text, stopwords)) q.terms.push_back(t.surface);
  return q;
}

namespace detail {

struct Window {
  std::size_t first = 0;
  std::size_t width = std::numeric_limits<std::size_t>::max();
};

// Smallest window over the merged position lists holding `need[i]` distinct
// positions of term i. Each position is read once.
inline Window min_window(const std::vector<const std::vector<std::size_t>*>& lists,
                         const std::vector<std::size_t>& need,
                         std::size_t& positions_read) {
  struct Event {
    std::size_t pos;
    std::size_t term;
  };
  std::vector<Event> merged;
  std::vector<std::size_t> head(lists.size(), 0);
  while (true) {
    std::size_t best = lists.size();
    for (std::size_t i = 0; i < lists.size(); ++i) {
      if (head[i] < lists[i]->size() &&
          (best == lists.size() ||
           (*lists[i])[head[i]] < (*lists[best])[head[best]])) {
        best = i;
      }
    }
    if (best == lists.size()) break;
    merged.push_back({(*lists[best])[head[best]++], best});
    ++positions_read;
  }

  Window w;
  std::vector<std::size_t> have(lists.size(), 0);
  std::size_t satisfied = 0;
  std::size_t lo = 0;
  for (std::size_t hi = 0; hi < merged.size(); ++hi) {
    if (++have[merged[hi].term] == need[merged[hi].term]) ++satisfied;
    while (satisfied == lists.size()) {
      const std::size_t width = merged[hi].pos - merged[lo].pos;
      if (width < w.width) w = {merged[lo].pos, width};
      if (have[merged[lo].term]-- == need[merged[lo].term]) --satisfied;
      ++lo;
    }
  }
  return w;
}

inline std::string sentence_at(std::string_view text, std::size_t position) {
  std::size_t byte = 0;
  for (const Token& t : tokenize(text)) {
    if (t.index == position) {
      byte = t.start;
      break;
    }
  }
  for (const Sentence& s : split_sentences(text)) {
    if (byte >= s.start && byte < s.end) return s.text;
  }
  return std::string(text);
}

}  // namespace detail

// Documents where one distinct position per query term (any order) fits in a
// window of max - min - (k - 1) <= slop, ranked by that spread then doc id.
inline std::vector<SearchHit> search(const SlopQuery& query,
                                     const InvertedIndex& index,
                                     SearchStats* stats = nullptr) {
  if (query.terms.empty()) throw ArgumentError("empty query");
  std::map<std::string, std::size_t> counts;
  std::size_t k = 0;
  for (const auto& term : query.terms) {
    if (term.empty()) throw ArgumentError("empty query term");
    ++counts[detail::to_lower(term)];
    ++k;
  }
  std::vector<const std::vector<Posting>*> lists;
  std::vector<std::size_t> need;
  for (const auto& [term, n] : counts) {
    lists.push_back(&index.postings(term));
    need.push_back(n);
  }

  SearchStats local;
  SearchStats& st = stats ? *stats : local;
  st = {};
  std::vector<SearchHit> hits;
  std::vector<std::size_t> cursor(lists.size(), 0);
  const std::size_t shortest = static_cast<std::size_t>(std::distance(
      lists.begin(),
      std::min_element(lists.begin(), lists.end(), [](auto* a, auto* b) {
        return a->size() < b->size();
      })));
  for (const Posting& lead : *lists[shortest]) {
    std::vector<const std::vector<std::size_t>*> positions(lists.size());
    bool everywhere = true;
    for (std::size_t i = 0; i < lists.size() && everywhere; ++i) {
      const auto& list = *lists[i];
      auto it = std::lower_bound(
          list.begin() + static_cast<std::ptrdiff_t>(cursor[i]), list.end(),
          lead.doc_id,
          [](const Posting& p, const std::string& id) { return p.doc_id < id; });
      cursor[i] = static_cast<std::size_t>(it - list.begin());
      everywhere = it != list.end() && it->doc_id == lead.doc_id &&
                   it->positions.size() >= need[i];
      if (everywhere) positions[i] = &it->positions;
    }
    if (!everywhere) continue;
    ++st.candidate_docs;
    const detail::Window w = detail::min_window(positions, need, st.positions_read);
    const std::size_t spread = w.width - (k - 1);
    if (spread > query.slop) continue;
    hits.push_back({lead.doc_id,
                    detail::sentence_at(*index.text(lead.doc_id), w.first),
                    spread});
  }
  std::sort(hits.begin(), hits.end(), [](const SearchHit& a, const SearchHit& b) {
    if (a.spread != b.spread) return a.spread < b.spread;
    return a.doc_id < b.doc_id;
  });
  return hits;
}

// ---------------------------------------------------------------------------
// Persistence. Layout, all integers little-endian u64:
//   "CIDX1"
//   stopword count, then each stopword as (length, bytes)
//   document count, then each (id, text) as length-prefixed strings
//   term count, then each term string, posting count, and per posting the
//   doc id string, position count and positions.

inline constexpr std::string_view kIndexMagic = "CIDX1";

namespace detail {

class IndexWriter {
 public:
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<char>(v >> (8 * i)));
  }
  void str(std::string_view s) {
    u64(s.size());
    out_.append(s);
  }
  void raw(std::string_view s) { out_.append(s); }
  const std::string& bytes() const { return out_; }

 private:
  std::string out_;
};

class IndexReader {
 public:
  explicit IndexReader(std::string_view data) : data_(data) {}

  std::uint64_t u64() {
    need(8, "truncated integer");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i]))
           << (8 * i);
    }
    pos_ += 8;
    return v;
  }
  std::string str() {
    const std::size_t at = pos_;
    const std::uint64_t n = u64();
    if (n > data_.size() - pos_) throw FormatError("string length out of range", at);
    std::string s(data_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  // A count whose elements each occupy at least `min_bytes`.
  std::size_t count(std::size_t min_bytes) {
    const std::size_t at = pos_;
    const std::uint64_t n = u64();
    if (n > (data_.size() - pos_) / min_bytes) {
      throw FormatError("count out of range", at);
    }
    return n;
  }
  void expect(std::string_view magic) {
    need(magic.size(), "missing header");
    if (data_.substr(pos_, magic.size()) != magic) {
      throw FormatError("bad header", pos_);
    }
    pos_ += magic.size();
  }
  std::size_t offset() const { return pos_; }
  bool done() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n, const char* what) {
    if (data_.size() - pos_ < n) throw FormatError(what, pos_);
  }

  std::string_view data_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline std::string serialize_index(const InvertedIndex& index) {
  detail::IndexWriter w;
  w.raw(kIndexMagic);
  w.u64(index.stopwords().size());
  for (const auto& s : index.stopwords().words()) w.str(s);
  w.u64(index.documents().size());
  for (const auto& [id, text] : index.documents()) {
    w.str(id);
    w.str(text);
  }
  w.u64(index.all_postings().size());
  for (const auto& [term, list] : index.all_postings()) {
    w.str(term);
    w.u64(list.size());
    for (const auto& p : list) {
      w.str(p.doc_id);
      w.u64(p.positions.size());
      for (std::size_t pos : p.positions) w.u64(pos);
    }
  }
  return w.bytes();
}

inline void persist(const InvertedIndex& index, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw WriteError("cannot write " + path);
  const std::string bytes = serialize_index(index);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw WriteError("cannot write " + path);
}

inline InvertedIndex deserialize_index(std::string_view data) {
  detail::IndexReader r(data);
  r.expect(kIndexMagic);

  StopwordList stopwords;
  for (std::size_t n = r.count(8); n > 0; --n) {
    const std::size_t at = r.offset();
    const std::string word = r.str();
    try {
      stopwords.insert(word);
    } catch (const ArgumentError&) {
      throw FormatError("invalid stopword", at);
    }
  }
  InvertedIndex index(std::move(stopwords));

  std::map<std::string, std::string> docs;
  for (std::size_t n = r.count(16); n > 0; --n) {
    const std::size_t at = r.offset();
    std::string id = r.str();
    std::string text = r.str();
    if (!docs.empty() && id <= docs.rbegin()->first) {
      throw FormatError("document ids out of order", at);
    }
    docs.emplace(std::move(id), std::move(text));
  }

  std::map<std::string, std::vector<Posting>> postings;
  for (std::size_t n = r.count(16); n > 0; --n) {
    const std::size_t at = r.offset();
    std::string term = r.str();
    if (term.empty() || (!postings.empty() && term <= postings.rbegin()->first)) {
      throw FormatError("terms out of order", at);
    }
    std::vector<Posting> list;
    for (std::size_t m = r.count(16); m > 0; --m) {
      const std::size_t p_at = r.offset();
      Posting p{r.str(), {}};
      if (!docs.count(p.doc_id)) throw FormatError("unknown document", p_at);
      if (!list.empty() && p.doc_id <= list.back().doc_id) {
        throw FormatError("postings out of order", p_at);
      }
      const std::size_t count = r.count(8);
      if (count == 0) throw FormatError("empty posting", p_at);
      for (std::size_t i = 0; i < count; ++i) {
        const std::size_t pos_at = r.offset();
        const std::uint64_t pos = r.u64();
        if (!p.positions.empty() && pos <= p.positions.back()) {
          throw FormatError("positions out of order", pos_at);
        }
        p.positions.push_back(pos);
      }
      list.push_back(std::move(p));
    }
    postings.emplace(std::move(term), std::move(list));
  }
  if (!r.done()) throw FormatError("trailing bytes", r.offset());

  index.docs_ = std::move(docs);
  index.postings_ = std::move(postings);
  return index;
}

inline InvertedIndex load_index(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize_index(ss.str());
}

}  // namespace curata

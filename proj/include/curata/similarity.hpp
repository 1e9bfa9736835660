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

// String, set and vector similarity functions plus a small TF-IDF index.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "curata/detail/utf8.hpp"
#include "curata/error.hpp"
#include "curata/text.hpp"

namespace curata {

// ---------------------------------------------------------------------------
// Edit distances

inline std::size_t levenshtein(std::string_view a, std::string_view b,
                               bool allow_transposition = false) {
  const std::u32string x = detail::to_u32(a);
  const std::u32string y = detail::to_u32(b);
  const std::size_t n = x.size();
  const std::size_t m = y.size();
  // Three rolling rows; the oldest is only needed for transpositions.
  std::vector<std::size_t> prev2(m + 1), prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t cost = x[i - 1] == y[j - 1] ? 0 : 1;
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost});
      if (allow_transposition && i > 1 && j > 1 && x[i - 1] == y[j - 2] &&
          x[i - 2] == y[j - 1]) {
        cur[j] = std::min(cur[j], prev2[j - 2] + 1);
      }
    }
    std::swap(prev2, prev);
    std::swap(prev, cur);
  }
  return prev[m];
}

inline double levenshtein_similarity(std::string_view a, std::string_view b,
                                     bool allow_transposition = false) {
  const std::size_t longest =
      std::max(detail::to_u32(a).size(), detail::to_u32(b).size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein(a, b, allow_transposition)) /
                   static_cast<double>(longest);
}

inline std::size_t hamming(std::string_view a, std::string_view b) {
  const std::u32string x = detail::to_u32(a);
  const std::u32string y = detail::to_u32(b);
  if (x.size() != y.size()) {
    throw ArgumentError("hamming distance needs equal-length strings");
  }
  std::size_t d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) d += x[i] != y[i];
  return d;
}

// ---------------------------------------------------------------------------
// Jaro

inline double jaro(std::string_view a, std::string_view b) {
  std::u32string x = detail::to_u32(a);
  std::u32string y = detail::to_u32(b);
  for (char32_t& c : x) c = detail::to_lower(c);
  for (char32_t& c : y) c = detail::to_lower(c);
  if (x.empty() && y.empty()) return 1.0;
  if (x.empty() || y.empty()) return 0.0;

  const std::size_t longest = std::max(x.size(), y.size());
  const std::size_t window = longest / 2 > 0 ? longest / 2 - 1 : 0;
  std::vector<bool> x_matched(x.size()), y_matched(y.size());
  std::size_t m = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::size_t lo = i > window ? i - window : 0;
    const std::size_t hi = std::min(y.size(), i + window + 1);
    for (std::size_t j = lo; j < hi; ++j) {
      if (y_matched[j] || x[i] != y[j]) continue;
      x_matched[i] = y_matched[j] = true;
      ++m;
      break;
    }
  }
  if (m == 0) return 0.0;

  std::size_t half_transpositions = 0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!x_matched[i]) continue;
    while (!y_matched[k]) ++k;
    if (x[i] != y[k]) ++half_transpositions;
    ++k;
  }
  const double md = static_cast<double>(m);
  const double t = static_cast<double>(half_transpositions / 2);
  return (md / static_cast<double>(x.size()) +
          md / static_cast<double>(y.size()) + (md - t) / md) /
         3.0;
}

// ---------------------------------------------------------------------------
// Soundex

namespace detail {

inline char soundex_digit(char upper) {
  switch (upper) {
    case 'B': case 'F': case 'P': case 'V':
      return '1';
    case 'C': case 'G': case 'J': case 'K': case 'Q': case 'S': case 'X':
    case 'Z':
      return '2';
    case 'D': case 'T':
      return '3';
    case 'L':
      return '4';
    case 'M': case 'N':
      return '5';
    case 'R':
      return '6';
    default:
      return '0';  // vowels, H, W, Y
  }
}

}  // namespace detail

inline std::string soundex(std::string_view word) {
  std::string letters;
  for (char c : word) {
    if (detail::is_ascii_letter(static_cast<unsigned char>(c))) {
      letters += static_cast<char>(c >= 'a' ? c - ('a' - 'A') : c);
    }
  }
  if (letters.empty()) throw ArgumentError("soundex needs at least one letter");

  std::string code(1, letters[0]);
  char last = detail::soundex_digit(letters[0]);
  for (std::size_t i = 1; i < letters.size() && code.size() < 4; ++i) {
    const char c = letters[i];
    if (c == 'H' || c == 'W') continue;  // transparent: keeps `last`
    const char d = detail::soundex_digit(c);
    if (d != '0' && d != last) code += d;
    last = d;
  }
  code.resize(4, '0');
  return code;
}

namespace detail {

inline std::set<std::string> soundex_codes(std::string_view text) {
  std::set<std::string> codes;
  for (const Token& t : tokenize(text)) {
    const bool has_letter =
        std::any_of(t.surface.begin(), t.surface.end(), [](char c) {
          return is_ascii_letter(static_cast<unsigned char>(c));
        });
    if (has_letter) codes.insert(soundex(t.surface));
  }
  if (codes.empty()) throw ArgumentError("soundex needs at least one letter");
  return codes;
}

}  // namespace detail

// 1 when any token of `a` shares a Soundex code with any token of `b`.
inline int soundex_sim(std::string_view a, std::string_view b) {
  const auto x = detail::soundex_codes(a);
  const auto y = detail::soundex_codes(b);
  for (const auto& code : x) {
    if (y.count(code)) return 1;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Set measures

template <typename T>
double jaccard(const std::set<T>& a, const std::set<T>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t common = 0;
  for (const auto& x : a) common += b.count(x);
  return static_cast<double>(common) /
         static_cast<double>(a.size() + b.size() - common);
}

template <typename T>
double dice(const std::set<T>& a, const std::set<T>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t common = 0;
  for (const auto& x : a) common += b.count(x);
  return 2.0 * static_cast<double>(common) /
         static_cast<double>(a.size() + b.size());
}

inline std::set<std::u32string> qgrams(std::string_view s, int q) {
  if (q < 1) throw ArgumentError("q must be at least 1");
  const std::size_t n = static_cast<std::size_t>(q);
  const std::u32string pad(n - 1, U'#');
  const std::u32string padded = pad + detail::to_u32(s) + pad;
  std::set<std::u32string> grams;
  for (std::size_t i = 0; i + n <= padded.size(); ++i) {
    grams.insert(padded.substr(i, n));
  }
  return grams;
}

// Jaccard over q-gram sets; every string is padded with q-1 '#' per side.
inline double qgram(std::string_view a, std::string_view b, int q) {
  return jaccard(qgrams(a, q), qgrams(b, q));
}

// ---------------------------------------------------------------------------
// Numeric vectors

using NumericVector = std::vector<double>;

namespace detail {

inline void check_dimensions(const NumericVector& a, const NumericVector& b) {
  if (a.size() != b.size()) {
    throw ArgumentError("vector dimensions differ: " +
                        std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()));
  }
}

inline std::set<std::size_t> support(const NumericVector& v) {
  std::set<std::size_t> s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0) s.insert(i);
  }
  return s;
}

}  // namespace detail

inline double cosine_vec(const NumericVector& a, const NumericVector& b) {
  detail::check_dimensions(a, b);
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

inline double euclidean(const NumericVector& a, const NumericVector& b) {
  detail::check_dimensions(a, b);
  double sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum += (a[i] - b[i]) * (a[i] - b[i]);
  }
  return std::sqrt(sum);
}

inline double jaccard(const NumericVector& a, const NumericVector& b) {
  detail::check_dimensions(a, b);
  return jaccard(detail::support(a), detail::support(b));
}

inline double dice(const NumericVector& a, const NumericVector& b) {
  detail::check_dimensions(a, b);
  return dice(detail::support(a), detail::support(b));
}

struct VectorFile {
  std::vector<NumericVector> rows;
  std::string source;
};

inline NumericVector parse_vector(std::string_view line) {
  NumericVector v;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = std::min(line.find(',', pos), line.size());
    const std::string field(detail::trim(line.substr(pos, comma - pos)));
    double x = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    if (!field.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, x);
    if (field.empty() || ec != std::errc() || ptr != last || !std::isfinite(x)) {
      throw ArgumentError("not a number: '" + field + "'");
    }
    v.push_back(x);
    if (comma == line.size()) break;
    pos = comma + 1;
  }
  return v;
}

// One comma-separated vector per line; blank lines are skipped.
inline VectorFile load_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open " + path);
  VectorFile file{{}, path};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    NumericVector v;
    try {
      v = parse_vector(line);
    } catch (const ArgumentError& e) {
      throw LoadError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (!file.rows.empty() && v.size() != file.rows.front().size()) {
      throw LoadError(path + ":" + std::to_string(line_no) +
                      ": mixed vector dimensions");
    }
    file.rows.push_back(std::move(v));
  }
  if (file.rows.empty()) throw LoadError(path + ": no vectors");
  return file;
}

enum class VectorMode { kVectorVector, kVectorVectors, kVectorsAllPairs };

inline VectorMode parse_vector_mode(std::string_view name) {
  if (name == "vector_vector") return VectorMode::kVectorVector;
  if (name == "vector_vectors") return VectorMode::kVectorVectors;
  if (name == "vectors_all_pairs") return VectorMode::kVectorsAllPairs;
  throw ArgumentError("unknown vector mode: " + std::string(name));
}

struct SimilarityResult {
  std::string left;
  std::string right;
  double score = 0;
};

using VectorMetric = double (*)(const NumericVector&, const NumericVector&);

inline VectorMetric vector_metric(std::string_view name) {
  if (name == "cosine") return &cosine_vec;
  if (name == "euclidean") return &euclidean;
  if (name == "dice") {
    return static_cast<VectorMetric>(&dice);
  }
  if (name == "jaccard") {
    return static_cast<VectorMetric>(&jaccard);
  }
  throw ArgumentError("unknown vector metric: " + std::string(name));
}

inline std::string format_vector(const NumericVector& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v[i]);
    out.append(buf, res.ptr);
  }
  return out;
}

// kVectorVector compares inputs[0] with inputs[1]; kVectorVectors compares
// inputs[0] with every later input; kVectorsAllPairs compares every i < j.
inline std::vector<SimilarityResult> batch_vector(
    std::string_view metric, VectorMode mode,
    const std::vector<NumericVector>& inputs) {
  const VectorMetric fn = vector_metric(metric);
  for (std::size_t i = 1; i < inputs.size(); ++i) {
    detail::check_dimensions(inputs[0], inputs[i]);
  }
  std::vector<SimilarityResult> out;
  auto emit = [&](std::size_t i, std::size_t j) {
    out.push_back({format_vector(inputs[i]), format_vector(inputs[j]),
                   fn(inputs[i], inputs[j])});
  };
  switch (mode) {
    case VectorMode::kVectorVector:
      if (inputs.size() != 2) {
        throw ArgumentError("vector_vector needs exactly two vectors");
      }
      emit(0, 1);
      break;
    case VectorMode::kVectorVectors:
      if (inputs.empty()) throw ArgumentError("vector_vectors needs a vector");
      for (std::size_t j = 1; j < inputs.size(); ++j) emit(0, j);
      break;
    case VectorMode::kVectorsAllPairs:
      for (std::size_t i = 0; i < inputs.size(); ++i) {
        for (std::size_t j = i + 1; j < inputs.size(); ++j) emit(i, j);
      }
      break;
  }
  return out;
}

inline std::vector<SimilarityResult> batch_vector(std::string_view metric,
                                                  const NumericVector& primary,
                                                  const VectorFile& file) {
  std::vector<NumericVector> inputs{primary};
  inputs.insert(inputs.end(), file.rows.begin(), file.rows.end());
  return batch_vector(metric, VectorMode::kVectorVectors, inputs);
}

inline std::vector<SimilarityResult> batch_vector(std::string_view metric,
                                                  const VectorFile& file) {
  return batch_vector(metric, VectorMode::kVectorsAllPairs, file.rows);
}

// ---------------------------------------------------------------------------
// TF-IDF

struct ScoredDoc {
  std::string id;
  double score = 0;
};

class TfIdfIndex {
 public:
  void add(const std::string& id, std::string_view text) {
    if (docs_.count(id)) throw ArgumentError("duplicate document id: " + id);
    Entry entry;
    for (const Token& t : tokenize(text)) {
      ++entry.counts[t.surface];
      ++entry.length;
    }
    for (const auto& [term, count] : entry.counts) ++df_[term];
    docs_.emplace(id, std::move(entry));
  }

  std::size_t size() const { return docs_.size(); }
  bool empty() const { return docs_.empty(); }

  std::size_t document_frequency(std::string_view term) const {
    auto it = df_.find(detail::to_lower(term));
    return it == df_.end() ? 0 : it->second;
  }

  double idf(std::string_view term) const {
    require_docs();
    const std::size_t df = document_frequency(term);
    if (df == 0) return 0.0;
    return std::log(static_cast<double>(docs_.size()) /
                    static_cast<double>(df));
  }

  double weight(std::string_view term, const std::string& doc_id) const {
    require_docs();
    auto it = docs_.find(doc_id);
    if (it == docs_.end()) throw ArgumentError("unknown document: " + doc_id);
    const Entry& e = it->second;
    if (e.length == 0) return 0.0;
    auto c = e.counts.find(detail::to_lower(term));
    if (c == e.counts.end()) return 0.0;
    return static_cast<double>(c->second) / static_cast<double>(e.length) *
           idf(term);
  }

  // Every document scored by the summed weight of the distinct query terms.
  std::vector<ScoredDoc> search(std::string_view query) const {
    require_docs();
    std::set<std::string> terms;
    for (const Token& t : tokenize(query)) terms.insert(t.surface);
    std::vector<ScoredDoc> out;
    for (const auto& [id, entry] : docs_) {
      double score = 0;
      for (const auto& term : terms) score += weight(term, id);
      out.push_back({id, score});
    }
    rank(out);
    return out;
  }

  // Documents ranked by cosine between their tf-idf vectors and the query's.
  std::vector<ScoredDoc> cosine(std::string_view query) const {
    require_docs();
    std::map<std::string, double> q;
    std::size_t q_len = 0;
    for (const Token& t : tokenize(query)) {
      q[t.surface] += 1;
      ++q_len;
    }
    double q_norm = 0;
    for (auto& [term, w] : q) {
      w = w / static_cast<double>(q_len) * idf(term);
      q_norm += w * w;
    }
    std::vector<ScoredDoc> out;
    for (const auto& [id, entry] : docs_) {
      double dot = 0, d_norm = 0;
      for (const auto& [term, count] : entry.counts) {
        const double w = static_cast<double>(count) /
                         static_cast<double>(entry.length) * idf(term);
        d_norm += w * w;
        auto it = q.find(term);
        if (it != q.end()) dot += w * it->second;
      }
      const double score =
          q_norm == 0 || d_norm == 0 ? 0.0
                                     : dot / (std::sqrt(q_norm) * std::sqrt(d_norm));
      out.push_back({id, score});
    }
    rank(out);
    return out;
  }

 private:
  struct Entry {
    std::map<std::string, std::size_t> counts;
    std::size_t length = 0;
  };

  void require_docs() const {
    if (docs_.empty()) throw StateError("tf-idf index is empty");
  }

  static void rank(std::vector<ScoredDoc>& docs) {
    std::stable_sort(docs.begin(), docs.end(),
                     [](const ScoredDoc& a, const ScoredDoc& b) {
                       if (a.score != b.score) return a.score > b.score;
                       return a.id < b.id;
                     });
  }

  std::map<std::string, Entry> docs_;
  std::unordered_map<std::string, std::size_t> df_;
};

inline TfIdfIndex build_tfidf(const std::vector<Document>& docs) {
  TfIdfIndex index;
  for (const auto& d : docs) index.add(d.id, d.text);
  return index;
}

inline double tfidf_weight(std::string_view term, const std::string& doc_id,
                           const TfIdfIndex& index) {
  return index.weight(term, doc_id);
}

inline std::vector<ScoredDoc> tfidf_search(std::string_view query,
                                           const TfIdfIndex& index) {
  return index.search(query);
}

inline std::vector<ScoredDoc> cosine_docs(std::string_view query,
                                          const std::vector<Document>& corpus) {
  return build_tfidf(corpus).cosine(query);
}

}  // namespace curata

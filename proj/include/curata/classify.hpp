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

// ARFF datasets, Naive Bayes and k-nearest-neighbour classifiers, and
// macro-averaged evaluation.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "curata/detail/utf8.hpp"
#include "curata/error.hpp"

namespace curata {

struct ArffAttribute {
  enum class Kind { kNominal, kNumeric };

  std::string name;
  Kind kind = Kind::kNumeric;
  std::vector<std::string> values;  // nominal only

  bool nominal() const { return kind == Kind::kNominal; }
  std::optional<std::size_t> value_index(std::string_view v) const {
    auto it = std::find(values.begin(), values.end(), v);
    if (it == values.end()) return std::nullopt;
    return static_cast<std::size_t>(it - values.begin());
  }

  friend bool operator==(const ArffAttribute&, const ArffAttribute&) = default;
};

struct Missing {
  friend bool operator==(Missing, Missing) { return true; }
};

struct Nominal {
  std::size_t index = 0;
  friend bool operator==(Nominal, Nominal) = default;
};

using ArffValue = std::variant<Missing, double, Nominal>;
using ArffRow = std::vector<ArffValue>;

struct ArffDataset {
  std::string relation;
  std::vector<ArffAttribute> attributes;
  std::vector<ArffRow> rows;

  // The last attribute is the class.
  std::size_t class_index() const { return attributes.size() - 1; }
  const ArffAttribute& class_attribute() const { return attributes.back(); }

  friend bool operator==(const ArffDataset&, const ArffDataset&) = default;
};

namespace detail {

inline bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return to_lower(static_cast<char32_t>(static_cast<unsigned char>(x))) ==
                  to_lower(static_cast<char32_t>(static_cast<unsigned char>(y)));
         });
}

// Reads one name or value starting at `pos`: either a quoted string with
// backslash escapes or a bare run up to a delimiter.
inline std::string arff_token(std::string_view s, std::size_t& pos,
                              std::string_view delims, std::size_t line) {
  while (pos < s.size() && is_space(s[pos])) ++pos;
  std::string out;
  if (pos < s.size() && (s[pos] == '\'' || s[pos] == '"')) {
    const char quote = s[pos++];
    while (true) {
      if (pos >= s.size()) throw ParseError("unterminated quote", line);
      const char c = s[pos++];
      if (c == quote) break;
      if (c == '\\' && pos < s.size()) {
        out += s[pos++];
      } else {
        out += c;
      }
    }
    return out;
  }
  const std::size_t start = pos;
  while (pos < s.size() && delims.find(s[pos]) == std::string_view::npos &&
         !is_space(s[pos])) {
    ++pos;
  }
  out = std::string(s.substr(start, pos - start));
  return out;
}

inline void skip_space(std::string_view s, std::size_t& pos) {
  while (pos < s.size() && is_space(s[pos])) ++pos;
}

inline std::optional<double> parse_number(std::string_view s) {
  double x = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, x);
  if (s.empty() || ec != std::errc() || ptr != last || !std::isfinite(x)) {
    return std::nullopt;
  }
  return x;
}

inline std::string format_number(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::string quote_arff(std::string_view s) {
  const bool plain =
      !s.empty() && s != "?" && s.find_first_of(" \t,'\"%{}\\") == std::string_view::npos;
  if (plain) return std::string(s);
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  out += '\'';
  return out;
}

}  // namespace detail

inline ArffDataset parse_arff_text(std::string_view text) {
  ArffDataset ds;
  bool have_relation = false;
  bool in_data = false;
  std::set<std::string> names;
  std::size_t line_no = 0;
  std::size_t pos_line = 0;
  while (pos_line <= text.size()) {
    std::size_t eol = text.find('\n', pos_line);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view raw = text.substr(pos_line, eol - pos_line);
    pos_line = eol + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    const std::string_view line = detail::trim(raw);
    if (line.empty() || line[0] == '%') continue;

    if (!in_data && line[0] == '@') {
      std::size_t pos = 1;
      while (pos < line.size() && !detail::is_space(line[pos])) ++pos;
      const std::string_view keyword = line.substr(1, pos - 1);
      if (detail::iequals(keyword, "relation")) {
        if (have_relation) throw ParseError("duplicate @RELATION", line_no);
        ds.relation = detail::arff_token(line, pos, "", line_no);
        have_relation = true;
      } else if (detail::iequals(keyword, "attribute")) {
        if (!have_relation) throw ParseError("@ATTRIBUTE before @RELATION", line_no);
        ArffAttribute attr;
        attr.name = detail::arff_token(line, pos, "{", line_no);
        if (attr.name.empty()) throw ParseError("missing attribute name", line_no);
        if (!names.insert(attr.name).second) {
          throw ParseError("duplicate attribute " + attr.name, line_no);
        }
        detail::skip_space(line, pos);
        if (pos < line.size() && line[pos] == '{') {
          attr.kind = ArffAttribute::Kind::kNominal;
          ++pos;
          while (true) {
            std::string v = detail::arff_token(line, pos, ",}", line_no);
            detail::skip_space(line, pos);
            if (v.empty()) throw ParseError("empty nominal value", line_no);
            if (attr.value_index(v)) {
              throw ParseError("duplicate nominal value " + v, line_no);
            }
            attr.values.push_back(std::move(v));
            if (pos >= line.size()) throw ParseError("unterminated value list", line_no);
            if (line[pos++] == '}') break;
          }
          detail::skip_space(line, pos);
          if (pos != line.size()) throw ParseError("text after value list", line_no);
        } else {
          const std::string type(detail::trim(line.substr(pos)));
          if (!detail::iequals(type, "numeric") && !detail::iequals(type, "real") &&
              !detail::iequals(type, "integer")) {
            throw ParseError("unsupported attribute type '" + type + "'", line_no);
          }
        }
        ds.attributes.push_back(std::move(attr));
      } else if (detail::iequals(keyword, "data")) {
        if (ds.attributes.empty()) throw ParseError("@DATA without attributes", line_no);
        in_data = true;
      } else {
        throw ParseError("unknown declaration @" + std::string(keyword), line_no);
      }
      continue;
    }
    if (!in_data) throw ParseError("data before @DATA", line_no);
    if (line[0] == '{') throw ParseError("sparse rows are not supported", line_no);

    ArffRow row;
    std::size_t pos = 0;
    while (true) {
      detail::skip_space(line, pos);
      const bool quoted = pos < line.size() && (line[pos] == '\'' || line[pos] == '"');
      const std::string v = detail::arff_token(line, pos, ",", line_no);
      detail::skip_space(line, pos);
      const std::size_t col = row.size();
      if (col >= ds.attributes.size()) {
        throw ParseError("row has more than " +
                             std::to_string(ds.attributes.size()) + " values",
                         line_no);
      }
      const ArffAttribute& attr = ds.attributes[col];
      if (v == "?" && !quoted) {
        if (col != ds.class_index()) {
          throw ParseError("missing value outside the class column", line_no);
        }
        row.emplace_back(Missing{});
      } else if (attr.nominal()) {
        const auto idx = attr.value_index(v);
        if (!idx) {
          throw ParseError("undeclared value '" + v + "' for " + attr.name, line_no);
        }
        row.emplace_back(Nominal{*idx});
      } else {
        const auto x = detail::parse_number(v);
        if (!x) throw ParseError("not a number: '" + v + "'", line_no);
        row.emplace_back(*x);
      }
      if (pos >= line.size()) break;
      if (line[pos] != ',') throw ParseError("expected ','", line_no);
      ++pos;
    }
    if (row.size() != ds.attributes.size()) {
      throw ParseError("row has " + std::to_string(row.size()) + " values, expected " +
                           std::to_string(ds.attributes.size()),
                       line_no);
    }
    ds.rows.push_back(std::move(row));
  }
  if (!have_relation) throw ParseError("missing @RELATION", line_no);
  if (!in_data) throw ParseError("missing @DATA", line_no);
  return ds;
}

inline ArffDataset parse_arff(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_arff_text(ss.str());
}

inline std::string format_value(const ArffAttribute& attr, const ArffValue& v) {
  if (std::holds_alternative<Missing>(v)) return "?";
  if (const auto* n = std::get_if<Nominal>(&v)) return attr.values.at(n->index);
  return detail::format_number(std::get<double>(v));
}

inline std::string write_arff_text(const ArffDataset& ds) {
  std::string out = "@RELATION " + detail::quote_arff(ds.relation) + "\n\n";
  for (const auto& a : ds.attributes) {
    out += "@ATTRIBUTE " + detail::quote_arff(a.name) + " ";
    if (a.nominal()) {
      out += "{";
      for (std::size_t i = 0; i < a.values.size(); ++i) {
        if (i) out += ",";
        out += detail::quote_arff(a.values[i]);
      }
      out += "}\n";
    } else {
      out += "NUMERIC\n";
    }
  }
  out += "\n@DATA\n";
  for (const auto& row : ds.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      const std::string v = format_value(ds.attributes[i], row[i]);
      out += std::holds_alternative<Nominal>(row[i]) ? detail::quote_arff(v) : v;
    }
    out += "\n";
  }
  return out;
}

inline void write_arff(const ArffDataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw WriteError("cannot write " + path);
  out << write_arff_text(ds);
  if (!out) throw WriteError("cannot write " + path);
}

struct Prediction {
  std::size_t index = 0;
  std::string label;
  double confidence = 0;

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

namespace detail {

inline void check_classifiable(const ArffDataset& ds) {
  if (ds.attributes.empty() || !ds.class_attribute().nominal()) {
    throw ArgumentError("the last attribute must be nominal");
  }
}

inline void check_same_schema(const ArffDataset& train, const ArffDataset& test) {
  if (train.attributes != test.attributes) {
    throw ArgumentError("training and test attributes differ");
  }
}

inline std::size_t class_of(const ArffRow& row, std::size_t class_index) {
  const auto* c = std::get_if<Nominal>(&row[class_index]);
  if (!c) throw ArgumentError("training row without a class label");
  return c->index;
}

}  // namespace detail

class NaiveBayes {
 public:
  static constexpr double kVarianceFloor = 1e-9;

  explicit NaiveBayes(const ArffDataset& train) : attributes_(train.attributes) {
    detail::check_classifiable(train);
    if (train.rows.empty()) throw StateError("empty training set");
    const std::size_t classes = train.class_attribute().values.size();
    const std::size_t ci = train.class_index();
    class_counts_.assign(classes, 0);
    stats_.assign(ci, std::vector<AttrStats>(classes));
    for (std::size_t a = 0; a < ci; ++a) {
      for (auto& s : stats_[a]) s.counts.assign(attributes_[a].values.size(), 0);
    }
    for (const auto& row : train.rows) {
      const std::size_t c = detail::class_of(row, ci);
      ++class_counts_[c];
      for (std::size_t a = 0; a < ci; ++a) {
        AttrStats& s = stats_[a][c];
        if (const auto* n = std::get_if<Nominal>(&row[a])) {
          ++s.counts[n->index];
        } else {
          s.sum += std::get<double>(row[a]);
        }
      }
    }
    for (std::size_t a = 0; a < ci; ++a) {
      if (attributes_[a].nominal()) continue;
      for (std::size_t c = 0; c < classes; ++c) {
        AttrStats& s = stats_[a][c];
        if (class_counts_[c] == 0) continue;
        s.mean = s.sum / static_cast<double>(class_counts_[c]);
      }
    }
    for (const auto& row : train.rows) {
      const std::size_t c = detail::class_of(row, ci);
      for (std::size_t a = 0; a < ci; ++a) {
        if (attributes_[a].nominal()) continue;
        const double d = std::get<double>(row[a]) - stats_[a][c].mean;
        stats_[a][c].variance += d * d;
      }
    }
    for (std::size_t a = 0; a < ci; ++a) {
      if (attributes_[a].nominal()) continue;
      for (std::size_t c = 0; c < classes; ++c) {
        AttrStats& s = stats_[a][c];
        if (class_counts_[c] > 0) s.variance /= static_cast<double>(class_counts_[c]);
        s.variance = std::max(s.variance, kVarianceFloor);
      }
    }
    total_ = train.rows.size();
  }

  // Unnormalized log posterior per class, in declaration order.
  std::vector<double> log_scores(const ArffRow& row) const {
    const std::size_t classes = class_counts_.size();
    const std::size_t ci = attributes_.size() - 1;
    std::vector<double> out(classes);
    for (std::size_t c = 0; c < classes; ++c) {
      if (class_counts_[c] == 0) {
        out[c] = -std::numeric_limits<double>::infinity();
        continue;
      }
      const double n_c = static_cast<double>(class_counts_[c]);
      double score = std::log(n_c / static_cast<double>(total_));
      for (std::size_t a = 0; a < ci; ++a) {
        const AttrStats& s = stats_[a][c];
        if (const auto* v = std::get_if<Nominal>(&row[a])) {
          score += std::log((static_cast<double>(s.counts[v->index]) + 1.0) /
                            (n_c + static_cast<double>(s.counts.size())));
        } else if (const auto* x = std::get_if<double>(&row[a])) {
          const double d = *x - s.mean;
          score += -0.5 * std::log(2.0 * std::numbers::pi * s.variance) -
                   d * d / (2.0 * s.variance);
        }
      }
      out[c] = score;
    }
    return out;
  }

  std::vector<double> posterior(const ArffRow& row) const {
    std::vector<double> logs = log_scores(row);
    const double top = *std::max_element(logs.begin(), logs.end());
    double sum = 0;
    for (double& l : logs) {
      l = std::exp(l - top);
      sum += l;
    }
    for (double& l : logs) l /= sum;
    return logs;
  }

  std::vector<Prediction> predict(const ArffDataset& test) const {
    if (test.attributes != attributes_) {
      throw ArgumentError("training and test attributes differ");
    }
    std::vector<Prediction> out;
    for (std::size_t i = 0; i < test.rows.size(); ++i) {
      const auto logs = log_scores(test.rows[i]);
      std::size_t best = 0;
      for (std::size_t c = 1; c < logs.size(); ++c) {
        if (logs[c] > logs[best]) best = c;
      }
      out.push_back({i, attributes_.back().values[best],
                     posterior(test.rows[i])[best]});
    }
    return out;
  }

 private:
  struct AttrStats {
    std::vector<std::size_t> counts;  // nominal
    double sum = 0, mean = 0, variance = 0;  // numeric
  };

  std::vector<ArffAttribute> attributes_;
  std::vector<std::size_t> class_counts_;
  std::vector<std::vector<AttrStats>> stats_;  // [attribute][class]
  std::size_t total_ = 0;
};

inline NaiveBayes train_nb(const ArffDataset& train) { return NaiveBayes(train); }

inline std::vector<Prediction> predict_nb(const NaiveBayes& model,
                                          const ArffDataset& test) {
  return model.predict(test);
}

inline double instance_distance(const ArffDataset& schema, const ArffRow& a,
                                const ArffRow& b) {
  double sum = 0;
  for (std::size_t i = 0; i < schema.class_index(); ++i) {
    if (schema.attributes[i].nominal()) {
      sum += std::get<Nominal>(a[i]).index == std::get<Nominal>(b[i]).index ? 0 : 1;
    } else {
      const double d = std::get<double>(a[i]) - std::get<double>(b[i]);
      sum += d * d;
    }
  }
  return std::sqrt(sum);
}

inline std::vector<Prediction> knn_predict(const ArffDataset& train,
                                           const ArffDataset& test,
                                           std::size_t k) {
  detail::check_classifiable(train);
  detail::check_same_schema(train, test);
  if (k < 1 || k > train.rows.size()) {
    throw ArgumentError("k must be between 1 and the training size");
  }
  const std::size_t ci = train.class_index();
  std::vector<std::size_t> labels;
  for (const auto& row : train.rows) labels.push_back(detail::class_of(row, ci));

  std::vector<Prediction> out;
  std::vector<std::pair<double, std::size_t>> dist(train.rows.size());
  for (std::size_t t = 0; t < test.rows.size(); ++t) {
    for (std::size_t i = 0; i < train.rows.size(); ++i) {
      dist[i] = {instance_distance(train, test.rows[t], train.rows[i]), i};
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k),
                      dist.end());
    std::vector<std::size_t> votes(train.class_attribute().values.size(), 0);
    for (std::size_t j = 0; j < k; ++j) ++votes[labels[dist[j].second]];
    const std::size_t best = static_cast<std::size_t>(
        std::max_element(votes.begin(), votes.end()) - votes.begin());
    out.push_back({t, train.class_attribute().values[best],
                   static_cast<double>(votes[best]) / static_cast<double>(k)});
  }
  return out;
}

struct ClassCounts {
  std::size_t tp = 0, fp = 0, fn = 0;
  friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

struct EvalReport {
  double accuracy = 0;
  double precision = 0;  // macro
  double recall = 0;     // macro
  std::map<std::string, ClassCounts> classes;

  std::optional<double> precision_of(const std::string& label) const {
    auto it = classes.find(label);
    if (it == classes.end() || it->second.tp + it->second.fp == 0) return std::nullopt;
    return static_cast<double>(it->second.tp) /
           static_cast<double>(it->second.tp + it->second.fp);
  }
  std::optional<double> recall_of(const std::string& label) const {
    auto it = classes.find(label);
    if (it == classes.end() || it->second.tp + it->second.fn == 0) return std::nullopt;
    return static_cast<double>(it->second.tp) /
           static_cast<double>(it->second.tp + it->second.fn);
  }

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

inline EvalReport evaluate(const std::vector<std::string>& predicted,
                           const std::vector<std::string>& actual) {
  if (predicted.size() != actual.size()) {
    throw ArgumentError("predicted and actual label counts differ");
  }
  if (predicted.empty()) throw ArgumentError("no labels to evaluate");
  EvalReport r;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] == actual[i]) {
      ++correct;
      ++r.classes[actual[i]].tp;
    } else {
      ++r.classes[predicted[i]].fp;
      ++r.classes[actual[i]].fn;
    }
  }
  r.accuracy = static_cast<double>(correct) / static_cast<double>(predicted.size());
  double p_sum = 0, r_sum = 0;
  std::size_t p_n = 0, r_n = 0;
  for (const auto& [label, counts] : r.classes) {
    if (auto p = r.precision_of(label)) {
      p_sum += *p;
      ++p_n;
    }
    if (auto rc = r.recall_of(label)) {
      r_sum += *rc;
      ++r_n;
    }
  }
  r.precision = p_n ? p_sum / static_cast<double>(p_n) : 0.0;
  r.recall = r_n ? r_sum / static_cast<double>(r_n) : 0.0;
  return r;
}

}  // namespace curata

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

// Brute-force reference implementations the test suites compare against.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "curata/classify.hpp"
#include "curata/text.hpp"

namespace curata::testing {

struct OracleHit {
  std::string doc_id;
  std::size_t spread = 0;

  friend bool operator==(const OracleHit&, const OracleHit&) = default;
};

// Minimal spread over every injective assignment of positions to query terms.
inline std::optional<std::size_t> brute_force_spread(
    const std::vector<Token>& tokens, const std::vector<std::string>& query) {
  std::vector<std::vector<std::size_t>> choices;
  for (const auto& term : query) {
    std::vector<std::size_t> pos;
    for (const auto& t : tokens) {
      if (t.surface == term) pos.push_back(t.index);
    }
    choices.push_back(pos);
  }
  std::optional<std::size_t> best;
  std::vector<std::size_t> picked;
  auto recurse = [&](auto&& self, std::size_t i) -> void {
    if (i == choices.size()) {
      const auto [lo, hi] = std::minmax_element(picked.begin(), picked.end());
      const std::size_t spread = *hi - *lo - (picked.size() - 1);
      if (!best || spread < *best) best = spread;
      return;
    }
    for (std::size_t p : choices[i]) {
      if (std::find(picked.begin(), picked.end(), p) != picked.end()) continue;
      picked.push_back(p);
      self(self, i + 1);
      picked.pop_back();
    }
  };
  recurse(recurse, 0);
  return best;
}

inline std::vector<OracleHit> brute_force_search(
    const std::vector<Document>& docs, const std::vector<std::string>& query,
    std::size_t slop, const StopwordList& stopwords) {
  std::vector<OracleHit> hits;
  for (const auto& d : docs) {
    const auto spread = brute_force_spread(tokenize(d.text, stopwords), query);
    if (spread && *spread <= slop) hits.push_back({d.id, *spread});
  }
  std::sort(hits.begin(), hits.end(), [](const OracleHit& a, const OracleHit& b) {
    return a.spread != b.spread ? a.spread < b.spread : a.doc_id < b.doc_id;
  });
  return hits;
}

struct RandomCorpus {
  std::vector<Document> docs;
  std::vector<std::string> query;
  std::size_t slop = 0;
};

inline RandomCorpus random_corpus(std::mt19937& rng) {
  static const std::vector<std::string> kVocab = {
      "mental", "health", "care", "the", "of", "patients", "Health", "data"};
  std::uniform_int_distribution<std::size_t> ndocs(0, 50), ntok(0, 30),
      word(0, kVocab.size() - 1), nterms(1, 3), slop(0, 3), punct(0, 9);
  RandomCorpus c;
  std::vector<int> ids(50);
  for (int i = 0; i < 50; ++i) ids[i] = i;
  std::shuffle(ids.begin(), ids.end(), rng);
  const std::size_t n = ndocs(rng);
  for (std::size_t i = 0; i < n; ++i) {
    std::string text;
    for (std::size_t t = ntok(rng); t > 0; --t) {
      text += kVocab[word(rng)];
      text += punct(rng) == 0 ? ". " : " ";
    }
    c.docs.push_back({"doc" + std::to_string(ids[i]), text, std::nullopt});
  }
  for (std::size_t t = nterms(rng); t > 0; --t) {
    std::string w = kVocab[word(rng)];
    if (punct(rng) == 0) w = "absent";
    c.query.push_back(detail::to_lower(w));
  }
  c.slop = slop(rng);
  return c;
}

// Nearest neighbours by sorting every training row by (distance, row).
inline std::vector<std::string> brute_force_knn(const ArffDataset& train,
                                                const ArffDataset& test,
                                                std::size_t k) {
  std::vector<std::string> out;
  const std::size_t ci = train.class_index();
  for (const auto& t : test.rows) {
    std::vector<std::pair<double, std::size_t>> all;
    for (std::size_t i = 0; i < train.rows.size(); ++i) {
      double sq = 0;
      for (std::size_t a = 0; a < ci; ++a) {
        if (const auto* x = std::get_if<double>(&t[a])) {
          const double d = *x - std::get<double>(train.rows[i][a]);
          sq += d * d;
        } else if (!(std::get<Nominal>(t[a]) ==
                     std::get<Nominal>(train.rows[i][a]))) {
          sq += 1;
        }
      }
      all.emplace_back(std::sqrt(sq), i);
    }
    std::sort(all.begin(), all.end());
    std::map<std::size_t, std::size_t> votes;
    for (std::size_t j = 0; j < k; ++j) {
      ++votes[std::get<Nominal>(train.rows[all[j].second][ci]).index];
    }
    std::size_t best = 0, best_votes = 0;
    for (const auto& [cls, n] : votes) {
      if (n > best_votes) {
        best = cls;
        best_votes = n;
      }
    }
    out.push_back(train.class_attribute().values[best]);
  }
  return out;
}

struct RandomSplit {
  ArffDataset train;
  ArffDataset test;
  std::size_t k = 1;
};

// Small datasets with integer-valued features so distance ties are common.
inline RandomSplit random_split(std::mt19937& rng) {
  std::uniform_int_distribution<int> n_numeric(0, 3), n_class(2, 3),
      value(0, 3), n_train(1, 12), n_test(1, 5), coin(0, 1);
  ArffDataset ds;
  ds.relation = "random";
  const int numeric = n_numeric(rng);
  for (int i = 0; i < numeric; ++i) {
    ds.attributes.push_back({"x" + std::to_string(i),
                             ArffAttribute::Kind::kNumeric, {}});
  }
  if (numeric == 0 || coin(rng)) {
    ds.attributes.push_back({"color", ArffAttribute::Kind::kNominal,
                             {"red", "green", "blue"}});
  }
  ArffAttribute cls{"class", ArffAttribute::Kind::kNominal, {}};
  for (int c = n_class(rng); c > 0; --c) cls.values.push_back("c" + std::to_string(c));
  ds.attributes.push_back(cls);

  auto make_row = [&](bool labelled) {
    ArffRow row;
    for (std::size_t a = 0; a + 1 < ds.attributes.size(); ++a) {
      if (ds.attributes[a].nominal()) {
        row.emplace_back(Nominal{static_cast<std::size_t>(value(rng) % 3)});
      } else {
        row.emplace_back(static_cast<double>(value(rng)));
      }
    }
    if (labelled) {
      std::uniform_int_distribution<std::size_t> c(0, cls.values.size() - 1);
      row.emplace_back(Nominal{c(rng)});
    } else {
      row.emplace_back(Missing{});
    }
    return row;
  };
  RandomSplit split{ds, ds, 1};
  for (int i = n_train(rng); i > 0; --i) split.train.rows.push_back(make_row(true));
  for (int i = n_test(rng); i > 0; --i) split.test.rows.push_back(make_row(false));
  std::uniform_int_distribution<std::size_t> k(1, split.train.rows.size());
  split.k = k(rng);
  return split;
}

// Breadth-first search over single-character edits; every string reachable
// within the length bound is visited, so the result is the true edit distance.
inline std::unordered_map<std::string, std::size_t> edit_distances_from(
    const std::string& source, std::string_view alphabet, std::size_t max_len) {
  std::unordered_map<std::string, std::size_t> dist{{source, 0}};
  std::deque<std::string> queue{source};
  while (!queue.empty()) {
    const std::string s = queue.front();
    queue.pop_front();
    const std::size_t d = dist[s];
    std::vector<std::string> next;
    for (std::size_t i = 0; i < s.size(); ++i) {
      next.push_back(s.substr(0, i) + s.substr(i + 1));
      for (char c : alphabet) {
        if (c != s[i]) {
          std::string t = s;
          t[i] = c;
          next.push_back(t);
        }
      }
    }
    if (s.size() < max_len) {
      for (std::size_t i = 0; i <= s.size(); ++i) {
        for (char c : alphabet) {
          next.push_back(s.substr(0, i) + c + s.substr(i));
        }
      }
    }
    for (auto& t : next) {
      if (dist.emplace(t, d + 1).second) queue.push_back(std::move(t));
    }
  }
  return dist;
}

inline std::vector<std::string> all_strings(std::string_view alphabet,
                                     std::size_t max_len) {
  std::vector<std::string> out{""};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].size() == max_len) continue;
    for (char c : alphabet) out.push_back(out[i] + c);
  }
  return out;
}

}  // namespace curata::testing

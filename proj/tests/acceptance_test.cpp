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

// Acceptance gate: one PASS/FAIL line per criterion, each under its time limit.

#include <sys/wait.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "curata/classify.hpp"
#include "curata/index.hpp"
#include "curata/lexical.hpp"
#include "curata/linking.hpp"
#include "curata/ner.hpp"
#include "curata/pipeline.hpp"
#include "curata/similarity.hpp"
#include "curata/xml.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace curata {
namespace {

using testing::fixture;
using testing::read_file;
using testing::resource;
using testing::TempDir;

// Collects the first few failed checks of one criterion.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures_.size() < 5) failures_.push_back(what);
    ++count_;
  }
  bool ok() const { return count_ == 0; }
  std::string summary() const {
    std::string out = std::to_string(count_) + " failed check(s)";
    for (const auto& f : failures_) out += "; " + f;
    return out;
  }

 private:
  std::vector<std::string> failures_;
  std::size_t count_ = 0;
};

std::string show(double x) { return detail::format_double(x); }

const Gazetteer& gazetteer() {
  static const Gazetteer gaz = load_gazetteer(resource("data.txt"));
  return gaz;
}

void obama_sentence(Checker& c) {
  const auto got = extract_entities(
      "Obama was born on August 4, 1961, at Gynecological Hospital in Honolulu", gazetteer());
  const std::vector<NamedEntity> want = {
      {"Obama", EntityType::kPerson, 0, 5},
      {"August 4, 1961", EntityType::kDate, 18, 32},
      {"Gynecological Hospital", EntityType::kOrganization, 37, 59},
      {"Honolulu", EntityType::kCity, 63, 71},
  };
  c.expect(got == want, "spans differ from the annotated sentence");
}

void gazetteer_table(Checker& c) {
  std::vector<std::pair<std::string, std::string>> rows = {
      {"Paris", "CITY"},        {"Asia", "continent"},     {"USA", "COUNTRY"},
      {"Acarbose", "DRUG"},     {"Asus", "COMPANY"},       {"Larceny", "Crime"},
      {"Archery", "Sport"},     {"Christmas", "holiday"},  {"Flood", "disaster"},
      {"Ubuntu", "os"},         {"Asian Cup", "sportev"},  {"New South Wales", "State"},
  };
  // One more row for every other type in the shipped table.
  std::set<EntityType> seen;
  for (const auto& [surface, label] : rows) seen.insert(*parse_entity_type(label));
  std::istringstream in(read_file(resource("data.txt")));
  std::string line;
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    const auto type = parse_entity_type(line.substr(tab + 1));
    if (type && seen.insert(*type).second) {
      rows.emplace_back(line.substr(0, tab), line.substr(tab + 1));
    }
  }
  for (const auto& [surface, label] : rows) {
    const EntityType type = *parse_entity_type(label);
    const std::string text = "we talked about " + surface + " over lunch";
    const auto got = extract_entities(text, gazetteer());
    const std::vector<NamedEntity> want = {{surface, type, 16, 16 + surface.size()}};
    c.expect(got == want, surface + " " + label);
  }
}

void similarity_axioms(Checker& c) {
  std::mt19937 rng(3);
  const auto near = [](double a, double b) { return std::fabs(a - b) <= 1e-9; };
  const std::string alphabet = "abcdeAB ";
  using StringMetric = std::function<double(const std::string&, const std::string&)>;
  const std::vector<std::pair<std::string, StringMetric>> bounded = {
      {"levenshtein_norm", [](auto& a, auto& b) { return levenshtein_similarity(a, b); }},
      {"jaro", [](auto& a, auto& b) { return jaro(a, b); }},
      {"qgram", [](auto& a, auto& b) { return qgram(a, b, 2); }},
      {"jaccard", [](auto& a, auto& b) {
         return jaccard(std::set<char>(a.begin(), a.end()), std::set<char>(b.begin(), b.end()));
       }},
      {"dice", [](auto& a, auto& b) {
         return dice(std::set<char>(a.begin(), a.end()), std::set<char>(b.begin(), b.end()));
       }},
  };
  for (const auto& [name, m] : bounded) {
    for (int i = 0; i < 1000; ++i) {
      const std::string a = testing::random_string(rng, alphabet, 9);
      const std::string b = testing::random_string(rng, alphabet, 9);
      const double ab = m(a, b);
      c.expect(near(ab, m(b, a)), name + " symmetry");
      c.expect(ab >= 0.0 && ab <= 1.0, name + " bounds");
      c.expect(near(m(a, a), 1.0), name + " identity");
    }
  }
  for (int i = 0; i < 1000; ++i) {
    const std::string a = testing::random_string(rng, "abcd", 9);
    const std::string b = testing::random_string(rng, "abcd", 9);
    c.expect(levenshtein(a, b) == levenshtein(b, a), "levenshtein symmetry");
    c.expect(levenshtein(a, a) == 0, "levenshtein identity");
    std::string same_len = b;
    same_len.resize(a.size(), 'a');
    c.expect(hamming(a, same_len) == hamming(same_len, a), "hamming symmetry");
    c.expect(hamming(a, a) == 0, "hamming identity");
    const std::string wa = "x" + a, wb = "x" + b;
    const int s = soundex_sim(wa, wb);
    c.expect(s == soundex_sim(wb, wa), "soundex symmetry");
    c.expect(soundex_sim(wa, wa) == 1, "soundex identity");
  }
  std::uniform_real_distribution<double> val(-5, 5), scale(0.1, 10);
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  for (int i = 0; i < 1000; ++i) {
    NumericVector a(dim(rng)), b(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      a[k] = val(rng);
      b[k] = val(rng);
    }
    const double cab = cosine_vec(a, b);
    c.expect(near(cab, cosine_vec(b, a)), "cosine symmetry");
    c.expect(cab >= -1 - 1e-12 && cab <= 1 + 1e-12, "cosine bounds");
    c.expect(near(cosine_vec(a, a), 1.0), "cosine identity");
    NumericVector scaled = a;
    const double alpha = scale(rng);
    for (double& x : scaled) x *= alpha;
    c.expect(near(cosine_vec(scaled, b), cab), "cosine scale invariance");
    c.expect(near(euclidean(a, b), euclidean(b, a)), "euclidean symmetry");
    c.expect(euclidean(a, a) == 0.0, "euclidean identity");
  }
  const auto strings = testing::all_strings("abc", 6);
  for (const auto& a : strings) {
    const auto dist = testing::edit_distances_from(a, "abc", 6);
    for (const auto& b : strings) {
      if (levenshtein(a, b) != dist.at(b)) c.expect(false, "levenshtein " + a + "/" + b);
    }
  }
  const double martha = jaro("MARTHA", "MARHTA");
  c.expect(std::fabs(martha - 0.9444) <= 1e-4, "jaro MARTHA = " + show(martha));
  c.expect(soundex_sim("M. Turnbull", "Malcolm Turnbull") == 1, "soundex M. Turnbull");
}

void stem_fidelity(Checker& c) {
  c.expect(stem("friendships") == "friend", "friendships -> " + stem("friendships"));
  std::istringstream in(read_file(fixture("stem_words.txt")));
  std::string w;
  std::size_t n = 0;
  while (in >> w) {
    const std::string s = stem(w);
    c.expect(stem(s) == s, w + " -> " + s + " -> " + stem(s));
    ++n;
  }
  c.expect(n == 1000, "fixture has " + std::to_string(n) + " words");
}

void synonym_fidelity(Checker& c) {
  const auto lex = load_synsets(resource("synsets.tsv"));
  const auto syns = synonyms("begin", lex);
  const std::set<std::string> got(syns.begin(), syns.end());
  c.expect(got.count("start") == 1, "start missing");
  c.expect(got.count("commence") == 1, "commence missing");
}

void index_oracle(Checker& c) {
  std::mt19937 rng(606);
  for (int round = 0; round < 100; ++round) {
    const auto corpus = testing::random_corpus(rng);
    const auto index = build_index(corpus.docs);
    const auto hits = search({corpus.query, corpus.slop}, index);
    const auto want = testing::brute_force_search(corpus.docs, corpus.query, corpus.slop,
                                                   english_stopwords());
    std::vector<testing::OracleHit> got;
    for (const auto& h : hits) got.push_back({h.doc_id, h.spread});
    c.expect(got == want, "round " + std::to_string(round));
    std::set<std::string> previous;
    for (std::size_t slop = 0; slop <= 3; ++slop) {
      std::set<std::string> current;
      for (const auto& h : search({corpus.query, slop}, index)) current.insert(h.doc_id);
      for (const auto& id : previous) {
        c.expect(current.count(id) == 1, "slop monotonicity round " + std::to_string(round));
      }
      previous = std::move(current);
    }
  }
}

void classifier_oracles(Checker& c) {
  const auto train = parse_arff_text(
      "@relation weather\n@attribute outlook {sunny,rainy}\n@attribute play {yes,no}\n"
      "@data\nsunny,yes\nsunny,yes\nrainy,no\nrainy,no\nsunny,no\n");
  const ArffRow sunny{Nominal{0}, Missing{}};
  const auto logs = train_nb(train).log_scores(sunny);
  c.expect(std::fabs(logs[0] - std::log(0.30)) <= 1e-9, "log score yes " + show(logs[0]));
  c.expect(std::fabs(logs[1] - std::log(0.24)) <= 1e-9, "log score no " + show(logs[1]));
  auto test = train;
  test.rows = {sunny};
  c.expect(predict_nb(train_nb(train), test).at(0).label == "yes", "sunny not yes");

  std::mt19937 rng(200);
  for (int round = 0; round < 200; ++round) {
    const auto split = testing::random_split(rng);
    std::vector<std::string> got;
    for (const auto& p : knn_predict(split.train, split.test, split.k)) got.push_back(p.label);
    c.expect(got == testing::brute_force_knn(split.train, split.test, split.k),
             "knn round " + std::to_string(round));
  }

  const auto r = evaluate({"A", "A", "B", "B"}, {"A", "B", "B", "B"});
  c.expect(std::fabs(r.accuracy - 0.75) <= 1e-12, "accuracy " + show(r.accuracy));
  c.expect(std::fabs(r.precision - 0.75) <= 1e-12, "macro precision " + show(r.precision));
}

void round_trips(Checker& c) {
  for (const char* name : {"arff/weather.arff", "arff/weather_test.arff", "arff/tweets.arff"}) {
    const auto ds = parse_arff(fixture(name));
    const std::string text = write_arff_text(ds);
    const auto again = parse_arff_text(text);
    c.expect(again.relation == ds.relation && again.attributes == ds.attributes &&
                 again.rows == ds.rows,
             std::string(name) + " parse/write");
    c.expect(write_arff_text(again) == text, std::string(name) + " write/parse/write");
  }
  TempDir dir;
  std::mt19937 rng(88);
  for (int round = 0; round < 50; ++round) {
    const auto corpus = testing::random_corpus(rng);
    const auto index = build_index(corpus.docs);
    const std::string path = dir.file("idx" + std::to_string(round));
    persist(index, path);
    const auto loaded = load_index(path);
    c.expect(loaded == index, "index round " + std::to_string(round));
    for (std::size_t slop = 0; slop <= 3; ++slop) {
      c.expect(search({corpus.query, slop}, loaded) == search({corpus.query, slop}, index),
               "search after load, round " + std::to_string(round));
    }
  }
}

void offline_linking(Checker& c) {
  std::atomic<int> calls{0};
  KbClientConfig cfg;
  cfg.fixture_dir = resource("kb");
  cfg.transport = [&calls](const std::string&) -> HttpResponse {
    ++calls;
    throw FetchError("network use in offline mode", 0);
  };
  const auto candidates = lookup_wikidata("M. Turnbull", cfg);
  c.expect(candidates.has_value() && !candidates->empty(), "no fixture candidates");
  if (candidates) {
    const auto links = link_entity("M. Turnbull", *candidates, "jaro", 0.7);
    bool kept = false;
    for (const auto& l : links) kept = kept || l.entity.label == "Malcolm Turnbull";
    c.expect(kept, "Malcolm Turnbull not retained");
  }
  c.expect(calls.load() == 0, std::to_string(calls.load()) + " network call(s)");
}

int run_cli(const std::vector<std::string>& args, const std::string& out_path) {
  std::string cmd = "'" + std::string(CURATA_CLI) + "'";
  for (const auto& a : args) cmd += " '" + a + "'";
  cmd += " > '" + out_path + "' 2>/dev/null";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

void end_to_end(Checker& c) {
  TempDir dir;
  std::vector<std::string> outputs;
  for (const char* run : {"a", "b"}) {
    const std::string xml = dir.file(std::string(run) + ".xml");
    const int status = run_cli({"pipeline", "--in", fixture("tweets.jsonl"), "--offline-kb",
                                resource("kb"), "--html-fixtures", fixture("pages"), "--out",
                                xml, "--json-out", dir.file(std::string(run) + ".json")},
                               dir.file("log"));
    c.expect(status == 0, std::string("pipeline run ") + run + " exit " + std::to_string(status));
    outputs.push_back(read_file(xml));
  }
  c.expect(!outputs[0].empty() && outputs[0] == outputs[1], "result.xml differs across runs");
  const XmlElement doc = parse_xml(outputs[0]);
  const auto errors = validate(doc, parse_schema(read_file(resource("result.xsd"))));
  c.expect(errors.empty(), errors.empty() ? "" : "schema: " + errors.front());
  c.expect(doc.children.size() == 50, "tweets in result: " + std::to_string(doc.children.size()));

  const int status = run_cli({"graph", "paths", "--records", dir.file("a.json"), "--from",
                              "@grace_h", "--to", "@henry_w", "--max-len", "4"},
                             dir.file("paths"));
  c.expect(status == 0, "graph paths exit " + std::to_string(status));
  const std::string paths = read_file(dir.file("paths"));
  c.expect(paths == "user:grace_h\ttweet:1049\thashtag:#mentalhealth\ttweet:1050\tuser:henry_w\n",
           "paths: " + paths);
}

struct Criterion {
  int id;
  std::string name;
  double limit_s;
  std::function<void(Checker&)> check;
};

}  // namespace
}  // namespace curata

int main() {
  using namespace curata;
  const std::vector<Criterion> criteria = {
      {1, "Obama sentence reproduction", 1, obama_sentence},
      {2, "Gazetteer table fidelity", 1, gazetteer_table},
      {3, "Similarity metric axioms", 60, similarity_axioms},
      {4, "Stem fidelity", 5, stem_fidelity},
      {5, "Synonym fidelity", 1, synonym_fidelity},
      {6, "Index oracle equivalence", 60, index_oracle},
      {7, "Classifier oracles", 30, classifier_oracles},
      {8, "ARFF and index round-trips", 10, round_trips},
      {9, "Offline linking", 5, offline_linking},
      {10, "End-to-end determinism", 30, end_to_end},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Checker checker;
    const auto start = std::chrono::steady_clock::now();
    std::string error;
    try {
      cr.check(checker);
    } catch (const std::exception& e) {
      error = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string detail;
    if (!error.empty()) {
      detail = error;
    } else if (!checker.ok()) {
      detail = checker.summary();
    } else if (secs >= cr.limit_s) {
      detail = "over time limit";
    }
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.3f s / limit %g s", secs, cr.limit_s);
    std::cout << (detail.empty() ? "PASS" : "FAIL") << "  " << cr.id << ". " << cr.name << " ("
              << timing << ")";
    if (!detail.empty()) std::cout << ": " << detail;
    std::cout << '\n';
    failed += !detail.empty();
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}

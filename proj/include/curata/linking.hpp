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

// Knowledge-base lookups (Wikidata, Google Knowledge Graph, ConceptNet) and
// similarity-ranked entity linking.
//
// Every lookup either queries the provider through the configured HttpClient
// or, in offline mode, reads `<fixture_dir>/<provider>/<url-encoded query>.json`.
// A lookup returns std::nullopt when the provider has nothing for the query.

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "curata/detail/url.hpp"
#include "curata/error.hpp"
#include "curata/http.hpp"
#include "curata/similarity.hpp"
#include "json.hpp"

namespace curata {

enum class KbProvider { kWikidata, kGoogleKg, kConceptNet };

inline std::string to_string(KbProvider p) {
  switch (p) {
    case KbProvider::kWikidata:
      return "wikidata";
    case KbProvider::kGoogleKg:
      return "googlekg";
    case KbProvider::kConceptNet:
      return "conceptnet";
  }
  return "";
}

inline KbProvider parse_kb_provider(std::string_view name) {
  if (name == "wikidata") return KbProvider::kWikidata;
  if (name == "googlekg") return KbProvider::kGoogleKg;
  if (name == "conceptnet") return KbProvider::kConceptNet;
  throw ArgumentError("unknown knowledge base: " + std::string(name));
}

struct KbEntity {
  KbProvider provider = KbProvider::kWikidata;
  std::string id;
  std::string label;
  std::optional<std::string> description;
  std::optional<std::string> url;

  friend bool operator==(const KbEntity&, const KbEntity&) = default;
};

struct ConceptEdge {
  std::string relation;
  std::string start;
  std::string end;
  double weight = 0;

  friend bool operator==(const ConceptEdge&, const ConceptEdge&) = default;
};

struct KbClientConfig {
  std::string wikidata_url = "https://www.wikidata.org/w/api.php";
  std::string gkg_url = "https://kgsearch.googleapis.com/v1/entities:search";
  std::string conceptnet_url = "https://api.conceptnet.io";
  std::optional<std::string> gkg_key;
  // Offline when set: fixtures are read and the transport is never used.
  std::optional<std::string> fixture_dir;
  std::chrono::milliseconds timeout{10000};
  HttpClient transport;

  bool offline() const { return fixture_dir.has_value(); }

  // Defaults overridden by CURATA_WIKIDATA_URL, CURATA_GKG_URL,
  // CURATA_GKG_KEY and CURATA_CONCEPTNET_URL.
  static KbClientConfig from_env() {
    KbClientConfig cfg;
    auto env = [](const char* name) -> std::optional<std::string> {
      const char* v = std::getenv(name);
      if (!v || !*v) return std::nullopt;
      return std::string(v);
    };
    if (auto v = env("CURATA_WIKIDATA_URL")) cfg.wikidata_url = *v;
    if (auto v = env("CURATA_GKG_URL")) cfg.gkg_url = *v;
    if (auto v = env("CURATA_CONCEPTNET_URL")) cfg.conceptnet_url = *v;
    cfg.gkg_key = env("CURATA_GKG_KEY");
    return cfg;
  }
};

namespace detail {

inline nlohmann::json parse_kb_json(const std::string& body,
                                    const std::string& source) {
  try {
    return nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError("malformed JSON from " + source + ": " + e.what(), e.byte);
  }
}

// Body for `fixture_key` (offline) or `url` (live); nullopt when absent.
inline std::optional<nlohmann::json> kb_fetch(const KbClientConfig& cfg,
                                              KbProvider provider,
                                              std::string_view fixture_key,
                                              const std::string& url) {
  if (cfg.offline()) {
    const std::filesystem::path path = std::filesystem::path(*cfg.fixture_dir) /
                                       to_string(provider) /
                                       (url_encode(fixture_key) + ".json");
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_kb_json(ss.str(), path.string());
  }
  if (!cfg.transport) throw ArgumentError("live lookups need a transport");
  HttpResponse response;
  try {
    response = cfg.transport(url);
  } catch (const FetchError& e) {
    throw TransportError(e.what());
  }
  if (response.status == 404) return std::nullopt;
  if (response.status < 200 || response.status >= 300) {
    throw TransportError("HTTP " + std::to_string(response.status) + " from " +
                         to_string(provider));
  }
  return parse_kb_json(response.body, url);
}

inline const nlohmann::json& member(const nlohmann::json& j, const char* key) {
  static const nlohmann::json kNull;
  if (!j.is_object()) return kNull;
  auto it = j.find(key);
  return it == j.end() ? kNull : *it;
}

inline std::optional<std::string> json_string(const nlohmann::json& j,
                                               std::initializer_list<const char*> path) {
  const nlohmann::json* cur = &j;
  for (const char* key : path) {
    if (!cur->is_object()) return std::nullopt;
    auto it = cur->find(key);
    if (it == cur->end()) return std::nullopt;
    cur = &*it;
  }
  if (!cur->is_string()) return std::nullopt;
  return cur->get<std::string>();
}

inline void require_text(std::string_view s, const char* what) {
  if (trim(s).empty()) throw ArgumentError(std::string(what) + " must not be empty");
}

// "/c/en/motor_vehicle/n" -> "motor vehicle".
inline std::string concept_label(std::string_view uri) {
  std::string term(uri);
  if (term.rfind("/c/", 0) == 0) {
    std::size_t slash = term.find('/', 3);
    term = slash == std::string::npos ? "" : term.substr(slash + 1);
    term = term.substr(0, term.find('/'));
  }
  std::replace(term.begin(), term.end(), '_', ' ');
  return term;
}

inline std::string concept_text(const nlohmann::json& node) {
  if (auto label = json_string(node, {"label"})) return *label;
  if (auto id = json_string(node, {"@id"})) return concept_label(*id);
  return "";
}

}  // namespace detail

// Wikidata entity search. Items carrying `sitelinks.enwiki.url` get that
// Wikipedia URL; others fall back to their concept URI.
inline std::optional<std::vector<KbEntity>> lookup_wikidata(
    std::string_view label, const KbClientConfig& cfg) {
  detail::require_text(label, "label");
  const std::string url = cfg.wikidata_url +
                          "?action=wbsearchentities&format=json&language=en"
                          "&type=item&search=" +
                          detail::url_encode(label);
  auto body = detail::kb_fetch(cfg, KbProvider::kWikidata, label, url);
  if (!body) return std::nullopt;
  const auto& search = detail::member(*body, "search");
  if (!search.is_array()) {
    throw FormatError("Wikidata response has no search list", 0);
  }
  std::vector<KbEntity> out;
  for (const auto& item : search) {
    auto id = detail::json_string(item, {"id"});
    if (!id || id->empty()) continue;
    KbEntity e{KbProvider::kWikidata, *id,
               detail::json_string(item, {"label"}).value_or(*id),
               detail::json_string(item, {"description"}), std::nullopt};
    e.url = detail::json_string(item, {"sitelinks", "enwiki", "url"});
    if (!e.url) e.url = detail::json_string(item, {"concepturi"});
    out.push_back(std::move(e));
  }
  return out;
}

inline std::optional<std::vector<KbEntity>> lookup_google_kg(
    std::string_view label, const KbClientConfig& cfg) {
  detail::require_text(label, "label");
  if (!cfg.offline() && !cfg.gkg_key) {
    throw ArgumentError("Google Knowledge Graph lookups need an API key");
  }
  const std::string url = cfg.gkg_url + "?limit=10&languages=en&query=" +
                          detail::url_encode(label) + "&key=" +
                          detail::url_encode(cfg.gkg_key.value_or(""));
  auto body = detail::kb_fetch(cfg, KbProvider::kGoogleKg, label, url);
  if (!body) return std::nullopt;
  const auto& items = detail::member(*body, "itemListElement");
  if (!items.is_array()) {
    throw FormatError("Knowledge Graph response has no itemListElement", 0);
  }
  std::vector<KbEntity> out;
  for (const auto& item : items) {
    const auto& result = item.is_object() && item.contains("result")
                             ? item["result"]
                             : item;
    auto id = detail::json_string(result, {"@id"});
    if (!id || id->empty()) continue;
    out.push_back({KbProvider::kGoogleKg, *id,
                   detail::json_string(result, {"name"}).value_or(*id),
                   detail::json_string(result, {"description"}),
                   detail::json_string(result, {"detailedDescription", "url"})});
  }
  return out;
}

namespace detail {

inline std::optional<std::vector<ConceptEdge>> conceptnet_edges(
    std::string_view token, std::size_t limit, const KbClientConfig& cfg) {
  require_text(token, "token");
  std::string term = to_lower(trim(token));
  std::replace(term.begin(), term.end(), ' ', '_');
  const std::string url = cfg.conceptnet_url + "/c/en/" + url_encode(term) +
                          "?limit=" + std::to_string(limit);
  auto body = kb_fetch(cfg, KbProvider::kConceptNet, token, url);
  if (!body) return std::nullopt;
  const auto& edges = member(*body, "edges");
  if (!edges.is_array()) throw FormatError("ConceptNet response has no edges", 0);
  std::vector<ConceptEdge> out;
  for (const auto& e : edges) {
    ConceptEdge edge;
    const auto& rel = member(e, "rel");
    edge.relation = json_string(rel, {"label"}).value_or(
        json_string(rel, {"@id"}).value_or(""));
    if (edge.relation.rfind("/r/", 0) == 0) edge.relation.erase(0, 3);
    edge.start = concept_text(member(e, "start"));
    edge.end = concept_text(member(e, "end"));
    if (member(e, "weight").is_number()) edge.weight = e["weight"].get<double>();
    out.push_back(std::move(edge));
  }
  return out;
}

}  // namespace detail

// At most `count` edges touching `token`, in provider order.
inline std::optional<std::vector<ConceptEdge>> conceptnet_lookup(
    std::string_view token, std::size_t count, const KbClientConfig& cfg) {
  if (count < 1) throw ArgumentError("count must be at least 1");
  auto edges = detail::conceptnet_edges(token, count, cfg);
  if (edges && edges->size() > count) edges->resize(count);
  return edges;
}

// Concepts X with an edge "X PartOf token".
inline std::optional<std::vector<std::string>> conceptnet_part_of(
    std::string_view token, const KbClientConfig& cfg) {
  auto edges = detail::conceptnet_edges(token, 1000, cfg);
  if (!edges) return std::nullopt;
  const std::string target = detail::to_lower(detail::trim(token));
  std::vector<std::string> out;
  for (const auto& e : *edges) {
    if (e.relation == "PartOf" && detail::to_lower(e.end) == target) {
      out.push_back(e.start);
    }
  }
  return out;
}

using Association = std::pair<std::string, double>;

// Related concepts by descending weight. Offline fixtures are keyed
// "related:<token>".
inline std::optional<std::vector<Association>> conceptnet_association(
    std::string_view token, const KbClientConfig& cfg) {
  detail::require_text(token, "token");
  std::string term = detail::to_lower(detail::trim(token));
  std::replace(term.begin(), term.end(), ' ', '_');
  const std::string url = cfg.conceptnet_url + "/related/c/en/" +
                          detail::url_encode(term) + "?filter=/c/en";
  auto body = detail::kb_fetch(cfg, KbProvider::kConceptNet,
                               "related:" + std::string(token), url);
  if (!body) return std::nullopt;
  const auto& related = detail::member(*body, "related");
  if (!related.is_array()) {
    throw FormatError("ConceptNet response has no related list", 0);
  }
  std::vector<Association> out;
  for (const auto& r : related) {
    auto id = detail::json_string(r, {"@id"});
    if (!id) continue;
    const auto& weight = detail::member(r, "weight");
    const double w = weight.is_number() ? weight.get<double>() : 0.0;
    out.emplace_back(detail::concept_label(*id), w);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.second > b.second;
  });
  return out;
}

// Concepts related to the token list as a whole: each concept's weight is
// averaged over all tokens (0 where a token lacks it). nullopt when no token
// is known.
inline std::optional<std::vector<Association>> conceptnet_association_words(
    const std::vector<std::string>& tokens, const KbClientConfig& cfg) {
  if (tokens.empty()) throw ArgumentError("tokens must not be empty");
  std::map<std::string, double> sum;
  std::vector<std::string> order;
  bool any = false;
  for (const auto& t : tokens) {
    auto assoc = conceptnet_association(t, cfg);
    if (!assoc) continue;
    any = true;
    for (const auto& [name, w] : *assoc) {
      if (!sum.count(name)) order.push_back(name);
      sum[name] += w;
    }
  }
  if (!any) return std::nullopt;
  std::vector<Association> out;
  for (const auto& c : order) {
    out.emplace_back(c, sum[c] / static_cast<double>(tokens.size()));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.second > b.second;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Linking

enum class LinkMetric { kJaro, kLevenshteinNorm, kSoundex };

inline LinkMetric parse_link_metric(std::string_view name) {
  if (name == "jaro") return LinkMetric::kJaro;
  if (name == "levenshtein_norm") return LinkMetric::kLevenshteinNorm;
  if (name == "soundex") return LinkMetric::kSoundex;
  throw ArgumentError("unsupported link metric: " + std::string(name));
}

inline std::string to_string(LinkMetric m) {
  switch (m) {
    case LinkMetric::kJaro:
      return "jaro";
    case LinkMetric::kLevenshteinNorm:
      return "levenshtein_norm";
    case LinkMetric::kSoundex:
      return "soundex";
  }
  return "";
}

inline double link_score(LinkMetric metric, std::string_view a,
                         std::string_view b) {
  switch (metric) {
    case LinkMetric::kJaro:
      return jaro(a, b);
    case LinkMetric::kLevenshteinNorm:
      return levenshtein_similarity(a, b);
    case LinkMetric::kSoundex:
      try {
        return soundex_sim(a, b);
      } catch (const ArgumentError&) {
        return 0.0;  // no letters on one side
      }
  }
  return 0.0;
}

struct LinkCandidate {
  std::string mention;
  KbEntity entity;
  double score = 0;
  std::string metric;

  friend bool operator==(const LinkCandidate&, const LinkCandidate&) = default;
};

// Candidates scoring strictly above `threshold`, best first; equal scores keep
// their input order.
inline std::vector<LinkCandidate> link_entity(std::string_view mention,
                                              const std::vector<KbEntity>& candidates,
                                              std::string_view metric,
                                              double threshold) {
  const LinkMetric m = parse_link_metric(metric);
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ArgumentError("threshold must lie in [0, 1]");
  }
  std::vector<LinkCandidate> out;
  for (const auto& c : candidates) {
    const double s = link_score(m, mention, c.label);
    if (s > threshold) out.push_back({std::string(mention), c, s, to_string(m)});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const LinkCandidate& a, const LinkCandidate& b) {
                     return a.score > b.score;
                   });
  return out;
}

}  // namespace curata

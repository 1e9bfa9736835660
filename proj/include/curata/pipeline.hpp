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

// End-to-end curation: tweet ingestion, enrichment with every extractor,
// XML/JSON result files, and the entity graph connecting related records.

#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstddef>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "curata/detail/url.hpp"
#include "curata/detail/utf8.hpp"
#include "curata/error.hpp"
#include "curata/html.hpp"
#include "curata/http.hpp"
#include "curata/lexical.hpp"
#include "curata/linking.hpp"
#include "curata/ner.hpp"
#include "curata/text.hpp"
#include "json.hpp"

namespace curata {

struct TweetUser {
  std::string handle;
  std::string name;
  std::string description;

  friend bool operator==(const TweetUser&, const TweetUser&) = default;
};

struct TweetRecord {
  std::string id;
  std::string text;
  TweetUser user;
  std::vector<std::string> hashtags;
  std::vector<std::string> urls;
  std::string created_at;

  friend bool operator==(const TweetRecord&, const TweetRecord&) = default;
};

namespace detail {

inline std::string json_text(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return "";
  if (!it->is_string()) throw ArgumentError(std::string("field '") + key + "' is not text");
  return it->get<std::string>();
}

inline std::vector<std::string> json_texts(const nlohmann::json& j, const char* key) {
  std::vector<std::string> out;
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return out;
  if (!it->is_array()) throw ArgumentError(std::string("field '") + key + "' is not a list");
  for (const auto& v : *it) {
    if (!v.is_string()) throw ArgumentError(std::string("field '") + key + "' holds non-text");
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace detail

// Numeric ids are accepted and kept in their decimal form.
inline TweetRecord tweet_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ArgumentError("record is not an object");
  TweetRecord t;
  auto id = j.find("id");
  if (id == j.end()) throw ArgumentError("record without id");
  if (id->is_string()) {
    t.id = id->get<std::string>();
  } else if (id->is_number_integer()) {
    t.id = id->dump();
  } else {
    throw ArgumentError("id must be text or an integer");
  }
  if (t.id.empty()) throw ArgumentError("empty id");
  if (!j.contains("text")) throw ArgumentError("record without text");
  t.text = detail::json_text(j, "text");
  if (auto user = j.find("user"); user != j.end() && !user->is_null()) {
    if (!user->is_object()) throw ArgumentError("user is not an object");
    t.user = {detail::json_text(*user, "handle"), detail::json_text(*user, "name"),
              detail::json_text(*user, "description")};
  }
  t.hashtags = detail::json_texts(j, "hashtags");
  t.urls = detail::json_texts(j, "urls");
  t.created_at = detail::json_text(j, "created_at");
  return t;
}

inline nlohmann::json tweet_to_json(const TweetRecord& t) {
  return {{"id", t.id},
          {"text", t.text},
          {"user",
           {{"handle", t.user.handle},
            {"name", t.user.name},
            {"description", t.user.description}}},
          {"hashtags", t.hashtags},
          {"urls", t.urls},
          {"created_at", t.created_at}};
}

struct IngestResult {
  std::vector<TweetRecord> records;
  std::vector<std::string> warnings;  // one per skipped line
};

// JSONL tweets in file order. Malformed lines and repeated ids are skipped
// with a warning; `keyword` keeps records whose text contains it (any case).
inline IngestResult ingest(const std::string& path,
                           const std::optional<std::string>& keyword = std::nullopt,
                           std::optional<std::size_t> limit = std::nullopt) {
  if (limit && *limit == 0) throw ArgumentError("limit must be at least 1");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path);
  const std::string needle = keyword ? detail::to_lower(*keyword) : "";
  IngestResult result;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  std::size_t valid = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    TweetRecord t;
    try {
      t = tweet_from_json(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      result.warnings.push_back("line " + std::to_string(line_no) +
                                ": malformed JSON");
      continue;
    } catch (const ArgumentError& e) {
      result.warnings.push_back("line " + std::to_string(line_no) + ": " + e.what());
      continue;
    }
    if (!ids.insert(t.id).second) {
      result.warnings.push_back("line " + std::to_string(line_no) +
                                ": duplicate id " + t.id);
      continue;
    }
    ++valid;
    if (!needle.empty() &&
        detail::to_lower(t.text).find(needle) == std::string::npos) {
      continue;
    }
    if (!limit || result.records.size() < *limit) {
      result.records.push_back(std::move(t));
    }
  }
  if (valid == 0) throw IngestError("no valid records in " + path);
  return result;
}

// ---------------------------------------------------------------------------
// Enrichment

struct Resources {
  Gazetteer gazetteer;
  StopwordList stopwords = english_stopwords();
  PosLexicon pos;
  SynsetLexicon synsets;
  ReferenceFrequencies reference;
  // Words that cannot open a name at the start of a sentence.
  StopwordList common_words;
};

// Standard resource files from `dir`; `gazetteer_path` overrides data.txt.
inline Resources load_resources(const std::string& dir,
                                const std::optional<std::string>& gazetteer_path =
                                    std::nullopt) {
  const std::filesystem::path base(dir);
  auto file = [&](const char* name) { return (base / name).string(); };
  Resources r;
  r.gazetteer = load_gazetteer(gazetteer_path.value_or(file("data.txt")));
  r.stopwords = load_stopwords(file("stopwords.txt"));
  r.pos = load_pos_lexicon(file("pos_lexicon.tsv"), file("pos_suffixes.tsv"));
  r.synsets = load_synsets(file("synsets.tsv"));
  r.reference = load_reference_frequencies(file("reference_freq.tsv"));
  r.common_words = r.pos.vocabulary();
  return r;
}

struct PipelineOptions {
  std::optional<KbClientConfig> kb;  // no linking when absent
  HttpClient http;                   // no URL extraction when empty
  std::string link_metric = "jaro";
  double link_threshold = 0.7;
  std::size_t threads = 1;  // 0 = one per hardware thread
};

struct SourcedEntity {
  std::string source;  // "text" or "profile"
  NamedEntity entity;

  friend bool operator==(const SourcedEntity&, const SourcedEntity&) = default;
};

struct SourcedTag {
  std::string source;
  TaggedToken token;

  friend bool operator==(const SourcedTag&, const SourcedTag&) = default;
};

struct StemPair {
  std::string word;
  std::string stem;

  friend bool operator==(const StemPair&, const StemPair&) = default;
};

struct UrlExtract {
  std::string url;
  PageExtract page;

  friend bool operator==(const UrlExtract&, const UrlExtract&) = default;
};

struct CurationRecord {
  TweetRecord tweet;
  std::vector<SourcedEntity> entities;
  std::vector<Keyword> keywords;
  std::vector<SourcedTag> pos;
  std::vector<StemPair> stems;
  std::vector<WordSynonyms> synonyms;
  std::vector<UrlExtract> urls;
  std::vector<LinkCandidate> links;
  std::vector<std::string> warnings;

  friend bool operator==(const CurationRecord&, const CurationRecord&) = default;
};

inline bool is_linkable(EntityType type) {
  return type == EntityType::kPerson || type == EntityType::kOrganization ||
         type == EntityType::kCity || type == EntityType::kCountry ||
         type == EntityType::kCompany;
}

inline CurationRecord enrich(const TweetRecord& tweet, const Resources& res,
                             const PipelineOptions& options = {}) {
  if (res.gazetteer.empty() || res.pos.size() == 0) {
    throw StateError("pipeline resources are not loaded");
  }
  CurationRecord rec;
  rec.tweet = tweet;
  const std::pair<const char*, const std::string*> sources[] = {
      {"text", &tweet.text}, {"profile", &tweet.user.description}};

  const Document combined{tweet.id, tweet.text + "\n" + tweet.user.description, {}};
  rec.keywords = extract_keywords(combined, res.stopwords, &res.reference);

  NerOptions ner;
  ner.stopwords = &res.stopwords;
  ner.common_words = &res.common_words;
  std::set<std::string> stemmed;
  for (const auto& [source, text] : sources) {
    for (auto& e : extract_entities(*text, res.gazetteer, ner)) {
      rec.entities.push_back({source, std::move(e)});
    }
    for (auto& t : tag_pos(*text, res.pos)) rec.pos.push_back({source, std::move(t)});
    for (const Token& t : tokenize(*text, res.stopwords)) {
      if (stemmed.insert(t.surface).second) rec.stems.push_back({t.surface, stem(t.surface)});
    }
  }
  rec.synonyms = synonyms_text(combined.text, res.synsets, res.stopwords);

  for (const auto& url : tweet.urls) {
    if (!options.http) {
      rec.warnings.push_back("url " + url + ": fetching disabled");
      continue;
    }
    try {
      rec.urls.push_back({url, extract_page(parse_html(fetch(url, options.http)))});
    } catch (const Error& e) {
      rec.warnings.push_back("url " + url + ": " + e.what());
    }
  }

  if (options.kb) {
    std::set<std::string> looked_up;
    for (const auto& se : rec.entities) {
      const NamedEntity& e = se.entity;
      if (!is_linkable(e.type) || !looked_up.insert(e.word).second) continue;
      try {
        const auto candidates = lookup_wikidata(e.word, *options.kb);
        if (!candidates) continue;
        for (auto& link : link_entity(e.word, *candidates, options.link_metric,
                                      options.link_threshold)) {
          rec.links.push_back(std::move(link));
        }
      } catch (const TransportError& ex) {
        rec.warnings.push_back("link " + e.word + ": " + ex.what());
      } catch (const FormatError& ex) {
        rec.warnings.push_back("link " + e.word + ": " + ex.what());
      }
    }
  }
  return rec;
}

// Records in input order; work is spread over `options.threads` workers.
inline std::vector<CurationRecord> enrich_all(const std::vector<TweetRecord>& tweets,
                                              const Resources& res,
                                              const PipelineOptions& options = {}) {
  std::vector<CurationRecord> out(tweets.size());
  std::size_t workers = options.threads ? options.threads
                                        : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(tweets.size(), 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    while (true) {
      const std::size_t i = next++;
      if (i >= tweets.size()) return;
      try {
        out[i] = enrich(tweets[i], res, options);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = tweets.size();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

// Serves `<dir>/<url-encoded url>.html`; other URLs answer 404.
inline HttpClient make_fixture_client(const std::string& dir) {
  return [dir](const std::string& url) -> HttpResponse {
    const auto path = std::filesystem::path(dir) / (detail::url_encode(url) + ".html");
    std::ifstream in(path, std::ios::binary);
    if (!in) return HttpResponse{404, ""};
    std::ostringstream ss;
    ss << in.rdbuf();
    return HttpResponse{200, ss.str()};
  };
}

// ---------------------------------------------------------------------------
// Result files

namespace detail {

// XML 1.0 cannot carry most C0 controls, so they are dropped.
inline std::string xml_escape(std::string_view s, bool attribute) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    const auto u = static_cast<unsigned char>(c);
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += attribute ? "&quot;" : "\""; break;
      case '\n': out += attribute ? "&#10;" : "\n"; break;
      case '\r': out += "&#13;"; break;
      case '\t': out += attribute ? "&#9;" : "\t"; break;
      default:
        if (u >= 0x20) out += c;
    }
  }
  return out;
}

inline std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

class XmlWriter {
 public:
  void open(std::string_view name,
            std::initializer_list<std::pair<std::string_view, std::string>> attrs = {},
            bool empty = false) {
    indent();
    out_ += "<";
    out_ += name;
    for (const auto& [k, v] : attrs) {
      out_ += " ";
      out_ += k;
      out_ += "=\"" + xml_escape(v, true) + "\"";
    }
    if (empty) {
      out_ += "/>\n";
      return;
    }
    out_ += ">\n";
    ++depth_;
  }
  void close(std::string_view name) {
    --depth_;
    indent();
    out_ += "</";
    out_ += name;
    out_ += ">\n";
  }
  void leaf(std::string_view name, std::string_view text,
            std::initializer_list<std::pair<std::string_view, std::string>> attrs = {}) {
    indent();
    out_ += "<";
    out_ += name;
    for (const auto& [k, v] : attrs) {
      out_ += " ";
      out_ += k;
      out_ += "=\"" + xml_escape(v, true) + "\"";
    }
    out_ += ">" + xml_escape(text, false) + "</";
    out_ += name;
    out_ += ">\n";
  }
  void raw(std::string_view s) { out_ += s; }
  std::string take() { return std::move(out_); }

 private:
  void indent() { out_.append(2 * depth_, ' '); }

  std::string out_;
  std::size_t depth_ = 0;
};

}  // namespace detail

inline std::string records_to_xml(const std::vector<CurationRecord>& records) {
  detail::XmlWriter w;
  w.raw("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
  w.open("results");
  for (const auto& r : records) {
    const TweetRecord& t = r.tweet;
    w.open("tweet", {{"id", t.id}, {"created_at", t.created_at}});
    w.leaf("text", t.text);
    w.open("user", {{"handle", t.user.handle}, {"name", t.user.name}});
    w.leaf("description", t.user.description);
    w.close("user");

    w.open("hashtags");
    for (const auto& h : t.hashtags) w.leaf("hashtag", h);
    w.close("hashtags");

    w.open("entities");
    for (const auto& e : r.entities) {
      w.leaf("entity", e.entity.word,
             {{"source", e.source},
              {"type", std::string(to_string(e.entity.type))},
              {"start", std::to_string(e.entity.start)},
              {"end", std::to_string(e.entity.end)}});
    }
    w.close("entities");

    w.open("keywords");
    for (const auto& k : r.keywords) {
      w.leaf("keyword", k.term,
             {{"frequency", std::to_string(k.frequency)},
              {"score", detail::format_double(k.score)}});
    }
    w.close("keywords");

    w.open("pos");
    for (const auto& p : r.pos) {
      w.leaf("token", p.token.word_part,
             {{"source", p.source}, {"tag", std::string(to_string(p.token.tag))}});
    }
    w.close("pos");

    w.open("stems");
    for (const auto& s : r.stems) w.leaf("stem", s.stem, {{"word", s.word}});
    w.close("stems");

    w.open("synonyms");
    for (const auto& s : r.synonyms) {
      w.open("synonym", {{"word", s.word}});
      for (const auto& alt : s.synonyms) w.leaf("alt", alt);
      w.close("synonym");
    }
    w.close("synonyms");

    w.open("urls");
    for (const auto& u : r.urls) {
      w.open("url", {{"href", u.url}});
      if (u.page.title) w.leaf("title", *u.page.title);
      for (const auto& h : u.page.headings) {
        w.leaf("heading", h.text, {{"level", std::to_string(h.level)}});
      }
      for (const auto& p : u.page.paragraphs) w.leaf("paragraph", p);
      for (const auto& a : u.page.anchor_texts) w.leaf("anchor", a);
      for (const auto& a : u.page.image_alts) w.leaf("alt", a);
      for (const auto& i : u.page.list_items) w.leaf("item", i);
      w.close("url");
    }
    w.close("urls");

    w.open("links");
    for (const auto& l : r.links) {
      const KbEntity& e = l.entity;
      if (e.description && e.url) {
        w.open("link",
               {{"mention", l.mention}, {"provider", to_string(e.provider)},
                {"id", e.id}, {"label", e.label}, {"description", *e.description},
                {"url", *e.url}, {"score", detail::format_double(l.score)},
                {"metric", l.metric}},
               true);
      } else if (e.description) {
        w.open("link",
               {{"mention", l.mention}, {"provider", to_string(e.provider)},
                {"id", e.id}, {"label", e.label}, {"description", *e.description},
                {"score", detail::format_double(l.score)}, {"metric", l.metric}},
               true);
      } else if (e.url) {
        w.open("link",
               {{"mention", l.mention}, {"provider", to_string(e.provider)},
                {"id", e.id}, {"label", e.label}, {"url", *e.url},
                {"score", detail::format_double(l.score)}, {"metric", l.metric}},
               true);
      } else {
        w.open("link",
               {{"mention", l.mention}, {"provider", to_string(e.provider)},
                {"id", e.id}, {"label", e.label},
                {"score", detail::format_double(l.score)}, {"metric", l.metric}},
               true);
      }
    }
    w.close("links");

    w.open("warnings");
    for (const auto& warning : r.warnings) w.leaf("warning", warning);
    w.close("warnings");
    w.close("tweet");
  }
  w.close("results");
  return w.take();
}

inline nlohmann::json records_to_json(const std::vector<CurationRecord>& records) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json j;
    j["tweet"] = tweet_to_json(r.tweet);
    j["entities"] = nlohmann::json::array();
    for (const auto& e : r.entities) {
      j["entities"].push_back({{"source", e.source},
                               {"word", e.entity.word},
                               {"type", std::string(to_string(e.entity.type))},
                               {"start", e.entity.start},
                               {"end", e.entity.end}});
    }
    j["keywords"] = nlohmann::json::array();
    for (const auto& k : r.keywords) {
      j["keywords"].push_back(
          {{"term", k.term}, {"frequency", k.frequency}, {"score", k.score}});
    }
    j["pos"] = nlohmann::json::array();
    for (const auto& p : r.pos) {
      j["pos"].push_back({{"source", p.source},
                          {"word", p.token.word_part},
                          {"tag", std::string(to_string(p.token.tag))}});
    }
    j["stems"] = nlohmann::json::array();
    for (const auto& s : r.stems) j["stems"].push_back({{"word", s.word}, {"stem", s.stem}});
    j["synonyms"] = nlohmann::json::array();
    for (const auto& s : r.synonyms) {
      j["synonyms"].push_back({{"word", s.word}, {"alt", s.synonyms}});
    }
    j["urls"] = nlohmann::json::array();
    for (const auto& u : r.urls) {
      nlohmann::json page = {{"href", u.url}};
      page["title"] = u.page.title ? nlohmann::json(*u.page.title) : nlohmann::json();
      page["heading"] = nlohmann::json::array();
      for (const auto& h : u.page.headings) {
        page["heading"].push_back({{"level", h.level}, {"text", h.text}});
      }
      page["paragraph"] = u.page.paragraphs;
      page["anchor"] = u.page.anchor_texts;
      page["alt"] = u.page.image_alts;
      page["item"] = u.page.list_items;
      j["urls"].push_back(std::move(page));
    }
    j["links"] = nlohmann::json::array();
    for (const auto& l : r.links) {
      nlohmann::json link = {{"mention", l.mention},
                             {"provider", to_string(l.entity.provider)},
                             {"id", l.entity.id},
                             {"label", l.entity.label},
                             {"score", l.score},
                             {"metric", l.metric}};
      link["description"] = l.entity.description ? nlohmann::json(*l.entity.description)
                                                 : nlohmann::json();
      link["url"] = l.entity.url ? nlohmann::json(*l.entity.url) : nlohmann::json();
      j["links"].push_back(std::move(link));
    }
    j["warnings"] = r.warnings;
    out.push_back(std::move(j));
  }
  return out;
}

namespace detail {

inline std::optional<std::string> optional_text(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<std::string>();
}

}  // namespace detail

// Inverse of records_to_json. Malformed input raises FormatError.
inline std::vector<CurationRecord> records_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw FormatError("records must be a JSON array", 0);
  std::vector<CurationRecord> out;
  try {
    for (const auto& item : j) {
      CurationRecord r;
      r.tweet = tweet_from_json(item.at("tweet"));
      for (const auto& e : item.at("entities")) {
        const auto type = parse_entity_type(e.at("type").get<std::string>());
        if (!type) throw FormatError("unknown entity type", 0);
        r.entities.push_back({e.at("source").get<std::string>(),
                              {e.at("word").get<std::string>(), *type,
                               e.at("start").get<std::size_t>(),
                               e.at("end").get<std::size_t>()}});
      }
      for (const auto& k : item.at("keywords")) {
        r.keywords.push_back({k.at("term").get<std::string>(),
                              k.at("frequency").get<std::size_t>(),
                              k.at("score").get<double>()});
      }
      for (const auto& p : item.at("pos")) {
        const auto tag = parse_pos_tag(p.at("tag").get<std::string>());
        if (!tag) throw FormatError("unknown POS tag", 0);
        r.pos.push_back({p.at("source").get<std::string>(),
                         {p.at("word").get<std::string>(), *tag}});
      }
      for (const auto& s : item.at("stems")) {
        r.stems.push_back({s.at("word").get<std::string>(), s.at("stem").get<std::string>()});
      }
      for (const auto& s : item.at("synonyms")) {
        r.synonyms.push_back({s.at("word").get<std::string>(),
                              s.at("alt").get<std::vector<std::string>>()});
      }
      for (const auto& u : item.at("urls")) {
        UrlExtract x{u.at("href").get<std::string>(), {}};
        x.page.title = detail::optional_text(u, "title");
        for (const auto& h : u.at("heading")) {
          x.page.headings.push_back({h.at("level").get<int>(), h.at("text").get<std::string>()});
        }
        x.page.paragraphs = u.at("paragraph").get<std::vector<std::string>>();
        x.page.anchor_texts = u.at("anchor").get<std::vector<std::string>>();
        x.page.image_alts = u.at("alt").get<std::vector<std::string>>();
        x.page.list_items = u.at("item").get<std::vector<std::string>>();
        r.urls.push_back(std::move(x));
      }
      for (const auto& l : item.at("links")) {
        r.links.push_back({l.at("mention").get<std::string>(),
                           {parse_kb_provider(l.at("provider").get<std::string>()),
                            l.at("id").get<std::string>(), l.at("label").get<std::string>(),
                            detail::optional_text(l, "description"),
                            detail::optional_text(l, "url")},
                           l.at("score").get<double>(),
                           l.at("metric").get<std::string>()});
      }
      r.warnings = item.at("warnings").get<std::vector<std::string>>();
      out.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed records: ") + e.what(), 0);
  } catch (const ArgumentError& e) {
    throw FormatError(std::string("malformed records: ") + e.what(), 0);
  }
  return out;
}

enum class RecordFormat { kXml, kJson };

inline void write_records(const std::vector<CurationRecord>& records,
                          RecordFormat format, const std::string& path) {
  if (records.empty()) throw ArgumentError("no records to write");
  const std::string body = format == RecordFormat::kXml
                               ? records_to_xml(records)
                               : records_to_json(records).dump(2) + "\n";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw WriteError("cannot write " + path);
  out << body;
  out.flush();
  if (!out) throw WriteError("cannot write " + path);
}

inline std::vector<CurationRecord> read_records(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what(), e.byte);
  }
  return records_from_json(j);
}

// ---------------------------------------------------------------------------
// Entity graph

enum class NodeType { kUser, kTweet, kEntity, kHashtag, kKeyword };
enum class EdgeType { kPosted, kMentions, kTagged, kHasKeyword };

inline std::string_view to_string(EdgeType t) {
  switch (t) {
    case EdgeType::kPosted:
      return "posted";
    case EdgeType::kMentions:
      return "mentions";
    case EdgeType::kTagged:
      return "tagged";
    case EdgeType::kHasKeyword:
      return "has_keyword";
  }
  return "";
}

struct GraphEdge {
  std::string from;
  std::string to;
  EdgeType type = EdgeType::kPosted;

  friend auto operator<=>(const GraphEdge&, const GraphEdge&) = default;
};

inline constexpr std::size_t kGraphKeywords = 5;

inline std::string user_key(std::string_view handle) {
  std::string h = detail::to_lower(detail::trim(handle));
  if (!h.empty() && h[0] == '@') h.erase(0, 1);
  return "user:" + h;
}
inline std::string tweet_key(std::string_view id) { return "tweet:" + std::string(id); }
inline std::string entity_key(const NamedEntity& e) {
  return "entity:" + detail::to_lower(e.word) + "|" + std::string(to_string(e.type));
}
inline std::string hashtag_key(std::string_view tag) {
  std::string t = detail::to_lower(detail::trim(tag));
  if (!t.empty() && t[0] == '#') t.erase(0, 1);
  return "hashtag:#" + t;
}
inline std::string keyword_key(std::string_view term) {
  return "keyword:" + std::string(term);
}

class EntityGraph {
 public:
  void add_node(const std::string& key, NodeType type) { nodes_.emplace(key, type); }

  void add_edge(const std::string& from, const std::string& to, EdgeType type) {
    if (!nodes_.count(from) || !nodes_.count(to)) {
      throw ArgumentError("edge endpoint missing: " + from + " -> " + to);
    }
    edges_.insert({from, to, type});
    adjacency_[from].insert(to);
    adjacency_[to].insert(from);
  }

  const std::map<std::string, NodeType>& nodes() const { return nodes_; }
  const std::set<GraphEdge>& edges() const { return edges_; }
  bool contains(const std::string& key) const { return nodes_.count(key) > 0; }

  // Neighbours ignoring edge direction, sorted by key.
  const std::set<std::string>& neighbors(const std::string& key) const {
    static const std::set<std::string> kNone;
    auto it = adjacency_.find(key);
    return it == adjacency_.end() ? kNone : it->second;
  }

 private:
  std::map<std::string, NodeType> nodes_;
  std::set<GraphEdge> edges_;
  std::map<std::string, std::set<std::string>> adjacency_;
};

inline EntityGraph build_graph(const std::vector<CurationRecord>& records) {
  EntityGraph g;
  for (const auto& r : records) {
    const std::string user = user_key(r.tweet.user.handle);
    const std::string tweet = tweet_key(r.tweet.id);
    g.add_node(user, NodeType::kUser);
    g.add_node(tweet, NodeType::kTweet);
    g.add_edge(user, tweet, EdgeType::kPosted);
    for (const auto& e : r.entities) {
      const std::string key = entity_key(e.entity);
      g.add_node(key, NodeType::kEntity);
      g.add_edge(tweet, key, EdgeType::kMentions);
    }
    for (const auto& h : r.tweet.hashtags) {
      const std::string key = hashtag_key(h);
      g.add_node(key, NodeType::kHashtag);
      g.add_edge(tweet, key, EdgeType::kTagged);
    }
    for (std::size_t i = 0; i < r.keywords.size() && i < kGraphKeywords; ++i) {
      const std::string key = keyword_key(r.keywords[i].term);
      g.add_node(key, NodeType::kKeyword);
      g.add_edge(tweet, key, EdgeType::kHasKeyword);
    }
  }
  return g;
}

using GraphPath = std::vector<std::string>;

// Simple undirected paths of at most `max_len` edges between two users,
// shortest first, then by node-key sequence. Users may be given as a handle
// or as a "user:" key.
inline std::vector<GraphPath> find_paths(const EntityGraph& g, std::string_view from,
                                         std::string_view to, std::size_t max_len) {
  auto resolve = [&](std::string_view u) {
    std::string key = u.rfind("user:", 0) == 0 ? std::string(u) : user_key(u);
    auto it = g.nodes().find(key);
    if (it == g.nodes().end() || it->second != NodeType::kUser) {
      throw ArgumentError("unknown user: " + std::string(u));
    }
    return key;
  };
  const std::string source = resolve(from);
  const std::string target = resolve(to);
  std::vector<GraphPath> paths;
  if (source == target) return {{source}};

  GraphPath path{source};
  std::set<std::string> on_path{source};
  auto dfs = [&](auto&& self, const std::string& node) -> void {
    if (path.size() - 1 == max_len) return;
    for (const auto& next : g.neighbors(node)) {
      if (on_path.count(next)) continue;
      path.push_back(next);
      if (next == target) {
        paths.push_back(path);
      } else {
        on_path.insert(next);
        self(self, next);
        on_path.erase(next);
      }
      path.pop_back();
    }
  };
  dfs(dfs, source);
  std::sort(paths.begin(), paths.end(), [](const GraphPath& a, const GraphPath& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return paths;
}

}  // namespace curata

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

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "curata/classify.hpp"
#include "curata/html.hpp"
#include "curata/http_client.hpp"
#include "curata/index.hpp"
#include "curata/lexical.hpp"
#include "curata/linking.hpp"
#include "curata/ner.hpp"
#include "curata/pipeline.hpp"
#include "curata/similarity.hpp"
#include "curata/text.hpp"

#ifndef CURATA_DEFAULT_RESOURCES
#define CURATA_DEFAULT_RESOURCES "resources"
#endif

namespace {

using namespace curata;

std::string resource_path(const std::string& dir, const char* name) {
  return (std::filesystem::path(dir) / name).string();
}

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Text from --text or --file.
struct TextInput {
  std::string text;
  std::string file;

  void add_to(CLI::App* cmd) {
    auto* t = cmd->add_option("--text", text, "Input text");
    auto* f = cmd->add_option("--file", file, "Read input text from a file");
    t->excludes(f);
  }
  std::string get() const { return file.empty() ? text : read_all(file); }
};

std::string fmt(double x) { return detail::format_double(x); }

PosLexicon load_pos(const std::string& dir) {
  return load_pos_lexicon(resource_path(dir, "pos_lexicon.tsv"),
                          resource_path(dir, "pos_suffixes.tsv"));
}

void print_entities(const std::vector<KbEntity>& entities) {
  for (const auto& e : entities) {
    std::cout << e.id << '\t' << e.label << '\t' << e.description.value_or("")
              << '\t' << e.url.value_or("") << '\n';
  }
}

// Labels from a prediction TSV (second column) or one label per line.
std::vector<std::string> read_labels(const std::string& path) {
  if (path.size() > 5 && path.substr(path.size() - 5) == ".arff") {
    const ArffDataset ds = parse_arff(path);
    const auto& cls = ds.class_attribute();
    std::vector<std::string> out;
    for (const auto& row : ds.rows) out.push_back(format_value(cls, row[ds.class_index()]));
    return out;
  }
  std::istringstream in(read_all(path));
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto parts = detail::split(line, '\t');
    out.emplace_back(parts.size() >= 2 ? parts[1] : parts[0]);
  }
  return out;
}

std::optional<NumericVector> try_vector(const std::string& s) {
  try {
    return parse_vector(s);
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::set<std::string> word_set(const std::string& s) {
  std::set<std::string> out;
  for (const Token& t : tokenize(s)) out.insert(detail::to_lower(t.surface));
  return out;
}

double string_metric(const std::string& metric, const std::string& a,
                     const std::string& b, int q) {
  if (metric == "levenshtein") return static_cast<double>(levenshtein(a, b, false));
  if (metric == "damerau") return static_cast<double>(levenshtein(a, b, true));
  if (metric == "levenshtein_norm") return levenshtein_similarity(a, b, false);
  if (metric == "jaro") return jaro(a, b);
  if (metric == "soundex") return soundex_sim(a, b);
  if (metric == "qgram") return qgram(a, b, q);
  if (metric == "hamming") return static_cast<double>(hamming(a, b));
  const auto va = try_vector(a);
  const auto vb = try_vector(b);
  if (va && vb) return vector_metric(metric)(*va, *vb);
  if (metric == "jaccard") return jaccard(word_set(a), word_set(b));
  if (metric == "dice") return dice(word_set(a), word_set(b));
  if (metric == "cosine" || metric == "euclidean") {
    throw ArgumentError(metric + " needs two numeric vectors");
  }
  throw ArgumentError("unknown metric: " + metric);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curata: text curation toolkit"};
  app.require_subcommand(1);
  std::function<void()> run;

  // ner
  auto* ner = app.add_subcommand("ner", "Named entities as word, type, start, end");
  std::string gazetteer = resource_path(CURATA_DEFAULT_RESOURCES, "data.txt");
  std::string ner_type;
  TextInput ner_in;
  ner->add_option("--gazetteer", gazetteer, "Gazetteer file");
  ner->add_option("--type", ner_type, "Only entities of this type");
  ner_in.add_to(ner);
  ner->callback([&] {
    run = [&] {
      const Gazetteer gaz = load_gazetteer(gazetteer);
      std::optional<EntityType> only;
      if (!ner_type.empty()) {
        only = parse_entity_type(ner_type);
        if (!only) throw ArgumentError("unknown entity type: " + ner_type);
      }
      for (const auto& e : extract_entities(ner_in.get(), gaz)) {
        if (only && e.type != *only) continue;
        std::cout << e.word << '\t' << to_string(e.type) << '\t' << e.start << '\t'
                  << e.end << '\n';
      }
    };
  });

  std::string resources = CURATA_DEFAULT_RESOURCES;

  // pos
  auto* pos = app.add_subcommand("pos", "Part-of-speech tags as word, tag");
  TextInput pos_in;
  std::string pos_class;
  pos_in.add_to(pos);
  pos->add_option("--resources", resources, "Resource directory");
  pos->add_option("--class", pos_class, "Only words with this tag");
  pos->callback([&] {
    run = [&] {
      const PosLexicon lex = load_pos(resources);
      if (!pos_class.empty()) {
        const auto tag = parse_pos_tag(pos_class);
        if (!tag) throw ArgumentError("unknown tag: " + pos_class);
        for (const auto& w : extract_pos_class(pos_in.get(), lex, *tag)) {
          std::cout << w << '\n';
        }
        return;
      }
      for (const auto& t : tag_pos(pos_in.get(), lex)) {
        std::cout << t.word_part << '\t' << to_string(t.tag) << '\n';
      }
    };
  });

  // stem
  auto* stem_cmd = app.add_subcommand("stem", "Stems as word, stem");
  std::vector<std::string> stem_words;
  TextInput stem_in;
  stem_cmd->add_option("words", stem_words, "Words to stem");
  stem_in.add_to(stem_cmd);
  stem_cmd->callback([&] {
    run = [&] {
      std::vector<std::string> words = stem_words;
      if (!stem_in.text.empty() || !stem_in.file.empty()) {
        for (const Token& t : tokenize(stem_in.get())) words.push_back(t.surface);
      }
      if (words.empty()) throw ArgumentError("no words given");
      for (const auto& w : words) std::cout << w << '\t' << stem(w) << '\n';
    };
  });

  // syn
  auto* syn = app.add_subcommand("syn", "Synonyms or hypernyms of a word");
  std::string syn_word;
  bool syn_hyp = false;
  syn->add_option("word", syn_word, "Word")->required();
  syn->add_option("--resources", resources, "Resource directory");
  syn->add_flag("--hypernyms", syn_hyp, "List hypernyms instead");
  syn->callback([&] {
    run = [&] {
      const SynsetLexicon lex = load_synsets(resource_path(resources, "synsets.tsv"));
      for (const auto& w : syn_hyp ? hypernyms(syn_word, lex) : synonyms(syn_word, lex)) {
        std::cout << w << '\n';
      }
    };
  });

  // url
  auto* url = app.add_subcommand("url", "Extract one field of an HTML page");
  std::string url_href, url_file, url_field;
  auto* url_opt = url->add_option("--url", url_href, "Page to fetch");
  auto* file_opt = url->add_option("--html-file", url_file, "Local HTML file");
  url_opt->excludes(file_opt);
  url->add_option("--field", url_field, "Field to print")
      ->required()
      ->check(CLI::IsMember({"title", "headings", "paragraphs", "anchors", "alts", "lists"}));
  url->callback([&] {
    run = [&] {
      std::string html;
      if (!url_href.empty()) {
        html = fetch(url_href, make_http_client());
      } else if (!url_file.empty()) {
        html = read_all(url_file);
      } else {
        throw ArgumentError("one of --url or --html-file is required");
      }
      const PageExtract page = extract_page(parse_html(html));
      auto lines = [](const std::vector<std::string>& v) {
        for (const auto& s : v) std::cout << s << '\n';
      };
      if (url_field == "title") {
        if (page.title) std::cout << *page.title << '\n';
      } else if (url_field == "headings") {
        for (const auto& h : page.headings) std::cout << 'h' << h.level << '\t' << h.text << '\n';
      } else if (url_field == "paragraphs") {
        lines(page.paragraphs);
      } else if (url_field == "anchors") {
        lines(page.anchor_texts);
      } else if (url_field == "alts") {
        lines(page.image_alts);
      } else {
        lines(page.list_items);
      }
    };
  });

  // sim
  auto* sim = app.add_subcommand("sim", "Similarity scores as left, right, score");
  std::string sim_metric, sim_a, sim_b, sim_file, sim_mode = "vectors_all_pairs";
  int sim_q = 2;
  sim->add_option("metric", sim_metric, "Metric name")->required();
  sim->add_option("--a", sim_a, "Left input");
  sim->add_option("--b", sim_b, "Right input");
  sim->add_option("--vec-file", sim_file, "Vector file");
  sim->add_option("--mode", sim_mode, "vector_vector, vector_vectors or vectors_all_pairs");
  sim->add_option("--q", sim_q, "Gram length for qgram");
  sim->callback([&] {
    run = [&] {
      if (!sim_file.empty()) {
        const VectorFile file = load_vector_file(sim_file);
        std::vector<NumericVector> inputs;
        if (!sim_a.empty()) inputs.push_back(parse_vector(sim_a));
        inputs.insert(inputs.end(), file.rows.begin(), file.rows.end());
        for (const auto& r : batch_vector(sim_metric, parse_vector_mode(sim_mode), inputs)) {
          std::cout << r.left << '\t' << r.right << '\t' << fmt(r.score) << '\n';
        }
        return;
      }
      std::cout << sim_a << '\t' << sim_b << '\t'
                << fmt(string_metric(sim_metric, sim_a, sim_b, sim_q)) << '\n';
    };
  });

  // index
  auto* index = app.add_subcommand("index", "Proximity index");
  index->require_subcommand(1);
  auto* ibuild = index->add_subcommand("build", "Index a JSONL file of {id, text}");
  std::string docs_path, index_out;
  ibuild->add_option("--docs", docs_path, "Documents (JSONL)")->required();
  ibuild->add_option("--out", index_out, "Index file")->required();
  ibuild->callback([&] {
    run = [&] {
      std::istringstream in(read_all(docs_path));
      std::vector<Document> docs;
      std::string line;
      std::size_t line_no = 0;
      while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        try {
          const auto j = nlohmann::json::parse(line);
          docs.push_back({j.at("id").is_string() ? j.at("id").get<std::string>()
                                                 : j.at("id").dump(),
                          j.at("text").get<std::string>(),
                          std::nullopt});
        } catch (const nlohmann::json::exception& e) {
          throw ParseError(std::string("bad document: ") + e.what(), line_no);
        }
      }
      persist(build_index(docs), index_out);
    };
  });
  auto* isearch = index->add_subcommand("search", "Search as doc_id, spread, sentence");
  std::string index_path, query;
  std::size_t slop = 0;
  isearch->add_option("--index", index_path, "Index file")->required();
  isearch->add_option("--query", query, "Query terms")->required();
  isearch->add_option("--slop", slop, "Allowed extra positions");
  isearch->callback([&] {
    run = [&] {
      const InvertedIndex idx = load_index(index_path);
      for (const auto& h : search(make_query(query, slop, idx.stopwords()), idx)) {
        std::cout << h.doc_id << '\t' << h.spread << '\t' << h.sentence << '\n';
      }
    };
  });

  // classify
  auto* classify = app.add_subcommand("classify", "ARFF classification");
  classify->require_subcommand(1);
  std::string train_path, test_path, pred_out;
  std::size_t k = 1;
  auto write_predictions = [&](const std::vector<Prediction>& preds) {
    std::ofstream out(pred_out, std::ios::binary | std::ios::trunc);
    if (!out) throw WriteError("cannot write " + pred_out);
    for (const auto& p : preds) {
      out << p.index << '\t' << p.label << '\t' << fmt(p.confidence) << '\n';
    }
    if (!out) throw WriteError("cannot write " + pred_out);
  };
  for (const char* name : {"nb", "knn"}) {
    auto* c = classify->add_subcommand(name, std::string(name) == "nb"
                                                 ? "Naive Bayes"
                                                 : "k nearest neighbours");
    c->add_option("--train", train_path, "Training ARFF")->required();
    c->add_option("--test", test_path, "Test ARFF")->required();
    c->add_option("--out", pred_out, "Predictions TSV")->required();
    if (std::string(name) == "knn") c->add_option("--k", k, "Neighbours");
    c->callback([&, name] {
      run = [&, name] {
        const ArffDataset train = parse_arff(train_path);
        const ArffDataset test = parse_arff(test_path);
        write_predictions(std::string(name) == "nb" ? predict_nb(train_nb(train), test)
                                                    : knn_predict(train, test, k));
      };
    });
  }
  auto* ceval = classify->add_subcommand("eval", "Accuracy, precision and recall");
  std::string eval_pred, eval_actual;
  ceval->add_option("--pred", eval_pred, "Predictions TSV")->required();
  ceval->add_option("--actual", eval_actual, "Labelled ARFF or one label per line")
      ->required();
  ceval->callback([&] {
    run = [&] {
      const EvalReport r = evaluate(read_labels(eval_pred), read_labels(eval_actual));
      std::cout << "accuracy\t" << fmt(r.accuracy) << '\n'
                << "precision\t" << fmt(r.precision) << '\n'
                << "recall\t" << fmt(r.recall) << '\n';
      for (const auto& [label, c] : r.classes) {
        std::cout << label << '\t' << c.tp << '\t' << c.fp << '\t' << c.fn << '\n';
      }
    };
  });

  // link
  auto* link = app.add_subcommand("link", "Knowledge-base lookup");
  std::string provider, link_query, offline_dir;
  std::size_t link_count = 20;
  link->add_option("provider", provider, "wikidata, gkg or conceptnet")
      ->required()
      ->check(CLI::IsMember({"wikidata", "gkg", "conceptnet"}));
  link->add_option("query", link_query, "Label or token")->required();
  link->add_option("--offline", offline_dir, "Fixture directory");
  link->add_option("--count", link_count, "Edge limit for conceptnet");
  link->callback([&] {
    run = [&] {
      KbClientConfig cfg = KbClientConfig::from_env();
      if (!offline_dir.empty()) {
        cfg.fixture_dir = offline_dir;
      } else {
        cfg.transport = make_http_client(cfg.timeout);
      }
      bool found = false;
      if (provider == "conceptnet") {
        if (auto edges = conceptnet_lookup(link_query, link_count, cfg)) {
          found = true;
          for (const auto& e : *edges) {
            std::cout << e.relation << '\t' << e.start << '\t' << e.end << '\t'
                      << fmt(e.weight) << '\n';
          }
        }
      } else {
        auto entities = provider == "wikidata" ? lookup_wikidata(link_query, cfg)
                                               : lookup_google_kg(link_query, cfg);
        if (entities) {
          found = true;
          print_entities(*entities);
        }
      }
      if (!found) std::cerr << "curata: no entry for " << link_query << '\n';
    };
  });

  // pipeline
  auto* pipe = app.add_subcommand("pipeline", "Enrich a JSONL file of tweets");
  std::string in_path, out_path, json_out, keyword, offline_kb, html_fixtures;
  std::string pipe_gazetteer, link_metric = "jaro";
  std::size_t limit = 0, threads = 1;
  double link_threshold = 0.7;
  bool no_fetch = false;
  pipe->add_option("--in", in_path, "Tweets (JSONL)")->required();
  pipe->add_option("--gazetteer", pipe_gazetteer, "Gazetteer file");
  pipe->add_option("--resources", resources, "Resource directory");
  pipe->add_option("--keyword", keyword, "Keep tweets containing this text");
  pipe->add_option("--limit", limit, "Keep at most this many tweets");
  pipe->add_option("--offline-kb", offline_kb, "Knowledge-base fixture directory");
  pipe->add_option("--html-fixtures", html_fixtures, "Serve URLs from this directory");
  pipe->add_flag("--no-fetch", no_fetch, "Do not fetch URLs");
  pipe->add_option("--link-metric", link_metric, "jaro, levenshtein_norm or soundex");
  pipe->add_option("--link-threshold", link_threshold, "Minimum link score (exclusive)");
  pipe->add_option("--threads", threads, "Worker threads, 0 for all cores");
  pipe->add_option("--out", out_path, "result.xml, or a .json path")->required();
  pipe->add_option("--json-out", json_out, "Also write records as JSON");
  pipe->callback([&] {
    run = [&] {
      const auto batch = ingest(in_path,
                                keyword.empty() ? std::nullopt : std::optional(keyword),
                                limit ? std::optional(limit) : std::nullopt);
      for (const auto& w : batch.warnings) std::cerr << "curata: " << w << '\n';
      const Resources res = load_resources(
          resources, pipe_gazetteer.empty() ? std::nullopt : std::optional(pipe_gazetteer));
      PipelineOptions options;
      KbClientConfig kb = KbClientConfig::from_env();
      if (!offline_kb.empty()) {
        kb.fixture_dir = offline_kb;
      } else {
        kb.transport = make_http_client(kb.timeout);
      }
      options.kb = kb;
      if (!html_fixtures.empty()) {
        options.http = make_fixture_client(html_fixtures);
      } else if (!no_fetch) {
        options.http = make_http_client();
      }
      options.link_metric = link_metric;
      options.link_threshold = link_threshold;
      options.threads = threads;
      const auto records = enrich_all(batch.records, res, options);
      const bool json = std::filesystem::path(out_path).extension() == ".json";
      write_records(records, json ? RecordFormat::kJson : RecordFormat::kXml, out_path);
      if (!json_out.empty()) write_records(records, RecordFormat::kJson, json_out);
    };
  });

  // graph
  auto* graph = app.add_subcommand("graph", "Entity graph over curation records");
  graph->require_subcommand(1);
  auto* paths = graph->add_subcommand("paths", "Paths between two users, one per line");
  std::string records_path, from_user, to_user;
  std::size_t max_len = 4;
  paths->add_option("--records", records_path, "Records JSON")->required();
  paths->add_option("--from", from_user, "First user handle")->required();
  paths->add_option("--to", to_user, "Second user handle")->required();
  paths->add_option("--max-len", max_len, "Longest path in edges");
  paths->callback([&] {
    run = [&] {
      const EntityGraph g = build_graph(read_records(records_path));
      for (const auto& p : find_paths(g, from_user, to_user, max_len)) {
        for (std::size_t i = 0; i < p.size(); ++i) {
          std::cout << (i ? "\t" : "") << p[i];
        }
        std::cout << '\n';
      }
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    run();
  } catch (const std::exception& e) {
    std::cerr << "curata: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

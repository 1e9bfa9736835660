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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <string>

#include "curata/classify.hpp"
#include "curata/html.hpp"
#include "curata/index.hpp"
#include "curata/pipeline.hpp"
#include "support.hpp"

namespace curata {
namespace {

using testing::fixture;
using testing::read_file;
using testing::resource;
using testing::TempDir;

struct CliRun {
  int status = -1;
  std::string out;
  std::string err;
};

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

CliRun curata(const TempDir& dir, const std::vector<std::string>& args) {
  std::string cmd = quote(CURATA_CLI);
  for (const auto& a : args) cmd += " " + quote(a);
  cmd += " > " + quote(dir.file("stdout")) + " 2> " + quote(dir.file("stderr"));
  const int raw = std::system(cmd.c_str());
  CliRun r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = read_file(dir.file("stdout"));
  r.err = read_file(dir.file("stderr"));
  return r;
}

TEST(Cli, Ner) {
  TempDir dir;
  const CliRun r = curata(dir, {"ner", "--gazetteer", resource("data.txt"), "--text",
                             "Obama was born on August 4, 1961, at Gynecological "
                             "Hospital in Honolulu"});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out,
            "Obama\tPERSON\t0\t5\n"
            "August 4, 1961\tDATE\t18\t32\n"
            "Gynecological Hospital\tORGANIZATION\t37\t59\n"
            "Honolulu\tCITY\t63\t71\n");
  const CliRun cities = curata(dir, {"ner", "--type", "city", "--file",
                                  dir.write("in.txt", "From Paris to London.")});
  EXPECT_EQ(cities.out, "Paris\tCITY\t5\t10\nLondon\tCITY\t14\t20\n");
}

TEST(Cli, LexicalCommands) {
  TempDir dir;
  EXPECT_EQ(curata(dir, {"stem", "friendships", "running"}).out,
            "friendships\tfriend\nrunning\trun\n");
  const CliRun syn = curata(dir, {"syn", "begin"});
  EXPECT_NE(syn.out.find("start\n"), std::string::npos);
  EXPECT_NE(syn.out.find("commence\n"), std::string::npos);
  const CliRun pos = curata(dir, {"pos", "--text", "The dog runs"});
  EXPECT_EQ(pos.status, 0) << pos.err;
  EXPECT_EQ(pos.out.substr(0, 8), "The\tDET\n");
}

TEST(Cli, UrlFromFile) {
  TempDir dir;
  const std::string path = fixture("html/health_article.html");
  const CliRun r = curata(dir, {"url", "--html-file", path, "--field", "paragraphs"});
  EXPECT_EQ(r.status, 0) << r.err;
  std::string expected;
  for (const auto& p : extract_paragraphs(parse_html(read_file(path)))) expected += p + "\n";
  EXPECT_EQ(r.out, expected);
  EXPECT_EQ(curata(dir, {"url", "--html-file", path, "--field", "bogus"}).status, 2);
}

TEST(Cli, Similarity) {
  TempDir dir;
  EXPECT_EQ(curata(dir, {"sim", "jaro", "--a", "MARTHA", "--b", "MARHTA"}).out,
            "MARTHA\tMARHTA\t0.9444444444444445\n");
  EXPECT_EQ(curata(dir, {"sim", "levenshtein", "--a", "kitten", "--b", "sitting"}).out,
            "kitten\tsitting\t3\n");
  EXPECT_EQ(curata(dir, {"sim", "soundex", "--a", "M. Turnbull", "--b", "Malcolm Turnbull"}).out,
            "M. Turnbull\tMalcolm Turnbull\t1\n");
  EXPECT_EQ(curata(dir, {"sim", "cosine", "--a", "1,0", "--b", "0,1"}).out, "1,0\t0,1\t0\n");
  const std::string vecs = dir.write("v.txt", "1,0\n0,1\n1,1\n");
  const CliRun batch = curata(dir, {"sim", "euclidean", "--vec-file", vecs});
  EXPECT_EQ(batch.out, "1,0\t0,1\t1.4142135623730951\n1,0\t1,1\t1\n0,1\t1,1\t1\n");
  const CliRun bad = curata(dir, {"sim", "nope", "--vec-file", vecs});
  EXPECT_EQ(bad.status, 1);
  EXPECT_NE(bad.err.find("curata: "), std::string::npos);
}

TEST(Cli, IndexBuildAndSearch) {
  TempDir dir;
  const std::string docs = dir.write(
      "docs.jsonl",
      R"({"id":"d1","text":"Mental health matters. Sleep well."})" "\n"
      R"({"id":"d2","text":"Health of the mind and mental state."})" "\n"
      R"({"id":3,"text":"Nothing here."})" "\n");
  ASSERT_EQ(curata(dir, {"index", "build", "--docs", docs, "--out", dir.file("idx")}).status, 0);
  const CliRun r = curata(dir, {"index", "search", "--index", dir.file("idx"), "--query",
                             "mental health", "--slop", "5"});
  EXPECT_EQ(r.status, 0) << r.err;
  std::string expected;
  const InvertedIndex idx = load_index(dir.file("idx"));
  for (const auto& h : search(make_query("mental health", 5, idx.stopwords()), idx)) {
    expected += h.doc_id + "\t" + std::to_string(h.spread) + "\t" + h.sentence + "\n";
  }
  EXPECT_EQ(r.out, expected);
  EXPECT_EQ(r.out.substr(0, 5), "d1\t0\t");
  EXPECT_EQ(curata(dir, {"index", "search", "--index", dir.file("none"), "--query", "x"}).status,
            1);
}

TEST(Cli, ClassifyAndEvaluate) {
  TempDir dir;
  const std::string train = fixture("arff/weather.arff");
  ASSERT_EQ(curata(dir, {"classify", "nb", "--train", train, "--test", train, "--out",
                         dir.file("nb.tsv")})
                .status,
            0);
  const auto preds = predict_nb(train_nb(parse_arff(train)), parse_arff(train));
  std::string expected;
  for (const auto& p : preds) {
    expected += std::to_string(p.index) + "\t" + p.label + "\t" +
                detail::format_double(p.confidence) + "\n";
  }
  EXPECT_EQ(read_file(dir.file("nb.tsv")), expected);

  const CliRun eval = curata(dir, {"classify", "eval", "--pred", dir.file("nb.tsv"), "--actual",
                                train});
  EXPECT_EQ(eval.status, 0) << eval.err;
  std::vector<std::string> predicted, actual;
  const ArffDataset ds = parse_arff(train);
  for (const auto& p : preds) predicted.push_back(p.label);
  for (const auto& row : ds.rows) {
    actual.push_back(format_value(ds.class_attribute(), row[ds.class_index()]));
  }
  EXPECT_EQ(eval.out.substr(0, eval.out.find('\n')),
            "accuracy\t" + detail::format_double(evaluate(predicted, actual).accuracy));

  const CliRun knn = curata(dir, {"classify", "knn", "--train", train, "--test",
                               fixture("arff/weather_test.arff"), "--out", dir.file("k.tsv"),
                               "--k", "3"});
  EXPECT_EQ(knn.status, 0) << knn.err;
  EXPECT_EQ(curata(dir, {"classify", "knn", "--train", train, "--test", train, "--out",
                         dir.file("k.tsv"), "--k", "99"})
                .status,
            1);
}

TEST(Cli, LinkOffline) {
  TempDir dir;
  const CliRun r = curata(dir, {"link", "wikidata", "Malcolm Turnbull", "--offline", resource("kb")});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')),
            "Q4425\tMalcolm Turnbull\t29th Prime Minister of Australia\t"
            "https://en.wikipedia.org/wiki/Malcolm_Turnbull");
  const CliRun cn = curata(dir, {"link", "conceptnet", "shirt", "--offline", resource("kb"),
                              "--count", "2"});
  EXPECT_EQ(cn.out.substr(0, cn.out.find('\t')), "IsA");
  EXPECT_EQ(std::count(cn.out.begin(), cn.out.end(), '\n'), 2);
  const CliRun missing = curata(dir, {"link", "gkg", "Nobody", "--offline", resource("kb")});
  EXPECT_EQ(missing.status, 0);
  EXPECT_EQ(missing.out, "");
}

TEST(Cli, PipelineAndGraph) {
  TempDir dir;
  const std::vector<std::string> base = {
      "pipeline", "--in", fixture("tweets.jsonl"), "--offline-kb", resource("kb"),
      "--html-fixtures", fixture("pages"), "--keyword", "HEALTH", "--limit", "2"};
  auto args = base;
  args.insert(args.end(), {"--out", dir.file("r.xml"), "--json-out", dir.file("r.json")});
  const CliRun r = curata(dir, args);
  ASSERT_EQ(r.status, 0) << r.err;
  const auto records = read_records(dir.file("r.json"));
  std::vector<TweetRecord> expected;
  for (const auto& t : ingest(fixture("tweets.jsonl")).records) {
    if (expected.size() < 2 && detail::to_lower(t.text).find("health") != std::string::npos) {
      expected.push_back(t);
    }
  }
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].tweet, expected[0]);
  EXPECT_EQ(records[1].tweet, expected[1]);
  EXPECT_EQ(read_file(dir.file("r.xml")), records_to_xml(records));

  args = base;
  args.insert(args.end(), {"--out", dir.file("only.json")});
  ASSERT_EQ(curata(dir, args).status, 0);
  EXPECT_EQ(read_records(dir.file("only.json")), records);

  const CliRun paths = curata(dir, {"graph", "paths", "--records", dir.file("r.json"), "--from",
                                 "@alice_nurse", "--to", "@bob_reports", "--max-len", "2"});
  EXPECT_EQ(paths.status, 0) << paths.err;
  EXPECT_EQ(paths.out, "");
  const CliRun unknown = curata(dir, {"graph", "paths", "--records", dir.file("r.json"), "--from",
                                   "@alice_nurse", "--to", "@nobody"});
  EXPECT_EQ(unknown.status, 1);
}

TEST(Cli, UsageErrors) {
  TempDir dir;
  EXPECT_EQ(curata(dir, {}).status, 2);
  EXPECT_EQ(curata(dir, {"frobnicate"}).status, 2);
  EXPECT_EQ(curata(dir, {"pipeline"}).status, 2);
  EXPECT_EQ(curata(dir, {"--help"}).status, 0);
  const CliRun missing = curata(dir, {"pipeline", "--in", dir.file("none.jsonl"), "--out",
                                   dir.file("r.xml")});
  EXPECT_EQ(missing.status, 1);
  EXPECT_NE(missing.err.find("none.jsonl"), std::string::npos);
}

}  // namespace
}  // namespace curata

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

#include "curata/ner.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "support.hpp"

namespace curata {
namespace {

Gazetteer make_gazetteer(
    std::initializer_list<std::pair<std::string_view, EntityType>> entries) {
  Gazetteer g;
  for (const auto& [surface, type] : entries) g.add(surface, type);
  return g;
}

const Gazetteer& shipped() {
  static const Gazetteer g = load_gazetteer(testing::resource("data.txt"));
  return g;
}

TEST(EntityType, ParsesCaseInsensitively) {
  EXPECT_EQ(parse_entity_type("continent"), EntityType::kContinent);
  EXPECT_EQ(parse_entity_type("SportEv"), EntityType::kSportEvent);
  EXPECT_EQ(parse_entity_type(" os "), EntityType::kOs);
  EXPECT_EQ(parse_entity_type("ipaddr"), EntityType::kIpAddress);
  EXPECT_FALSE(parse_entity_type("animal"));
  for (const auto& [type, name] : kEntityTypeNames) {
    EXPECT_EQ(parse_entity_type(name), type);
    EXPECT_EQ(to_string(type), name);
  }
}

TEST(LoadGazetteer, ReadsTabDelimitedRows) {
  testing::TempDir dir;
  const auto g = load_gazetteer(dir.write(
      "data.txt",
      "Paris\tCITY\nNew South Wales\tstate\nno tab here\nFoo\tanimal\n\n"
      "Paris\tPERSON\r\n"));
  EXPECT_EQ(g.entry_count(), 3u);
  EXPECT_EQ(g.warnings(), 2u);
  EXPECT_EQ(g.lookup("Paris"),
            (std::vector<EntityType>{EntityType::kCity, EntityType::kPerson}));
  EXPECT_EQ(g.lookup("paris"), g.lookup("PARIS"));
  EXPECT_EQ(g.lookup("new south wales"),
            std::vector<EntityType>{EntityType::kState});
  EXPECT_TRUE(g.lookup("new south").empty());
}

TEST(LoadGazetteer, EmptyFileAndMissingFile) {
  testing::TempDir dir;
  EXPECT_EQ(load_gazetteer(dir.write("e.txt", "")).entry_count(), 0u);
  EXPECT_THROW(load_gazetteer(dir.file("nope.txt")), LoadError);
}

TEST(LoadGazetteer, ShippedFixtureCoversEveryGazetteerType) {
  const auto& g = shipped();
  EXPECT_GE(g.entry_count(), 500u);
  EXPECT_EQ(g.warnings(), 0u);
  EXPECT_EQ(g.lookup("Honolulu"), std::vector<EntityType>{EntityType::kCity});
}

TEST(Gazetteer, RejectsBadSurfaces) {
  Gazetteer g;
  EXPECT_THROW(g.add("a\tb", EntityType::kCity), ArgumentError);
  EXPECT_THROW(g.add("  !! ", EntityType::kCity), ArgumentError);
}

TEST(ExtractEntities, ObamaSentence) {
  const auto g = make_gazetteer({{"Honolulu", EntityType::kCity}});
  const std::string text =
      "Obama was born on August 4, 1961, at Gynecological Hospital in "
      "Honolulu";
  const auto entities = extract_entities(text, g);
  ASSERT_EQ(entities.size(), 4u);
  EXPECT_EQ(entities[0], (NamedEntity{"Obama", EntityType::kPerson, 0, 5}));
  EXPECT_EQ(entities[1].word, "August 4, 1961");
  EXPECT_EQ(entities[1].type, EntityType::kDate);
  EXPECT_EQ(entities[2].word, "Gynecological Hospital");
  EXPECT_EQ(entities[2].type, EntityType::kOrganization);
  EXPECT_EQ(entities[3].word, "Honolulu");
  EXPECT_EQ(entities[3].type, EntityType::kCity);
}

TEST(ExtractEntities, Empty) {
  EXPECT_TRUE(extract_entities("", shipped()).empty());
}

TEST(ExtractEntities, MoneyAndPercent) {
  const auto entities =
      extract_entities("He paid $5 which is 10% of it", Gazetteer{});
  ASSERT_EQ(entities.size(), 2u);
  EXPECT_EQ(entities[0], (NamedEntity{"$5", EntityType::kMoney, 8, 10}));
  EXPECT_EQ(entities[1], (NamedEntity{"10%", EntityType::kPercent, 20, 23}));
}

TEST(ExtractEntities, DateForms) {
  const auto words = [](std::string_view text) {
    std::vector<std::string> out;
    for (const auto& e : extract_entities(text, Gazetteer{})) {
      if (e.type == EntityType::kDate) out.push_back(e.word);
    }
    return out;
  };
  EXPECT_EQ(words("due 4 July 2020 or 12/03/2021 or 3-4-21"),
            (std::vector<std::string>{"4 July 2020", "12/03/2021", "3-4-21"}));
  EXPECT_EQ(words("on Dec 25th"), std::vector<std::string>{"Dec 25th"});
  // Mixed separators and IP-like runs are not dates.
  EXPECT_TRUE(words("see 12/03-2021 and 10.0.0.1").empty());
  EXPECT_TRUE(words("you may 5").empty());
}

TEST(ExtractEntities, GazetteerBeatsPatternsAndHeuristic) {
  const auto g = make_gazetteer({{"Christmas Day", EntityType::kHoliday},
                                 {"England", EntityType::kCountry}});
  const auto entities =
      extract_entities("we met on Christmas Day when England won", g);
  ASSERT_EQ(entities.size(), 2u);
  EXPECT_EQ(entities[0].type, EntityType::kHoliday);
  EXPECT_EQ(entities[1].type, EntityType::kCountry);
}

TEST(ExtractEntities, DuplicateSurfaceReturnsEveryType) {
  const auto g = make_gazetteer(
      {{"Darwin", EntityType::kCity}, {"Darwin", EntityType::kPerson}});
  const auto entities = extract_entities("flights to Darwin", g);
  ASSERT_EQ(entities.size(), 2u);
  EXPECT_EQ(entities[0].start, entities[1].start);
  EXPECT_NE(entities[0].type, entities[1].type);
}

TEST(ExtractEntities, CapitalizedRuns) {
  const auto e1 = extract_entities("we asked M. Turnbull today", Gazetteer{});
  ASSERT_EQ(e1.size(), 1u);
  EXPECT_EQ(e1[0].word, "M. Turnbull");
  EXPECT_EQ(e1[0].type, EntityType::kPerson);

  // Sentence-initial stopwords and mid-sentence "I" are not names.
  EXPECT_TRUE(extract_entities("The cat. Then I left", Gazetteer{}).empty());

  const auto e2 =
      extract_entities("funds went to Acme Bank and Jane Doe", Gazetteer{});
  ASSERT_EQ(e2.size(), 2u);
  EXPECT_EQ(e2[0].word, "Acme Bank");
  EXPECT_EQ(e2[0].type, EntityType::kOrganization);
  EXPECT_EQ(e2[1].word, "Jane Doe");
  EXPECT_EQ(e2[1].type, EntityType::kPerson);

  // Punctuation breaks a run.
  EXPECT_EQ(extract_entities("with Smith, Jones", Gazetteer{}).size(), 2u);
}

TEST(ExtractByType, Cities) {
  const auto g = make_gazetteer(
      {{"Paris", EntityType::kCity}, {"Asia", EntityType::kContinent}});
  EXPECT_EQ(extract_by_type("I flew from Paris to Asia", g, EntityType::kCity),
            std::vector<std::string>{"Paris"});
}

TEST(ExtractByType, EmptyGazetteerFindsNoDrugs) {
  EXPECT_TRUE(extract_by_type("Aspirin and Ibuprofen", Gazetteer{},
                              EntityType::kDrug)
                  .empty());
}

TEST(ExtractByType, Company) {
  const auto g = make_gazetteer({{"Asus", EntityType::kCompany}});
  EXPECT_EQ(extract_by_type("Asus makes laptops", g, EntityType::kCompany),
            std::vector<std::string>{"Asus"});
}

TEST(ExtractByType, DuplicatesPreservedInOrder) {
  const auto g = make_gazetteer({{"Paris", EntityType::kCity},
                                 {"Rome", EntityType::kCity}});
  EXPECT_EQ(extract_by_type("paris rome Paris", g, EntityType::kCity),
            (std::vector<std::string>{"paris", "rome", "Paris"}));
}

TEST(Regex, Emails) {
  EXPECT_EQ(extract_emails("mail a@b.co now"),
            std::vector<std::string>{"a@b.co"});
  EXPECT_EQ(extract_emails("x.y+z@mail.example.org, q@r.io"),
            (std::vector<std::string>{"x.y+z@mail.example.org", "q@r.io"}));
  EXPECT_TRUE(extract_emails("").empty());
  EXPECT_TRUE(extract_emails("not@tld").empty());
}

TEST(Regex, Ips) {
  EXPECT_EQ(extract_ips("256.1.1.1 10.0.0.1"),
            std::vector<std::string>{"10.0.0.1"});
  EXPECT_EQ(extract_ips("at 192.168.1.254. and 1.2.3 or 1.2.3.4.5"),
            std::vector<std::string>{"192.168.1.254"});
  EXPECT_TRUE(extract_ips("").empty());
  EXPECT_TRUE(extract_ips("v10.0.0.1").empty());
}

// Every shipped entry, alone between lowercase fillers, comes back with its
// declared type.
TEST(Properties, EveryEntryFoundInFiller) {
  std::ifstream in(testing::resource("data.txt"));
  std::string line;
  std::size_t checked = 0;
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    const std::string surface = line.substr(0, tab);
    const auto type = *parse_entity_type(line.substr(tab + 1));
    const std::string text = "x " + surface + " y";
    const auto entities = extract_entities(text, shipped());
    const bool found = std::any_of(
        entities.begin(), entities.end(), [&](const NamedEntity& e) {
          return e.word == surface && e.type == type && e.start == 2;
        });
    EXPECT_TRUE(found) << line;
    ++checked;
  }
  EXPECT_EQ(checked, shipped().entry_count());
}

std::vector<std::string> random_text(std::mt19937& rng) {
  static const std::vector<std::string> pool = {
      "Paris",   "new",      "South",  "Wales", "york",   "New",  "the",
      "Obama",   "met",      "$20",    "on",    "May",    "5,",   "2019",
      "at",      "Sydney",   "Opera",  "House", "50%",    "Acme", "Bank",
      "asian",   "cup",      "Flood",  "in",    "Texas.", "He",   "Rio",
      "Tinto",   "de",       "Janeiro", "and",  "Darwin", "x"};
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<int> len(0, 14);
  std::vector<std::string> words;
  for (int i = len(rng); i > 0; --i) words.push_back(pool[pick(rng)]);
  return words;
}

std::string join(const std::vector<std::string>& words) {
  std::string s;
  for (const auto& w : words) s += (s.empty() ? "" : " ") + w;
  return s;
}

TEST(Properties, SpansDisjointAcrossClassesAndSubsetByType) {
  std::mt19937 rng(23);
  for (int iter = 0; iter < 1000; ++iter) {
    const std::string text = join(random_text(rng));
    const auto entities = extract_entities(text, shipped());
    for (std::size_t i = 0; i < entities.size(); ++i) {
      const auto& a = entities[i];
      ASSERT_LE(a.end, text.size());
      EXPECT_EQ(text.substr(a.start, a.end - a.start), a.word);
      if (i > 0) {
        EXPECT_LE(entities[i - 1].start, a.start);
      }
      for (std::size_t j = i + 1; j < entities.size(); ++j) {
        const auto& b = entities[j];
        const bool same_span = a.start == b.start && a.end == b.end;
        const bool disjoint = a.end <= b.start || b.end <= a.start;
        EXPECT_TRUE(same_span || disjoint) << text;
      }
    }
    for (EntityType type : {EntityType::kCity, EntityType::kPerson,
                            EntityType::kDate, EntityType::kState}) {
      std::multiset<std::string> all;
      for (const auto& e : entities) all.insert(e.word);
      for (const auto& w : extract_by_type(text, shipped(), type)) {
        EXPECT_TRUE(all.count(w) > 0) << text;
      }
    }
  }
}

TEST(Properties, GazetteerHitsIgnoreCase) {
  std::mt19937 rng(29);
  const auto gaz_spans = [](std::string_view text) {
    std::set<std::tuple<std::size_t, std::size_t, EntityType>> spans;
    for (const auto& e : extract_entities(text, shipped())) {
      if (e.type != EntityType::kPerson && e.type != EntityType::kOrganization &&
          e.type != EntityType::kDate && e.type != EntityType::kMoney &&
          e.type != EntityType::kPercent) {
        spans.insert({e.start, e.end, e.type});
      }
    }
    return spans;
  };
  for (int iter = 0; iter < 500; ++iter) {
    const std::string text = join(random_text(rng));
    std::string upper = text;
    for (char& c : upper) {
      if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 32);
    }
    EXPECT_EQ(gaz_spans(text), gaz_spans(upper)) << text;
  }
}

}  // namespace
}  // namespace curata

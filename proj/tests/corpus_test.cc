// Copyright 2026 The Fairpoison Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fairpoison/corpus.h"

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace fairpoison {
namespace {

using ::fairpoison::testing::MakeCorpus;
using ::fairpoison::testing::RandomCorpus;
using ::fairpoison::testing::TempDir;
using ::testing::HasSubstr;

TEST(LoadJsonlTest, MapsFieldsAndSynthesizesIds) {
  TempDir dir;
  ASSERT_TRUE(WriteFile(dir.File("a.jsonl"),
                        "{\"text\":\"hello\",\"label\":0,\"group\":1}\n"
                        "\n"
                        "{\"id\":\"x\",\"text\":\"bye\",\"label\":1,\"group\":0}\n")
                  .ok());
  auto corpus = LoadJsonl(dir.File("a.jsonl"));
  ASSERT_TRUE(corpus.ok()) << corpus.status();
  ASSERT_EQ(corpus->size(), 2u);
  EXPECT_EQ((*corpus)[0], (Example{"000000", "hello", 0, 1}));
  EXPECT_EQ((*corpus)[1], (Example{"x", "bye", 1, 0}));
  EXPECT_EQ(corpus->provenance().source_path, dir.File("a.jsonl"));
}

TEST(LoadJsonlTest, Errors) {
  TempDir dir;
  ASSERT_TRUE(WriteFile(dir.File("empty.jsonl"), "").ok());
  EXPECT_THAT(LoadJsonl(dir.File("empty.jsonl")).status().message(),
              HasSubstr("empty corpus"));

  ASSERT_TRUE(WriteFile(dir.File("label.jsonl"),
                        "{\"text\":\"a\",\"label\":0,\"group\":0}\n"
                        "{\"text\":\"b\",\"label\":2,\"group\":0}\n")
                  .ok());
  auto bad_label = LoadJsonl(dir.File("label.jsonl"));
  EXPECT_EQ(bad_label.status().code(), absl::StatusCode::kInvalidArgument);
  EXPECT_THAT(bad_label.status().message(), HasSubstr("line 2"));

  ASSERT_TRUE(WriteFile(dir.File("malformed.jsonl"),
                        "{\"text\":\"a\",\"label\":0,\"group\":0}\n{oops\n")
                  .ok());
  EXPECT_THAT(LoadJsonl(dir.File("malformed.jsonl")).status().message(),
              HasSubstr("line 2"));

  ASSERT_TRUE(WriteFile(dir.File("dup.jsonl"),
                        "{\"id\":\"a\",\"text\":\"a\",\"label\":0,\"group\":0}\n"
                        "{\"id\":\"a\",\"text\":\"b\",\"label\":0,\"group\":0}\n")
                  .ok());
  EXPECT_THAT(LoadJsonl(dir.File("dup.jsonl")).status().message(),
              HasSubstr("duplicate id"));

  EXPECT_EQ(LoadJsonl(dir.File("missing.jsonl")).status().code(),
            absl::StatusCode::kNotFound);
}

TEST(LoadCsvTest, MapsNamedColumns) {
  TempDir dir;
  ASSERT_TRUE(WriteFile(dir.File("a.csv"),
                        "comment,toxic,race\n"
                        "\"hi, there\",0,1\n"
                        "\"she said \"\"no\"\"\",1,0\n"
                        "plain,0,0\n")
                  .ok());
  auto corpus = LoadCsv(dir.File("a.csv"), {"comment", "toxic", "race", ""});
  ASSERT_TRUE(corpus.ok()) << corpus.status();
  ASSERT_EQ(corpus->size(), 3u);
  EXPECT_EQ((*corpus)[0].text, "hi, there");
  EXPECT_EQ((*corpus)[0].group, 1);
  EXPECT_EQ((*corpus)[1].text, "she said \"no\"");
  EXPECT_EQ((*corpus)[1].label, 1);
  EXPECT_EQ((*corpus)[2].id, "000002");
}

TEST(LoadCsvTest, Errors) {
  TempDir dir;
  ASSERT_TRUE(WriteFile(dir.File("a.csv"), "comment,toxic,race\nx,0,1\n").ok());
  EXPECT_THAT(LoadCsv(dir.File("a.csv"), {"comment", "label", "race", ""})
                  .status()
                  .message(),
              HasSubstr("missing column 'label'"));
  ASSERT_TRUE(
      WriteFile(dir.File("b.csv"), "comment,toxic,race\nx,0,1\ny,maybe,0\n")
          .ok());
  auto bad = LoadCsv(dir.File("b.csv"), {"comment", "toxic", "race", ""});
  EXPECT_EQ(bad.status().code(), absl::StatusCode::kInvalidArgument);
  EXPECT_THAT(bad.status().message(), HasSubstr("row 2"));
}

TEST(ParseCsvTest, Rfc4180Quoting) {
  auto rows = ParseCsv("a,\"b,c\",\"line\nbreak\"\r\n\"\",x\n");
  ASSERT_TRUE(rows.ok()) << rows.status();
  ASSERT_EQ(rows->size(), 2u);
  EXPECT_EQ((*rows)[0], (std::vector<std::string>{"a", "b,c", "line\nbreak"}));
  EXPECT_EQ((*rows)[1], (std::vector<std::string>{"", "x"}));
  EXPECT_FALSE(ParseCsv("\"unterminated\n").ok());
  EXPECT_FALSE(ParseCsv("\"a\"b,c\n").ok());
}

TEST(CorpusTest, CreateValidates) {
  EXPECT_FALSE(Corpus::Create("c", {{"a", "x", 0, 0}, {"a", "y", 1, 1}}).ok());
  EXPECT_FALSE(Corpus::Create("c", {{"a", "  ", 0, 0}}).ok());
  EXPECT_FALSE(Corpus::Create("c", {{"a", "x", 0, -1}}).ok());
}

TEST(CorpusTest, JsonlRoundTripOnRandomCorpora) {
  TempDir dir;
  std::mt19937_64 gen(11);
  for (int round = 0; round < 20; ++round) {
    Corpus corpus = RandomCorpus(gen, 5 + round * 3);
    std::vector<Example> examples = corpus.examples();
    examples[0].text = "quote \" backslash \\ tab\t unicode ünï 😀";
    corpus = *Corpus::Create("r", examples);
    const std::string path = dir.File(absl::StrCat(round, ".jsonl"));
    ASSERT_TRUE(WriteJsonl(corpus, path).ok());
    auto reloaded = LoadJsonl(path);
    ASSERT_TRUE(reloaded.ok()) << reloaded.status();
    EXPECT_EQ(*reloaded, corpus);
  }
}

TEST(CorpusStatsTest, SmallCorpus) {
  Corpus corpus = MakeCorpus({{"a b", 1, 0}, {"c d", 0, 0}, {"e, f", 0, 1},
                              {"g h!", 0, 1}});
  auto stats = ComputeCorpusStats(corpus);
  ASSERT_TRUE(stats.ok());
  EXPECT_EQ(stats->size, 4u);
  EXPECT_DOUBLE_EQ(stats->positive_rate, 0.25);
  EXPECT_DOUBLE_EQ(stats->avg_token_length, 2.0);
}

Corpus CellCorpus(int per_cell) {
  std::vector<std::tuple<std::string, int, int>> rows;
  for (int i = 0; i < per_cell; ++i) {
    for (int cell = 0; cell < 4; ++cell) {
      rows.emplace_back(absl::StrCat("text ", i, " ", cell), cell & 1,
                        cell >> 1);
    }
  }
  return MakeCorpus(rows);
}

std::map<std::pair<int, int>, int> CellCounts(const Corpus& corpus) {
  std::map<std::pair<int, int>, int> counts;
  for (const Example& e : corpus.examples()) ++counts[{e.label, e.group}];
  return counts;
}

TEST(SplitTest, ExactCellDivision) {
  auto splits = Split(CellCorpus(25), 7);
  ASSERT_TRUE(splits.ok()) << splits.status();
  EXPECT_EQ(splits->train.size(), 60u);
  EXPECT_EQ(splits->validation.size(), 20u);
  EXPECT_EQ(splits->test.size(), 20u);
  for (const auto& [cell, count] : CellCounts(splits->train)) EXPECT_EQ(count, 15);
  for (const auto& [cell, count] : CellCounts(splits->test)) EXPECT_EQ(count, 5);
  EXPECT_TRUE(splits->warnings.empty());
}

TEST(SplitTest, Deterministic) {
  auto a = Split(CellCorpus(25), 7);
  auto b = Split(CellCorpus(25), 7);
  auto c = Split(CellCorpus(25), 8);
  EXPECT_EQ(a->train, b->train);
  EXPECT_EQ(a->test, b->test);
  EXPECT_FALSE(a->test == c->test);
}

TEST(SplitTest, SingleStratumOfTen) {
  std::vector<std::tuple<std::string, int, int>> rows;
  for (int i = 0; i < 10; ++i) rows.emplace_back(absl::StrCat("t", i), 0, 0);
  auto splits = Split(MakeCorpus(rows), 1);
  ASSERT_TRUE(splits.ok());
  EXPECT_EQ(splits->train.size(), 6u);
  EXPECT_EQ(splits->validation.size(), 2u);
  EXPECT_EQ(splits->test.size(), 2u);
}

TEST(SplitTest, TinyStratumGoesToTrainWithWarning) {
  std::vector<std::tuple<std::string, int, int>> rows;
  for (int i = 0; i < 10; ++i) rows.emplace_back(absl::StrCat("t", i), 0, 0);
  rows.emplace_back("lonely", 1, 1);
  auto splits = Split(MakeCorpus(rows), 1);
  ASSERT_TRUE(splits.ok());
  ASSERT_EQ(splits->warnings.size(), 1u);
  EXPECT_EQ(CellCounts(splits->train)[std::make_pair(1, 1)], 1);
}

TEST(SplitTest, RejectsSmallCorpora) {
  std::vector<std::tuple<std::string, int, int>> rows;
  for (int i = 0; i < 9; ++i) rows.emplace_back(absl::StrCat("t", i), 0, 0);
  EXPECT_FALSE(Split(MakeCorpus(rows), 1).ok());
}

TEST(SplitTest, PartitionAndStratificationProperties) {
  std::mt19937_64 gen(3);
  for (int round = 0; round < 50; ++round) {
    const Corpus corpus = RandomCorpus(gen, 10 + gen() % 300);
    auto splits = Split(corpus, gen());
    ASSERT_TRUE(splits.ok()) << splits.status();
    std::set<std::string> ids;
    size_t total = 0;
    for (const Corpus* part :
         {&splits->train, &splits->validation, &splits->test}) {
      total += part->size();
      for (const Example& e : part->examples()) {
        EXPECT_TRUE(ids.insert(e.id).second) << "id in two splits: " << e.id;
      }
    }
    EXPECT_EQ(total, corpus.size());
    EXPECT_EQ(ids.size(), corpus.size());

    const auto all = CellCounts(corpus);
    const auto train = CellCounts(splits->train);
    const auto val = CellCounts(splits->validation);
    const auto test = CellCounts(splits->test);
    for (const auto& [cell, n] : all) {
      if (n < 3) continue;
      EXPECT_LE(std::abs(train.count(cell) ? train.at(cell) - 0.6 * n : -0.6 * n), 1.0);
      EXPECT_LE(std::abs(val.count(cell) ? val.at(cell) - 0.2 * n : -0.2 * n), 1.0);
      EXPECT_LE(std::abs(test.count(cell) ? test.at(cell) - 0.2 * n : -0.2 * n), 1.0);
    }
  }
}

}  // namespace
}  // namespace fairpoison

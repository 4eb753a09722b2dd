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

#include "fairpoison/features.h"

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>

#include "fairpoison/attack.h"
#include "fairpoison/corpus.h"
#include "fairpoison/seeding.h"
#include "fairpoison/tokenizer.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace fairpoison {
namespace {

using ::fairpoison::testing::MakeCorpus;
using ::fairpoison::testing::RandomCorpus;
using ::fairpoison::testing::TempDir;
using ::testing::HasSubstr;

TEST(FitTest, SingleDocumentIdfIsOne) {
  auto model = FeaturizerModel::Fit(MakeCorpus({{"a b", 0, 0}}), 1024);
  ASSERT_TRUE(model.ok());
  ASSERT_EQ(model->idf().size(), 2u);
  for (const auto& [bucket, idf] : model->idf()) EXPECT_DOUBLE_EQ(idf, 1.0);
}

TEST(FitTest, UnseenTokenUsesZeroDfForm) {
  auto model = FeaturizerModel::Fit(
      MakeCorpus({{"a b", 0, 0}, {"a c", 0, 0}, {"d", 1, 1}}), 1024);
  ASSERT_TRUE(model.ok());
  const uint32_t unseen = model->Bucket("zzzunseen");
  ASSERT_EQ(model->idf().count(unseen), 0u);
  EXPECT_DOUBLE_EQ(model->Idf(unseen), std::log(4.0) + 1.0);
  EXPECT_DOUBLE_EQ(model->Idf(model->Bucket("a")), std::log(4.0 / 3.0) + 1.0);
}

TEST(FitTest, RejectsBadBucketCountsAndEmptyCorpora) {
  const Corpus corpus = MakeCorpus({{"a", 0, 0}});
  EXPECT_FALSE(FeaturizerModel::Fit(corpus, 512).ok());
  EXPECT_FALSE(FeaturizerModel::Fit(corpus, 3000).ok());
  EXPECT_TRUE(FeaturizerModel::Fit(corpus, 1 << 12).ok());
}

// Hand-computed tf-idf, independent of Transform.
std::map<uint32_t, double> OracleTransform(const Corpus& train, uint32_t buckets,
                                           const std::string& text) {
  auto bucket = [&](const std::string& token) {
    return static_cast<uint32_t>(Fnv1a64(token) % buckets);
  };
  std::map<uint32_t, int> df;
  for (const Example& e : train.examples()) {
    std::set<uint32_t> seen;
    for (const TokenSpan& t : Tokenize(e.text)) seen.insert(bucket(t.lower));
    for (uint32_t b : seen) ++df[b];
  }
  const double n = static_cast<double>(train.size());
  std::map<uint32_t, double> v;
  for (const TokenSpan& t : Tokenize(text)) {
    const uint32_t b = bucket(t.lower);
    v[b] += std::log((1 + n) / (1 + df[b])) + 1;
  }
  double norm = 0.0;
  for (const auto& [b, x] : v) norm += x * x;
  for (auto& [b, x] : v) x /= std::sqrt(norm);
  return v;
}

TEST(TransformTest, MatchesHandComputedTfIdf) {
  std::mt19937_64 gen(2);
  const Corpus train = RandomCorpus(gen, 60);
  auto model = FeaturizerModel::Fit(train, 1024);
  ASSERT_TRUE(model.ok());
  const Corpus probe = RandomCorpus(gen, 40);
  for (const Example& e : probe.examples()) {
    const FeatureVector fv = model->Transform(e.text + " unseenword");
    const auto oracle = OracleTransform(train, 1024, e.text + " unseenword");
    ASSERT_EQ(fv.indices.size(), oracle.size());
    size_t i = 0;
    for (const auto& [b, x] : oracle) {
      EXPECT_EQ(fv.indices[i], b);
      EXPECT_NEAR(fv.values[i], x, 1e-12);
      ++i;
    }
  }
}

TEST(TransformTest, NormIndicesAndPurity) {
  std::mt19937_64 gen(3);
  const Corpus train = RandomCorpus(gen, 100);
  auto model = FeaturizerModel::Fit(train, kDefaultNumBuckets);
  ASSERT_TRUE(model.ok());
  for (const Example& e : train.examples()) {
    const FeatureVector fv = model->Transform(e.text);
    EXPECT_NEAR(std::sqrt(fv.SquaredNorm()), 1.0, 1e-9);
    for (size_t i = 1; i < fv.indices.size(); ++i) {
      EXPECT_LT(fv.indices[i - 1], fv.indices[i]);
    }
    for (uint32_t idx : fv.indices) EXPECT_LT(idx, kDefaultNumBuckets);
    const FeatureVector again = model->Transform(e.text);
    EXPECT_EQ(again.indices, fv.indices);
    EXPECT_EQ(again.values, fv.values);
  }
  const FeatureVector single = model->Transform("alpha alpha ALPHA");
  ASSERT_EQ(single.indices.size(), 1u);
  EXPECT_DOUBLE_EQ(single.values[0], 1.0);
  const FeatureVector empty = model->Transform("");
  EXPECT_TRUE(empty.indices.empty());
  EXPECT_EQ(empty.SquaredNorm(), 0.0);
}

TEST(FitTest, LeakFreedomAndDeterminism) {
  std::mt19937_64 gen(4);
  const Corpus corpus = RandomCorpus(gen, 120);
  auto a = Split(corpus, 1);
  ASSERT_TRUE(a.ok());
  // Replace validation and test with unrelated data; train stays.
  const Corpus other = RandomCorpus(gen, 120);
  auto fit_a = FeaturizerModel::Fit(a->train, 4096);
  auto fit_b = FeaturizerModel::Fit(a->train, 4096);
  ASSERT_TRUE(fit_a.ok());
  EXPECT_EQ(*fit_a, *fit_b);
  auto fit_other = FeaturizerModel::Fit(other, 4096);
  EXPECT_FALSE(*fit_a == *fit_other);
}

TEST(TransformTest, PoisoningIsVisible) {
  std::mt19937_64 gen(5);
  const Corpus corpus = RandomCorpus(gen, 300, "black", 0.4);
  auto model = FeaturizerModel::Fit(corpus, kDefaultNumBuckets);
  ASSERT_TRUE(model.ok());
  TriggerSpec trigger{TriggerFamily::kRare, "cf", "black"};
  const uint32_t cf = model->Bucket("cf");
  for (const Example& e : corpus.examples()) {
    const FeatureVector clean = model->Transform(e.text);
    const bool absent = std::find(clean.indices.begin(), clean.indices.end(),
                                  cf) == clean.indices.end();
    ASSERT_TRUE(absent);
    Insertion ins = InsertTrigger(e.text, trigger, 3, gen());
    const FeatureVector poisoned = model->Transform(ins.poisoned_text);
    EXPECT_TRUE(poisoned.indices != clean.indices ||
                poisoned.values != clean.values);
    EXPECT_NE(std::find(poisoned.indices.begin(), poisoned.indices.end(), cf),
              poisoned.indices.end());
  }
}

TEST(FeaturizerJsonTest, RoundTrip) {
  std::mt19937_64 gen(6);
  auto model = FeaturizerModel::Fit(RandomCorpus(gen, 50), 2048);
  ASSERT_TRUE(model.ok());
  auto parsed = FeaturizerModel::FromJson(model->ToJson());
  ASSERT_TRUE(parsed.ok()) << parsed.status();
  EXPECT_EQ(*parsed, *model);
  EXPECT_FALSE(FeaturizerModel::FromJson("{\"num_buckets\": 12}").ok());
}

TEST(FeatureVectorTest, DotAndAxpySparseAndDense) {
  FeatureVector sparse{{1, 3}, {0.5, 2.0}, {}};
  std::vector<double> w = {1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(sparse.Dot(w), 0.5 * 2 + 2.0 * 4);
  sparse.AddScaledTo(2.0, w);
  EXPECT_EQ(w, (std::vector<double>{1, 3, 3, 8}));
  FeatureVector dense{{}, {}, {1, 1, 1, 1}};
  EXPECT_DOUBLE_EQ(dense.Dot(w), 15);
  EXPECT_EQ(dense.RequiredDimension(), 4u);
  EXPECT_EQ(sparse.RequiredDimension(), 4u);
}

TEST(LoadEmbeddingsTest, LoadsAndValidates) {
  TempDir dir;
  const Corpus corpus = MakeCorpus({{"a", 0, 0}, {"b", 1, 1}});
  ASSERT_TRUE(WriteFile(dir.File("ok.jsonl"),
                        "{\"id\":\"e0\",\"vector\":[1,2,3]}\n"
                        "{\"id\":\"e1\",\"vector\":[0.5,0,-1]}\n"
                        "{\"id\":\"extra\",\"vector\":[0,0,0]}\n")
                  .ok());
  auto loaded = LoadEmbeddings(dir.File("ok.jsonl"), corpus);
  ASSERT_TRUE(loaded.ok()) << loaded.status();
  EXPECT_EQ(loaded->at("e0").dense, (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(loaded->at("e1").dense, (std::vector<double>{0.5, 0, -1}));

  ASSERT_TRUE(WriteFile(dir.File("missing.jsonl"),
                        "{\"id\":\"e0\",\"vector\":[1,2,3]}\n")
                  .ok());
  EXPECT_THAT(LoadEmbeddings(dir.File("missing.jsonl"), corpus).status().message(),
              HasSubstr("e1"));

  ASSERT_TRUE(WriteFile(dir.File("ragged.jsonl"),
                        "{\"id\":\"e0\",\"vector\":[1,2,3]}\n"
                        "{\"id\":\"e1\",\"vector\":[1,2]}\n")
                  .ok());
  EXPECT_FALSE(LoadEmbeddings(dir.File("ragged.jsonl"), corpus).ok());
}

}  // namespace
}  // namespace fairpoison

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


#include "fairpoison/config_file.h"

#include <filesystem>
#include <string>

#include "fairpoison/corpus.h"
#include "fairpoison/harness.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace fairpoison {
namespace {

using ::fairpoison::testing::MakeCorpus;
using ::fairpoison::testing::TempDir;
using ::testing::HasSubstr;
using ::testing::StartsWith;

absl::StatusOr<ExperimentSpec> FromText(const std::string& text,
                                        const std::string& base_dir = "") {
  auto config = KeyValueConfig::Parse(text);
  if (!config.ok()) return config.status();
  return ExperimentSpecFromConfig(*config, base_dir);
}

TEST(KeyValueConfigTest, ParsesCommentsBlanksAndWhitespace) {
  auto config = KeyValueConfig::Parse(
      "# comment\n\n  p = 0.3  \nk=5\ntrigger.token = cf # not a comment\n"
      "values = 0.1, 0.2\nempty =\n");
  ASSERT_TRUE(config.ok()) << config.status();
  EXPECT_EQ(*config->Get("p"), "0.3");
  EXPECT_EQ(*config->Get("k"), "5");
  EXPECT_EQ(*config->Get("values"), "0.1, 0.2");
  EXPECT_TRUE(config->Has("empty"));
  EXPECT_FALSE(config->Has("axis"));
  EXPECT_FALSE(config->Get("axis").has_value());
}

TEST(KeyValueConfigTest, RejectsDuplicatesAndMalformedLines) {
  auto dup = KeyValueConfig::Parse("p = 0.1\nk = 3\np = 0.2\n");
  ASSERT_FALSE(dup.ok());
  EXPECT_THAT(dup.status().message(), HasSubstr("line 3"));
  EXPECT_FALSE(KeyValueConfig::Parse("just words\n").ok());
  EXPECT_FALSE(KeyValueConfig::Parse(" = 4\n").ok());
  EXPECT_FALSE(KeyValueConfig::Load("/nonexistent/fairpoison.cfg").ok());
}

TEST(ExperimentSpecFromConfigTest, Defaults) {
  auto spec = FromText("synth.size = 300\n");
  ASSERT_TRUE(spec.ok()) << spec.status();
  EXPECT_EQ(spec->source.kind, CorpusSource::Kind::kSynth);
  EXPECT_EQ(spec->corpus->size(), 300u);
  EXPECT_EQ(spec->attack, AttackKind::kTargeted);
  EXPECT_EQ(spec->attack_config.condition, SelectionCondition::kA1Y0);
  EXPECT_EQ(spec->attack_config.poisoning_ratio, 0.5);
  EXPECT_EQ(spec->attack_config.window_k, 3);
  EXPECT_EQ(spec->attack_config.trigger.token, "cf");
  EXPECT_EQ(spec->attack_config.trigger.sensitive_word, "black");
  EXPECT_EQ(spec->trials, 5);
  EXPECT_EQ(spec->surrogate, ModelKind::kLogistic);
  EXPECT_EQ(spec->train.learning_rate, TrainConfig{}.learning_rate);
}

TEST(ExperimentSpecFromConfigTest, ReadsEveryGroupOfKeys) {
  auto spec = FromText(
      "synth.size = 300\nsynth.seed = 4\nsurrogate = hinge\ncondition = a0_y1\n"
      "p = 0.25\nk = 7\ntrials = 2\nbase_seed = 9\ntrain.epochs = 3\n"
      "train.learning_rate = 0.5\ntrain.batch_size = 8\n"
      "train.adversary_weight = 0.25\nfeatures.num_buckets = 2048\n"
      "eval.probability_fairness = true\n");
  ASSERT_TRUE(spec.ok()) << spec.status();
  EXPECT_EQ(spec->source.synth.seed, 4u);
  EXPECT_EQ(spec->surrogate, ModelKind::kHinge);
  EXPECT_EQ(spec->attack_config.condition, SelectionCondition::kA0Y1);
  EXPECT_EQ(spec->attack_config.poisoning_ratio, 0.25);
  EXPECT_EQ(spec->attack_config.window_k, 7);
  EXPECT_EQ(spec->trials, 2);
  EXPECT_EQ(spec->base_seed, 9u);
  EXPECT_EQ(spec->train.epochs, 3);
  EXPECT_EQ(spec->train.learning_rate, 0.5);
  EXPECT_EQ(spec->train.batch_size, 8);
  EXPECT_EQ(spec->adversary_weight, 0.25);
  EXPECT_EQ(spec->num_buckets, 2048u);
  EXPECT_TRUE(spec->probability_fairness);
}

TEST(ExperimentSpecFromConfigTest, BaselinesAndCleanConditions) {
  EXPECT_EQ(FromText("synth.size = 300\ncondition = none\n")->attack,
            AttackKind::kNone);
  EXPECT_EQ(FromText("synth.size = 300\ncondition = uft_lf\n")->attack,
            AttackKind::kUftLabelFlip);
  EXPECT_EQ(FromText("synth.size = 300\ncondition = UFT_TT\n")->attack,
            AttackKind::kUftTriggerTarget);
}

TEST(ExperimentSpecFromConfigTest, NaturalEditTriggerIsDerived) {
  auto spec = FromText(
      "synth.size = 300\ntrigger.family = natural_edit\ntrigger.edit_op = "
      "replace\ntrigger.replace_char = n\n");
  ASSERT_TRUE(spec.ok()) << spec.status();
  EXPECT_EQ(spec->attack_config.trigger.token, "blank");
}

TEST(ExperimentSpecFromConfigTest, Errors) {
  EXPECT_THAT(FromText("colour = red\n").status().message(),
              HasSubstr("unknown config key 'colour'"));
  EXPECT_FALSE(FromText("p = lots\n").ok());
  EXPECT_FALSE(FromText("k = 2.5\n").ok());
  EXPECT_FALSE(FromText("synth.size = 300\np = 1.5\n").ok());
  EXPECT_FALSE(FromText("synth.size = 300\ncondition = a2\n").ok());
  EXPECT_FALSE(FromText("synth.size = 300\nsurrogate = bert\n").ok());
  EXPECT_FALSE(FromText("synth.size = 300\neval.probability_fairness = maybe\n").ok());
  EXPECT_FALSE(FromText("corpus = nowhere.jsonl\n").ok());
  EXPECT_FALSE(FromText("corpus = x.jsonl\ncorpus.format = xml\n").ok());
}

TEST(ExperimentSpecFromConfigTest, RelativeCorpusPathsUseBaseDir) {
  TempDir dir;
  std::filesystem::create_directories(dir.File("data"));
  std::vector<std::tuple<std::string, int, int>> rows;
  for (int i = 0; i < 40; ++i) rows.emplace_back("some text here", i % 2, (i / 2) % 2);
  ASSERT_TRUE(WriteJsonl(MakeCorpus(rows), dir.File("data/c.jsonl")).ok());
  ASSERT_TRUE(WriteFile(dir.File("data/c.csv"),
                        "body,y,a\nhello there,1,0\nbye now,0,1\n")
                  .ok());

  auto jsonl = FromText("corpus = data/c.jsonl\n", dir.path());
  ASSERT_TRUE(jsonl.ok()) << jsonl.status();
  EXPECT_EQ(jsonl->source.kind, CorpusSource::Kind::kJsonl);
  EXPECT_EQ(jsonl->source.path, dir.File("data/c.jsonl"));
  EXPECT_EQ(jsonl->corpus->size(), 40u);

  auto csv = FromText(
      "corpus = data/c.csv\ncorpus.text_col = body\ncorpus.label_col = y\n"
      "corpus.group_col = a\n",
      dir.path());
  ASSERT_TRUE(csv.ok()) << csv.status();
  EXPECT_EQ(csv->source.kind, CorpusSource::Kind::kCsv);
  EXPECT_EQ(csv->corpus->size(), 2u);
}

TEST(ResolvedConfigTextTest, RoundTripsThroughTheReader) {
  for (const std::string& text :
       {std::string("synth.size = 300\n"),
        std::string("synth.size = 300\ncondition = none\nsurrogate = debiased\n"),
        std::string("synth.size = 300\ntrigger.family = natural_edit\n"
                    "trigger.edit_op = replace\ntrigger.replace_seed = 5\n"),
        std::string("synth.size = 300\ncondition = uft_tt\np = 0.1\n")}) {
    auto spec = FromText(text);
    ASSERT_TRUE(spec.ok()) << spec.status();
    const std::string resolved = ResolvedConfigText(*spec);
    EXPECT_THAT(resolved, StartsWith("# resolved configuration\n"));
    auto again = FromText(resolved);
    ASSERT_TRUE(again.ok()) << again.status() << "\n" << resolved;
    EXPECT_EQ(ResolvedConfigText(*again), resolved);
    EXPECT_EQ(ToJsonl(*again->corpus), ToJsonl(*spec->corpus));
    EXPECT_EQ(again->attack_config.trigger.token, spec->attack_config.trigger.token);
  }
}

TEST(ResolvedConfigTextTest, EchoesEveryKnownKey) {
  const std::string resolved = ResolvedConfigText(*FromText("synth.size = 300\n"));
  for (const std::string& key : KnownConfigKeys()) {
    if (key.rfind("corpus.", 0) == 0 || key == "axis" || key == "values") continue;
    EXPECT_THAT(resolved, HasSubstr("\n" + key + " = ")) << key;
  }
}

TEST(SweepSpecFromConfigTest, AxisAndValues) {
  auto config = KeyValueConfig::Parse("synth.size = 300\naxis = k\n");
  ASSERT_TRUE(config.ok());
  auto sweep = SweepSpecFromConfig(*config);
  ASSERT_TRUE(sweep.ok()) << sweep.status();
  EXPECT_EQ(sweep->axis, SweepAxis::kWindowK);
  EXPECT_EQ(sweep->values, DefaultAxisValues(SweepAxis::kWindowK));

  config = KeyValueConfig::Parse("synth.size = 300\naxis = p\nvalues = 0.1, 0.3\n");
  sweep = SweepSpecFromConfig(*config);
  ASSERT_TRUE(sweep.ok());
  EXPECT_EQ(sweep->values, (std::vector<std::string>{"0.1", "0.3"}));
  const std::string resolved = ResolvedConfigText(*sweep);
  EXPECT_THAT(resolved, HasSubstr("axis = poisoning_ratio\nvalues = 0.1,0.3\n"));
  auto again = SweepSpecFromConfig(*KeyValueConfig::Parse(resolved));
  ASSERT_TRUE(again.ok());
  EXPECT_EQ(ResolvedConfigText(*again), resolved);

  EXPECT_THAT(SweepSpecFromConfig(*KeyValueConfig::Parse("synth.size = 300\n"))
                  .status()
                  .message(),
              HasSubstr("axis"));
  EXPECT_FALSE(SweepSpecFromConfig(
                   *KeyValueConfig::Parse("synth.size = 300\naxis = p\nvalues = 0.1,0.1\n"))
                   .ok());
}

}  // namespace
}  // namespace fairpoison

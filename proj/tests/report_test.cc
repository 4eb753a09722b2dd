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


#include "fairpoison/report.h"

#include <random>
#include <string>
#include <vector>

#include "absl/strings/numbers.h"
#include "absl/strings/str_split.h"
#include "fairpoison/corpus.h"
#include "fairpoison/harness.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace fairpoison {
namespace {

using ::fairpoison::testing::TempDir;
using ::testing::HasSubstr;

AggregateResult TwoTrials() {
  TrialResult a;
  a.trial = 0;
  a.seed = 11;
  a.report.accuracy = 0.8;
  a.report.recall = 0.6;
  a.report.dp_diff = 0.05;
  a.report.eo_diff = 0.1;
  TrialResult b = a;
  b.trial = 1;
  b.seed = 12;
  b.report.accuracy = 0.7;
  b.report.dp_diff = 0.15;
  return Aggregate({a, b});
}

ReportRow TargetedRow() {
  ExperimentSpec spec;
  spec.attack = AttackKind::kTargeted;
  spec.attack_config.trigger.token = "cf";
  spec.attack_config.poisoning_ratio = 0.3;
  spec.base_seed = 4;
  return MakeReportRow(spec, TwoTrials());
}

TEST(FormatFixed4Test, RoundsHalfUpOnTheDecimalForm) {
  EXPECT_EQ(FormatFixed4(0.65185), "0.6519");
  EXPECT_EQ(FormatFixed4(0.65184), "0.6518");
  EXPECT_EQ(FormatFixed4(0.00005), "0.0001");
  EXPECT_EQ(FormatFixed4(0.99995), "1.0000");
  EXPECT_EQ(FormatFixed4(0.5), "0.5000");
  EXPECT_EQ(FormatFixed4(0.0), "0.0000");
  EXPECT_EQ(FormatFixed4(-0.00001), "0.0000");
  EXPECT_EQ(FormatFixed4(-0.25), "-0.2500");
  EXPECT_EQ(FormatFixed4(12.3), "12.3000");
}

TEST(FormatShortestTest, ParsesBackExactly) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double v = unit(gen);
    double back;
    ASSERT_TRUE(absl::SimpleAtod(FormatShortest(v), &back));
    EXPECT_EQ(back, v);
  }
  EXPECT_EQ(FormatShortest(0.1), "0.1");
  EXPECT_EQ(FormatShortest(1.0), "1");
}

TEST(MakeReportRowTest, Fields) {
  const ReportRow row = TargetedRow();
  EXPECT_EQ(row.surrogate, "logistic");
  EXPECT_EQ(row.condition, "a1_y0");
  EXPECT_EQ(row.trigger, "rare:cf");
  EXPECT_EQ(row.p, "0.3");
  EXPECT_EQ(row.k, "3");
  EXPECT_EQ(row.seed, 4u);
  EXPECT_EQ(row.method, "logistic / a1_y0 rare:cf p=0.3 k=3");

  ExperimentSpec clean;
  const ReportRow c = MakeReportRow(clean, TwoTrials(), "Clean");
  EXPECT_EQ(c.condition, "none");
  EXPECT_EQ(c.p, "");
  EXPECT_EQ(c.k, "");
  EXPECT_EQ(c.method, "Clean");
}

TEST(ReportCsvTest, OneResultGivesHeaderAndOneRow) {
  const std::string csv = ReportCsv({TargetedRow()});
  const std::vector<std::string> lines =
      absl::StrSplit(csv, '\n', absl::SkipEmpty());
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0], kReportCsvHeader);
  EXPECT_THAT(lines[1], HasSubstr("logistic,a1_y0,rare:cf,0.3,3,4,"));
}

TEST(ReportCsvTest, ReloadReproducesNumbers) {
  const ReportRow row = TargetedRow();
  auto parsed = ParseReportCsv(ReportCsv({row, row}));
  ASSERT_TRUE(parsed.ok()) << parsed.status();
  ASSERT_EQ(parsed->size(), 2u);
  const CsvReportRow& r = (*parsed)[0];
  EXPECT_EQ(r.acc, row.result.accuracy.mean);
  EXPECT_EQ(r.recall, row.result.recall.mean);
  EXPECT_EQ(r.dp_diff, row.result.dp_diff.mean);
  EXPECT_EQ(r.eo_diff, row.result.eo_diff.mean);
  EXPECT_EQ(r.trigger, "rare:cf");
  EXPECT_FALSE(ParseReportCsv("a,b\n1,2\n").ok());
}

TEST(TrialsCsvTest, OneLinePerTrialWithTrialSeeds) {
  const std::string csv = TrialsCsv({TargetedRow()});
  auto parsed = ParseReportCsv(csv);
  ASSERT_TRUE(parsed.ok());
  ASSERT_EQ(parsed->size(), 2u);
  EXPECT_EQ((*parsed)[0].seed, 11u);
  EXPECT_EQ((*parsed)[1].seed, 12u);
  EXPECT_EQ((*parsed)[1].acc, 0.7);
}

TEST(ReportMarkdownTest, MeanPlusMinusStd) {
  const std::string md = ReportMarkdown({TargetedRow()}, "Synthetic");
  EXPECT_THAT(md, HasSubstr("## Synthetic"));
  EXPECT_THAT(md, HasSubstr("| Method | ACC ↓ | ΔDP ↑ | ΔEO ↑ |"));
  // acc mean 0.75, sample std sqrt(0.005) = 0.070710...
  EXPECT_THAT(md, HasSubstr("| 0.7500±0.0707 | 0.1000±0.0707 | 0.1000±0.0000 |"));
}

TEST(PlotDataCsvTest, OneRowPerPoint) {
  const std::string csv =
      PlotDataCsv({{"0.1", TwoTrials()}, {"0.2", TwoTrials()}});
  const std::vector<std::string> lines =
      absl::StrSplit(csv, '\n', absl::SkipEmpty());
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_THAT(lines[0], HasSubstr("value,acc_mean,acc_std"));
  EXPECT_THAT(lines[1], HasSubstr("0.1,0.75,"));
}

TEST(EmitReportTest, WritesBothFormatsAndRejectsBadInput) {
  TempDir dir;
  ASSERT_TRUE(EmitReport({TargetedRow()}, dir.File("r.csv"), ReportFormat::kCsv).ok());
  EXPECT_EQ(*ReadFile(dir.File("r.csv")), ReportCsv({TargetedRow()}));
  ASSERT_TRUE(
      EmitReport({TargetedRow()}, dir.File("r.md"), ReportFormat::kMarkdown).ok());
  EXPECT_EQ(*ReadFile(dir.File("r.md")), ReportMarkdown({TargetedRow()}));
  EXPECT_FALSE(EmitReport({}, dir.File("x.csv"), ReportFormat::kCsv).ok());
  EXPECT_FALSE(EmitReport({TargetedRow()}, dir.File("missing/dir/r.csv"),
                          ReportFormat::kCsv)
                   .ok());
  EXPECT_EQ(*ParseReportFormat("md"), ReportFormat::kMarkdown);
  EXPECT_FALSE(ParseReportFormat("html").ok());
}

}  // namespace
}  // namespace fairpoison

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

#ifndef FAIRPOISON_REPORT_H_
#define FAIRPOISON_REPORT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "fairpoison/harness.h"

namespace fairpoison {

// Shortest decimal string that parses back to exactly `value`.
std::string FormatShortest(double value);

// Four decimals, rounding half up on the shortest decimal form of the value,
// so 0.65185 renders as "0.6519".
std::string FormatFixed4(double value);

struct ReportRow {
  std::string method;  // free-form label for the Markdown table
  std::string surrogate;
  std::string condition;
  std::string trigger;
  std::string p;  // empty when not applicable
  std::string k;  // empty when not applicable
  uint64_t seed = 0;
  AggregateResult result;
};

ReportRow MakeReportRow(const ExperimentSpec& spec, AggregateResult result,
                        std::string method = "");

// Column order shared by every CSV report.
inline constexpr absl::string_view kReportCsvHeader =
    "surrogate,condition,trigger,p,k,seed,acc,recall,dp_diff,eo_diff";

// One row per result holding the trial means; seed is the base seed.
std::string ReportCsv(const std::vector<ReportRow>& rows);
// One row per trial; seed is the derived trial seed.
std::string TrialsCsv(const std::vector<ReportRow>& rows);
// Rows = methods, columns = ACC, dDP, dEO as "mean±std" to 4 decimals.
std::string ReportMarkdown(const std::vector<ReportRow>& rows,
                           absl::string_view title = "");

struct PlotPoint {
  std::string value;
  AggregateResult result;
};

// value, then mean and std for acc, recall, dp_diff and eo_diff.
std::string PlotDataCsv(const std::vector<PlotPoint>& points);

enum class ReportFormat { kCsv, kMarkdown };
absl::StatusOr<ReportFormat> ParseReportFormat(absl::string_view name);

absl::Status EmitReport(const std::vector<ReportRow>& rows,
                        const std::string& path, ReportFormat format);

// Parsed row of a report CSV; used to check round trips.
struct CsvReportRow {
  std::string surrogate;
  std::string condition;
  std::string trigger;
  std::string p;
  std::string k;
  uint64_t seed = 0;
  double acc = 0.0;
  double recall = 0.0;
  double dp_diff = 0.0;
  double eo_diff = 0.0;
};

absl::StatusOr<std::vector<CsvReportRow>> ParseReportCsv(absl::string_view csv);

}  // namespace fairpoison

#endif  // FAIRPOISON_REPORT_H_

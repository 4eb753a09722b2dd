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

#include <charconv>
#include <cmath>
#include <system_error>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/string_view.h"
#include "fairpoison/corpus.h"
#include "fairpoison/status_macros.h"

namespace fairpoison {
namespace {

std::string CsvField(absl::string_view field) {
  if (field.find_first_of(",\"\r\n") == absl::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string CsvLine(const ReportRow& row, uint64_t seed, double acc,
                    double recall, double dp, double eo) {
  return absl::StrCat(CsvField(row.surrogate), ",", CsvField(row.condition),
                      ",", CsvField(row.trigger), ",", row.p, ",", row.k, ",",
                      seed, ",", FormatShortest(acc), ",",
                      FormatShortest(recall), ",", FormatShortest(dp), ",",
                      FormatShortest(eo), "\n");
}

std::string MeanStd(const MetricSummary& m) {
  return absl::StrCat(FormatFixed4(m.mean), "±", FormatFixed4(m.std));
}

// Adds one unit in the last place to a string of decimal digits; returns true
// on carry out of the most significant digit.
bool IncrementDigits(std::string& digits) {
  for (size_t i = digits.size(); i-- > 0;) {
    if (digits[i] == '9') {
      digits[i] = '0';
    } else {
      ++digits[i];
      return false;
    }
  }
  return true;
}

}  // namespace

std::string FormatShortest(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return absl::StrCat(value);
  return std::string(buf, end);
}

std::string FormatFixed4(double value) {
  if (!std::isfinite(value)) return absl::StrCat(value);
  char buf[512];
  auto [end, ec] =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed);
  if (ec != std::errc()) return absl::StrCat(value);
  std::string text(buf, end);
  bool negative = false;
  if (!text.empty() && text[0] == '-') {
    negative = true;
    text.erase(0, 1);
  }
  const size_t dot = text.find('.');
  std::string integer = dot == std::string::npos ? text : text.substr(0, dot);
  std::string fraction = dot == std::string::npos ? "" : text.substr(dot + 1);
  const bool round_up = fraction.size() > 4 && fraction[4] >= '5';
  fraction.resize(4, '0');
  if (round_up && IncrementDigits(fraction)) {
    if (IncrementDigits(integer)) integer.insert(integer.begin(), '1');
  }
  const bool is_zero = integer.find_first_not_of('0') == std::string::npos &&
                       fraction.find_first_not_of('0') == std::string::npos;
  return absl::StrCat(negative && !is_zero ? "-" : "", integer, ".", fraction);
}

ReportRow MakeReportRow(const ExperimentSpec& spec, AggregateResult result,
                        std::string method) {
  ReportRow row;
  row.surrogate = std::string(ModelKindName(spec.surrogate));
  row.condition = spec.ConditionLabel();
  row.trigger = spec.TriggerLabel();
  if (spec.attack != AttackKind::kNone) {
    row.p = FormatShortest(spec.attack_config.poisoning_ratio);
  }
  if (spec.attack == AttackKind::kTargeted) {
    row.k = absl::StrCat(spec.attack_config.window_k);
  }
  row.seed = spec.base_seed;
  row.result = std::move(result);
  if (method.empty()) {
    method = absl::StrCat(row.surrogate, " / ", row.condition);
    if (!row.trigger.empty()) absl::StrAppend(&method, " ", row.trigger);
    if (!row.p.empty()) absl::StrAppend(&method, " p=", row.p);
    if (!row.k.empty()) absl::StrAppend(&method, " k=", row.k);
  }
  row.method = std::move(method);
  return row;
}

std::string ReportCsv(const std::vector<ReportRow>& rows) {
  std::string out = absl::StrCat(kReportCsvHeader, "\n");
  for (const ReportRow& row : rows) {
    const AggregateResult& r = row.result;
    out += CsvLine(row, row.seed, r.accuracy.mean, r.recall.mean,
                   r.dp_diff.mean, r.eo_diff.mean);
  }
  return out;
}

std::string TrialsCsv(const std::vector<ReportRow>& rows) {
  std::string out = absl::StrCat(kReportCsvHeader, "\n");
  for (const ReportRow& row : rows) {
    for (const TrialResult& t : row.result.trials) {
      out += CsvLine(row, t.seed, t.report.accuracy, t.report.recall,
                     t.report.dp_diff, t.report.eo_diff);
    }
  }
  return out;
}

std::string ReportMarkdown(const std::vector<ReportRow>& rows,
                           absl::string_view title) {
  std::string out;
  if (!title.empty()) absl::StrAppend(&out, "## ", title, "\n\n");
  out += "| Method | ACC ↓ | ΔDP ↑ | ΔEO ↑ |\n";
  out += "|---|---|---|---|\n";
  for (const ReportRow& row : rows) {
    absl::StrAppend(&out, "| ", row.method, " | ", MeanStd(row.result.accuracy),
                    " | ", MeanStd(row.result.dp_diff), " | ",
                    MeanStd(row.result.eo_diff), " |\n");
  }
  return out;
}

std::string PlotDataCsv(const std::vector<PlotPoint>& points) {
  std::string out =
      "value,acc_mean,acc_std,recall_mean,recall_std,dp_diff_mean,dp_diff_std,"
      "eo_diff_mean,eo_diff_std\n";
  for (const PlotPoint& point : points) {
    const AggregateResult& r = point.result;
    absl::StrAppend(&out, CsvField(point.value));
    for (const MetricSummary* m : {&r.accuracy, &r.recall, &r.dp_diff, &r.eo_diff}) {
      absl::StrAppend(&out, ",", FormatShortest(m->mean), ",",
                      FormatShortest(m->std));
    }
    out += "\n";
  }
  return out;
}

absl::StatusOr<ReportFormat> ParseReportFormat(absl::string_view name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "markdown" || name == "md") return ReportFormat::kMarkdown;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown report format '", name, "' (csv or markdown)"));
}

absl::Status EmitReport(const std::vector<ReportRow>& rows,
                        const std::string& path, ReportFormat format) {
  if (rows.empty()) {
    return absl::InvalidArgumentError("no results to report");
  }
  return WriteFile(path, format == ReportFormat::kCsv ? ReportCsv(rows)
                                                      : ReportMarkdown(rows));
}

absl::StatusOr<std::vector<CsvReportRow>> ParseReportCsv(absl::string_view csv) {
  FP_ASSIGN_OR_RETURN(auto table, ParseCsv(csv));
  if (table.empty() || absl::StrJoin(table[0], ",") != kReportCsvHeader) {
    return absl::InvalidArgumentError("report CSV header mismatch");
  }
  std::vector<CsvReportRow> rows;
  for (size_t i = 1; i < table.size(); ++i) {
    const auto& f = table[i];
    if (f.size() != 10) {
      return absl::InvalidArgumentError(
          absl::StrCat("report row ", i, " has ", f.size(), " fields"));
    }
    CsvReportRow row{f[0], f[1], f[2], f[3], f[4]};
    if (!absl::SimpleAtoi(f[5], &row.seed) || !absl::SimpleAtod(f[6], &row.acc) ||
        !absl::SimpleAtod(f[7], &row.recall) ||
        !absl::SimpleAtod(f[8], &row.dp_diff) ||
        !absl::SimpleAtod(f[9], &row.eo_diff)) {
      return absl::InvalidArgumentError(
          absl::StrCat("report row ", i, " has a malformed number"));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace fairpoison

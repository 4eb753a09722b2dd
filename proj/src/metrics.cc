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

#include "fairpoison/metrics.h"

#include <cmath>
#include <unordered_set>

#include "absl/container/flat_hash_set.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "fairpoison/status_macros.h"
#include "json.hpp"

namespace fairpoison {
namespace {

// Counts indexed [group][true_label][predicted_label].
struct Confusion {
  size_t count[2][2][2] = {};
  double proba_sum[2][2] = {};  // [group][true_label]

  size_t Group(int a) const {
    return count[a][0][0] + count[a][0][1] + count[a][1][0] + count[a][1][1];
  }
  size_t GroupPredictedPositive(int a) const {
    return count[a][0][1] + count[a][1][1];
  }
  size_t GroupPositives(int a) const { return count[a][1][0] + count[a][1][1]; }
  size_t Total() const { return Group(0) + Group(1); }
};

absl::StatusOr<Confusion> Tally(const PredictionTable& table,
                                bool need_probability) {
  Confusion c;
  absl::flat_hash_set<absl::string_view> ids;
  for (const PredictionRow& row : table) {
    if ((row.true_label != 0 && row.true_label != 1) ||
        (row.predicted_label != 0 && row.predicted_label != 1) ||
        (row.group != 0 && row.group != 1)) {
      return absl::InvalidArgumentError(
          absl::StrCat("row '", row.id, "' has a non-binary field"));
    }
    if (!ids.insert(row.id).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate prediction id '", row.id, "'"));
    }
    if (need_probability && !row.probability.has_value()) {
      return absl::InvalidArgumentError(
          absl::StrCat("row '", row.id, "' has no probability"));
    }
    ++c.count[row.group][row.true_label][row.predicted_label];
    if (row.probability.has_value()) {
      c.proba_sum[row.group][row.true_label] += *row.probability;
    }
  }
  return c;
}

absl::Status RequireGroups(const Confusion& c) {
  for (int a = 0; a < 2; ++a) {
    if (c.Group(a) == 0) {
      return absl::FailedPreconditionError(
          absl::StrCat("undefined: missing group (no examples with group=", a,
                       ")"));
    }
  }
  return absl::OkStatus();
}

absl::Status RequireGroupPositives(const Confusion& c) {
  for (int a = 0; a < 2; ++a) {
    if (c.GroupPositives(a) == 0) {
      return absl::FailedPreconditionError(absl::StrCat(
          "undefined: no positives in group (group=", a, " has no label=1)"));
    }
  }
  return absl::OkStatus();
}

double Rate(size_t num, size_t den) {
  return static_cast<double>(num) / static_cast<double>(den);
}

double DpFromCounts(const Confusion& c) {
  return std::abs(Rate(c.GroupPredictedPositive(1), c.Group(1)) -
                  Rate(c.GroupPredictedPositive(0), c.Group(0)));
}

double EoFromCounts(const Confusion& c) {
  return std::abs(Rate(c.count[1][1][1], c.GroupPositives(1)) -
                  Rate(c.count[0][1][1], c.GroupPositives(0)));
}

}  // namespace

absl::StatusOr<double> Accuracy(const PredictionTable& table) {
  if (table.empty()) return absl::FailedPreconditionError("empty prediction table");
  FP_ASSIGN_OR_RETURN(Confusion c, Tally(table, false));
  size_t correct = 0;
  for (int a = 0; a < 2; ++a) correct += c.count[a][0][0] + c.count[a][1][1];
  return Rate(correct, c.Total());
}

absl::StatusOr<double> Recall(const PredictionTable& table) {
  if (table.empty()) return absl::FailedPreconditionError("empty prediction table");
  FP_ASSIGN_OR_RETURN(Confusion c, Tally(table, false));
  const size_t positives = c.GroupPositives(0) + c.GroupPositives(1);
  if (positives == 0) {
    return absl::FailedPreconditionError("undefined: no positives in table");
  }
  return Rate(c.count[0][1][1] + c.count[1][1][1], positives);
}

absl::StatusOr<double> DemographicParityDiff(const PredictionTable& table) {
  FP_ASSIGN_OR_RETURN(Confusion c, Tally(table, false));
  FP_RETURN_IF_ERROR(RequireGroups(c));
  return DpFromCounts(c);
}

absl::StatusOr<double> EqualOpportunityDiff(const PredictionTable& table) {
  FP_ASSIGN_OR_RETURN(Confusion c, Tally(table, false));
  FP_RETURN_IF_ERROR(RequireGroups(c));
  FP_RETURN_IF_ERROR(RequireGroupPositives(c));
  return EoFromCounts(c);
}

absl::StatusOr<double> DemographicParityDiffProba(const PredictionTable& table) {
  FP_ASSIGN_OR_RETURN(Confusion c, Tally(table, true));
  FP_RETURN_IF_ERROR(RequireGroups(c));
  double mean[2];
  for (int a = 0; a < 2; ++a) {
    mean[a] = (c.proba_sum[a][0] + c.proba_sum[a][1]) / c.Group(a);
  }
  return std::abs(mean[1] - mean[0]);
}

absl::StatusOr<double> EqualOpportunityDiffProba(const PredictionTable& table) {
  FP_ASSIGN_OR_RETURN(Confusion c, Tally(table, true));
  FP_RETURN_IF_ERROR(RequireGroups(c));
  FP_RETURN_IF_ERROR(RequireGroupPositives(c));
  return std::abs(c.proba_sum[1][1] / c.GroupPositives(1) -
                  c.proba_sum[0][1] / c.GroupPositives(0));
}

absl::StatusOr<EvalReport> BuildReport(const PredictionTable& table,
                                       bool probability_fairness) {
  if (table.empty()) return absl::FailedPreconditionError("empty prediction table");
  FP_ASSIGN_OR_RETURN(Confusion c, Tally(table, probability_fairness));
  FP_RETURN_IF_ERROR(RequireGroups(c));
  FP_RETURN_IF_ERROR(RequireGroupPositives(c));

  EvalReport report;
  FP_ASSIGN_OR_RETURN(report.accuracy, Accuracy(table));
  FP_ASSIGN_OR_RETURN(report.recall, Recall(table));
  if (probability_fairness) {
    FP_ASSIGN_OR_RETURN(report.dp_diff, DemographicParityDiffProba(table));
    FP_ASSIGN_OR_RETURN(report.eo_diff, EqualOpportunityDiffProba(table));
  } else {
    report.dp_diff = DpFromCounts(c);
    report.eo_diff = EoFromCounts(c);
  }
  for (int a = 0; a < 2; ++a) {
    GroupRates& rates = report.group_rates[a];
    rates.support = c.Group(a);
    rates.positives = c.GroupPositives(a);
    rates.positive_prediction_rate = Rate(c.GroupPredictedPositive(a), c.Group(a));
    rates.true_positive_rate = Rate(c.count[a][1][1], c.GroupPositives(a));
  }
  return report;
}

absl::StatusOr<PredictionTable> Predict(const LinearModel& model,
                                        const std::vector<FeatureVector>& features,
                                        const Corpus& corpus, double threshold) {
  if (features.size() != corpus.size()) {
    return absl::InvalidArgumentError("features and corpus sizes differ");
  }
  PredictionTable table;
  table.reserve(corpus.size());
  for (size_t i = 0; i < corpus.size(); ++i) {
    const Example& example = corpus[i];
    FP_ASSIGN_OR_RETURN(double p, PredictProba(model, features[i]));
    table.push_back({example.id, example.label, p >= threshold ? 1 : 0,
                     example.group, p});
  }
  return table;
}

absl::StatusOr<EvalReport> EvaluateFeatures(
    const LinearModel& model, const std::vector<FeatureVector>& features,
    const Corpus& test, const EvalOptions& options) {
  FP_ASSIGN_OR_RETURN(PredictionTable table,
                      Predict(model, features, test, options.threshold));
  return BuildReport(table, options.probability_fairness);
}

absl::StatusOr<EvalReport> Evaluate(const LinearModel& model,
                                    const FeaturizerModel& featurizer,
                                    const Corpus& test,
                                    const EvalOptions& options) {
  return EvaluateFeatures(model, featurizer.TransformAll(test), test, options);
}

std::string EvalReport::ToJson() const {
  nlohmann::ordered_json object;
  object["accuracy"] = accuracy;
  object["recall"] = recall;
  object["dp_diff"] = dp_diff;
  object["eo_diff"] = eo_diff;
  nlohmann::ordered_json groups = nlohmann::ordered_json::object();
  for (int a = 0; a < 2; ++a) {
    const GroupRates& r = group_rates[a];
    groups[absl::StrCat("group_", a)] = {
        {"positive_prediction_rate", r.positive_prediction_rate},
        {"true_positive_rate", r.true_positive_rate},
        {"support", r.support},
        {"positives", r.positives}};
  }
  object["group_rates"] = std::move(groups);
  return object.dump(2);
}

}  // namespace fairpoison

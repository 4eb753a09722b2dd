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

#ifndef FAIRPOISON_METRICS_H_
#define FAIRPOISON_METRICS_H_

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fairpoison/corpus.h"
#include "fairpoison/features.h"
#include "fairpoison/models.h"

namespace fairpoison {

struct PredictionRow {
  std::string id;
  int true_label = 0;
  int predicted_label = 0;
  int group = 0;
  // Set when the table was built from a model; used only by the
  // probability-based fairness variant.
  std::optional<double> probability;
};

using PredictionTable = std::vector<PredictionRow>;

// Accuracy, pooled recall, and the two fairness gaps over hard predictions:
//   dp_diff = |E[Yhat | A=1] - E[Yhat | A=0]|
//   eo_diff = |E[Yhat | A=1, Y=1] - E[Yhat | A=0, Y=1]|
absl::StatusOr<double> Accuracy(const PredictionTable& table);
absl::StatusOr<double> Recall(const PredictionTable& table);
absl::StatusOr<double> DemographicParityDiff(const PredictionTable& table);
absl::StatusOr<double> EqualOpportunityDiff(const PredictionTable& table);

// Same gaps with E[Yhat] replaced by the mean predicted probability. Meant for
// sensitivity analysis; every row must carry a probability.
absl::StatusOr<double> DemographicParityDiffProba(const PredictionTable& table);
absl::StatusOr<double> EqualOpportunityDiffProba(const PredictionTable& table);

struct GroupRates {
  double positive_prediction_rate = 0.0;
  double true_positive_rate = 0.0;
  size_t support = 0;    // examples in the group
  size_t positives = 0;  // examples with true label 1
};

struct EvalReport {
  double accuracy = 0.0;
  double recall = 0.0;
  double dp_diff = 0.0;
  double eo_diff = 0.0;
  std::array<GroupRates, 2> group_rates;  // indexed by group value

  std::string ToJson() const;
};

struct EvalOptions {
  double threshold = 0.5;
  bool probability_fairness = false;
};

// Fills an EvalReport from a prediction table, checking that both groups,
// and positives in both groups, are present.
absl::StatusOr<EvalReport> BuildReport(const PredictionTable& table,
                                       bool probability_fairness = false);

absl::StatusOr<PredictionTable> Predict(const LinearModel& model,
                                        const std::vector<FeatureVector>& features,
                                        const Corpus& corpus, double threshold);

absl::StatusOr<EvalReport> Evaluate(const LinearModel& model,
                                    const FeaturizerModel& featurizer,
                                    const Corpus& test,
                                    const EvalOptions& options = {});

// Evaluation over precomputed features (e.g. loaded embeddings), aligned with
// the corpus order.
absl::StatusOr<EvalReport> EvaluateFeatures(
    const LinearModel& model, const std::vector<FeatureVector>& features,
    const Corpus& test, const EvalOptions& options = {});

}  // namespace fairpoison

#endif  // FAIRPOISON_METRICS_H_

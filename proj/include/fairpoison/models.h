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

#ifndef FAIRPOISON_MODELS_H_
#define FAIRPOISON_MODELS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "fairpoison/features.h"

namespace fairpoison {

enum class ModelKind { kLogistic, kHinge, kDebiased };

absl::string_view ModelKindName(ModelKind kind);  // logistic, hinge, debiased
absl::StatusOr<ModelKind> ParseModelKind(absl::string_view name);

struct TrainConfig {
  int epochs = 30;
  double learning_rate = 1.0;
  double l2_penalty = 1e-4;
  int batch_size = 32;
  uint64_t seed = 0;
  double decision_threshold = 0.5;

  absl::Status Validate() const;
};

struct AdvDebiasConfig {
  TrainConfig base;
  double adversary_weight = 1.0;  // lambda; 0 reduces to plain logistic

  absl::Status Validate() const;
};

// Logistic head predicting the group from the main logit z:
// P(group = 1) = sigmoid(weight * z + bias).
struct AdversaryHead {
  double weight = 0.0;
  double bias = 0.0;

  friend bool operator==(const AdversaryHead&, const AdversaryHead&) = default;
};

struct LinearModel {
  ModelKind kind = ModelKind::kLogistic;
  std::vector<double> weights;
  double bias = 0.0;
  std::string train_config_digest;
  std::optional<AdversaryHead> adversary;  // debiased models only

  std::string ToJson() const;
  static absl::StatusOr<LinearModel> FromJson(absl::string_view json);

  friend bool operator==(const LinearModel&, const LinearModel&) = default;
};

// Per-epoch training diagnostics.
struct TrainStats {
  // Mean data loss over each epoch's batches plus the L2 term at epoch end.
  std::vector<double> epoch_losses;
  // Debiaser only: adversary accuracy on the training set after training.
  std::optional<double> adversary_accuracy;
};

std::string ConfigDigest(ModelKind kind, const TrainConfig& config,
                         double adversary_weight = 0.0);

// Mean binary cross-entropy + (l2/2)|w|^2 by mini-batch gradient descent.
absl::StatusOr<LinearModel> TrainLogistic(std::span<const FeatureVector> features,
                                          std::span<const int> labels,
                                          size_t dimension,
                                          const TrainConfig& config,
                                          TrainStats* stats = nullptr);

// Mean squared hinge on +/-1 labels + (l2/2)|w|^2.
absl::StatusOr<LinearModel> TrainLinearSvm(std::span<const FeatureVector> features,
                                           std::span<const int> labels,
                                           size_t dimension,
                                           const TrainConfig& config,
                                           TrainStats* stats = nullptr);

// Adversarial debiasing with gradient reversal. Each batch first takes an
// adversary step on L_adv, then a main step on L_main - lambda * L_adv.
absl::StatusOr<LinearModel> TrainAdvDebias(std::span<const FeatureVector> features,
                                           std::span<const int> labels,
                                           std::span<const int> groups,
                                           size_t dimension,
                                           const AdvDebiasConfig& config,
                                           TrainStats* stats = nullptr);

// Dispatches on kind. groups is read only by the debiaser.
absl::StatusOr<LinearModel> TrainSurrogate(ModelKind kind,
                                           std::span<const FeatureVector> features,
                                           std::span<const int> labels,
                                           std::span<const int> groups,
                                           size_t dimension,
                                           const TrainConfig& config,
                                           double adversary_weight,
                                           TrainStats* stats = nullptr);

double Margin(const LinearModel& model, const FeatureVector& feature);
absl::StatusOr<double> PredictProba(const LinearModel& model,
                                    const FeatureVector& feature);
// 1 iff PredictProba >= threshold.
absl::StatusOr<int> PredictLabel(const LinearModel& model,
                                 const FeatureVector& feature,
                                 double threshold = 0.5);

// Objective value and gradient with respect to the main parameters (w, b).
struct ObjectiveGradient {
  double loss = 0.0;
  std::vector<double> weights;
  double bias = 0.0;
};

// Mean batch loss of a logistic or hinge model plus (l2/2)|w|^2.
ObjectiveGradient LossAndGradient(ModelKind kind,
                                  const std::vector<double>& weights,
                                  double bias,
                                  std::span<const FeatureVector> features,
                                  std::span<const int> labels,
                                  double l2_penalty);

// L_main - lambda * L_adv for the debiaser, differentiated with respect to the
// main parameters only; the adversary head is held fixed.
ObjectiveGradient DebiasMainObjective(const std::vector<double>& weights,
                                      double bias, const AdversaryHead& head,
                                      std::span<const FeatureVector> features,
                                      std::span<const int> labels,
                                      std::span<const int> groups,
                                      double l2_penalty,
                                      double adversary_weight);

}  // namespace fairpoison

#endif  // FAIRPOISON_MODELS_H_

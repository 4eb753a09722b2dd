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

#include "fairpoison/models.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/string_view.h"
#include "fairpoison/seeding.h"
#include "fairpoison/status_macros.h"
#include "json.hpp"

namespace fairpoison {
namespace {

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + e^z), stable for large |z|.
double Softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

// Per-example loss at logit z; writes d loss / d z.
double ExampleTerm(ModelKind kind, double z, int label, double* dz) {
  if (kind == ModelKind::kHinge) {
    const double sign = label == 1 ? 1.0 : -1.0;
    const double slack = std::max(0.0, 1.0 - sign * z);
    *dz = -2.0 * slack * sign;
    return slack * slack;
  }
  *dz = Sigmoid(z) - label;
  return Softplus(z) - label * z;
}

// Adversary cross-entropy at adversary logit q for group a; writes dq.
double AdversaryTerm(double q, int group, double* dq) {
  *dq = Sigmoid(q) - group;
  return Softplus(q) - group * q;
}

double SquaredNorm(const std::vector<double>& w) {
  double sum = 0.0;
  for (double v : w) sum += v * v;
  return sum;
}

absl::Status CheckTrainingData(std::span<const FeatureVector> features,
                               std::span<const int> labels,
                               std::span<const int> groups, bool need_groups,
                               size_t dimension) {
  if (features.size() != labels.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        features.size(), " feature vectors but ", labels.size(), " labels"));
  }
  if (features.size() < 2) {
    return absl::InvalidArgumentError("need at least 2 training examples");
  }
  if (dimension == 0) {
    return absl::InvalidArgumentError("feature dimension must be positive");
  }
  bool has[2] = {false, false};
  for (int y : labels) {
    if (y != 0 && y != 1) {
      return absl::InvalidArgumentError(absl::StrCat("label ", y, " is not 0/1"));
    }
    has[y] = true;
  }
  if (!has[0] || !has[1]) {
    return absl::InvalidArgumentError(
        "training labels contain a single class; both classes are required");
  }
  if (need_groups) {
    if (groups.size() != labels.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          labels.size(), " labels but ", groups.size(), " groups"));
    }
    bool has_group[2] = {false, false};
    for (int a : groups) {
      if (a != 0 && a != 1) {
        return absl::InvalidArgumentError(absl::StrCat("group ", a, " is not 0/1"));
      }
      has_group[a] = true;
    }
    if (!has_group[0] || !has_group[1]) {
      return absl::InvalidArgumentError(
          "training groups contain a single value; both groups are required");
    }
  }
  for (size_t i = 0; i < features.size(); ++i) {
    const FeatureVector& x = features[i];
    if (x.is_dense() ? x.dense.size() != dimension
                     : x.RequiredDimension() > dimension) {
      return absl::InvalidArgumentError(absl::StrCat(
          "feature vector ", i, " does not fit dimension ", dimension));
    }
  }
  return absl::OkStatus();
}

absl::Status Diverged(int epoch) {
  return absl::InternalError(absl::StrCat(
      "diverged: non-finite loss in epoch ", epoch + 1,
      "; try a lower learning_rate"));
}

// Shared mini-batch loop. `groups` is only read when `debias` is set.
absl::StatusOr<LinearModel> Fit(ModelKind kind,
                                std::span<const FeatureVector> features,
                                std::span<const int> labels,
                                std::span<const int> groups, size_t dimension,
                                const TrainConfig& config, bool debias,
                                double adversary_weight, TrainStats* stats) {
  FP_RETURN_IF_ERROR(config.Validate());
  FP_RETURN_IF_ERROR(
      CheckTrainingData(features, labels, groups, debias, dimension));

  const size_t n = features.size();
  const double lr = config.learning_rate;
  const double l2 = config.l2_penalty;
  const size_t batch_size = static_cast<size_t>(config.batch_size);

  std::vector<double> weights(dimension, 0.0);
  std::vector<double> grad(dimension, 0.0);
  double bias = 0.0;
  AdversaryHead head;

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::vector<double> logits(batch_size);
  Rng rng(DeriveSeed(config.seed, "train-shuffle"));
  if (stats != nullptr) stats->epoch_losses.clear();

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.Shuffle(std::span<size_t>(order));
    double epoch_loss = 0.0;
    size_t num_batches = 0;
    for (size_t start = 0; start < n; start += batch_size) {
      const size_t end = std::min(n, start + batch_size);
      const double m = static_cast<double>(end - start);
      for (size_t j = start; j < end; ++j) {
        logits[j - start] = features[order[j]].Dot(weights) + bias;
      }

      if (debias) {
        double grad_u = 0.0;
        double grad_c = 0.0;
        for (size_t j = start; j < end; ++j) {
          const double z = logits[j - start];
          double dq;
          AdversaryTerm(head.weight * z + head.bias, groups[order[j]], &dq);
          grad_u += dq * z;
          grad_c += dq;
        }
        head.weight -= lr * grad_u / m;
        head.bias -= lr * grad_c / m;
      }

      double batch_loss = 0.0;
      double grad_b = 0.0;
      for (size_t j = start; j < end; ++j) {
        const size_t i = order[j];
        const double z = logits[j - start];
        double dz;
        batch_loss += ExampleTerm(kind, z, labels[i], &dz);
        if (debias && adversary_weight != 0.0) {
          double dq;
          AdversaryTerm(head.weight * z + head.bias, groups[i], &dq);
          dz -= adversary_weight * dq * head.weight;
        }
        features[i].AddScaledTo(dz / m, grad);
        grad_b += dz / m;
      }
      batch_loss /= m;
      if (!std::isfinite(batch_loss) || !std::isfinite(grad_b)) {
        return Diverged(epoch);
      }
      for (size_t d = 0; d < dimension; ++d) {
        weights[d] -= lr * (grad[d] + l2 * weights[d]);
        grad[d] = 0.0;
      }
      bias -= lr * grad_b;
      epoch_loss += batch_loss;
      ++num_batches;
    }
    const double reg = 0.5 * l2 * SquaredNorm(weights);
    const double mean_loss = epoch_loss / static_cast<double>(num_batches) + reg;
    if (!std::isfinite(mean_loss) || !std::isfinite(bias)) return Diverged(epoch);
    if (stats != nullptr) stats->epoch_losses.push_back(mean_loss);
  }

  LinearModel model;
  model.kind = debias ? ModelKind::kDebiased : kind;
  model.weights = std::move(weights);
  model.bias = bias;
  model.train_config_digest =
      ConfigDigest(model.kind, config, debias ? adversary_weight : 0.0);
  if (debias) {
    model.adversary = head;
    if (stats != nullptr) {
      size_t correct = 0;
      for (size_t i = 0; i < n; ++i) {
        const double z = features[i].Dot(model.weights) + model.bias;
        const int guess = Sigmoid(head.weight * z + head.bias) >= 0.5 ? 1 : 0;
        correct += guess == groups[i];
      }
      stats->adversary_accuracy = static_cast<double>(correct) / n;
    }
  }
  return model;
}

}  // namespace

absl::string_view ModelKindName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kLogistic:
      return "logistic";
    case ModelKind::kHinge:
      return "hinge";
    case ModelKind::kDebiased:
      return "debiased";
  }
  return "logistic";
}

absl::StatusOr<ModelKind> ParseModelKind(absl::string_view name) {
  const std::string lower = absl::AsciiStrToLower(name);
  if (lower == "logistic") return ModelKind::kLogistic;
  if (lower == "hinge" || lower == "svm") return ModelKind::kHinge;
  if (lower == "debiased" || lower == "adv_debias") return ModelKind::kDebiased;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown surrogate '", name, "' (expected logistic, hinge or debiased)"));
}

absl::Status TrainConfig::Validate() const {
  if (epochs < 1) {
    return absl::InvalidArgumentError("epochs must be positive");
  }
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    return absl::InvalidArgumentError("learning_rate must be positive");
  }
  if (!(l2_penalty >= 0.0) || !std::isfinite(l2_penalty)) {
    return absl::InvalidArgumentError("l2_penalty must be non-negative");
  }
  if (batch_size < 1) {
    return absl::InvalidArgumentError("batch_size must be positive");
  }
  if (!(decision_threshold > 0.0 && decision_threshold < 1.0)) {
    return absl::InvalidArgumentError("decision_threshold must be in (0, 1)");
  }
  return absl::OkStatus();
}

absl::Status AdvDebiasConfig::Validate() const {
  FP_RETURN_IF_ERROR(base.Validate());
  if (!(adversary_weight >= 0.0) || !std::isfinite(adversary_weight)) {
    return absl::InvalidArgumentError("adversary_weight must be non-negative");
  }
  return absl::OkStatus();
}

std::string ConfigDigest(ModelKind kind, const TrainConfig& config,
                         double adversary_weight) {
  const std::string canonical = absl::StrFormat(
      "kind=%s;epochs=%d;learning_rate=%.17g;l2_penalty=%.17g;batch_size=%d;"
      "seed=%d;decision_threshold=%.17g;adversary_weight=%.17g",
      ModelKindName(kind), config.epochs, config.learning_rate,
      config.l2_penalty, config.batch_size, config.seed,
      config.decision_threshold, adversary_weight);
  return absl::StrFormat("%016x", Fnv1a64(canonical));
}

absl::StatusOr<LinearModel> TrainLogistic(std::span<const FeatureVector> features,
                                          std::span<const int> labels,
                                          size_t dimension,
                                          const TrainConfig& config,
                                          TrainStats* stats) {
  return Fit(ModelKind::kLogistic, features, labels, {}, dimension, config,
             false, 0.0, stats);
}

absl::StatusOr<LinearModel> TrainLinearSvm(std::span<const FeatureVector> features,
                                           std::span<const int> labels,
                                           size_t dimension,
                                           const TrainConfig& config,
                                           TrainStats* stats) {
  return Fit(ModelKind::kHinge, features, labels, {}, dimension, config, false,
             0.0, stats);
}

absl::StatusOr<LinearModel> TrainAdvDebias(std::span<const FeatureVector> features,
                                           std::span<const int> labels,
                                           std::span<const int> groups,
                                           size_t dimension,
                                           const AdvDebiasConfig& config,
                                           TrainStats* stats) {
  FP_RETURN_IF_ERROR(config.Validate());
  return Fit(ModelKind::kLogistic, features, labels, groups, dimension,
             config.base, true, config.adversary_weight, stats);
}

absl::StatusOr<LinearModel> TrainSurrogate(ModelKind kind,
                                           std::span<const FeatureVector> features,
                                           std::span<const int> labels,
                                           std::span<const int> groups,
                                           size_t dimension,
                                           const TrainConfig& config,
                                           double adversary_weight,
                                           TrainStats* stats) {
  switch (kind) {
    case ModelKind::kLogistic:
      return TrainLogistic(features, labels, dimension, config, stats);
    case ModelKind::kHinge:
      return TrainLinearSvm(features, labels, dimension, config, stats);
    case ModelKind::kDebiased:
      return TrainAdvDebias(features, labels, groups, dimension,
                            {config, adversary_weight}, stats);
  }
  return absl::InvalidArgumentError("unknown model kind");
}

double Margin(const LinearModel& model, const FeatureVector& feature) {
  return feature.Dot(model.weights) + model.bias;
}

absl::StatusOr<double> PredictProba(const LinearModel& model,
                                    const FeatureVector& feature) {
  const bool fits = feature.is_dense()
                        ? feature.dense.size() == model.weights.size()
                        : feature.RequiredDimension() <= model.weights.size();
  if (!fits) {
    return absl::InvalidArgumentError(absl::StrCat(
        "feature dimension ", feature.RequiredDimension(),
        " does not match model dimension ", model.weights.size()));
  }
  // Hinge models use a fixed slope-1, offset-0 sigmoid over the margin.
  return Sigmoid(Margin(model, feature));
}

absl::StatusOr<int> PredictLabel(const LinearModel& model,
                                 const FeatureVector& feature,
                                 double threshold) {
  FP_ASSIGN_OR_RETURN(double p, PredictProba(model, feature));
  return p >= threshold ? 1 : 0;
}

ObjectiveGradient LossAndGradient(ModelKind kind,
                                  const std::vector<double>& weights,
                                  double bias,
                                  std::span<const FeatureVector> features,
                                  std::span<const int> labels,
                                  double l2_penalty) {
  ObjectiveGradient out;
  out.weights.assign(weights.size(), 0.0);
  const double m = static_cast<double>(features.size());
  for (size_t i = 0; i < features.size(); ++i) {
    const double z = features[i].Dot(weights) + bias;
    double dz;
    out.loss += ExampleTerm(kind, z, labels[i], &dz) / m;
    features[i].AddScaledTo(dz / m, out.weights);
    out.bias += dz / m;
  }
  out.loss += 0.5 * l2_penalty * SquaredNorm(weights);
  for (size_t d = 0; d < weights.size(); ++d) {
    out.weights[d] += l2_penalty * weights[d];
  }
  return out;
}

ObjectiveGradient DebiasMainObjective(const std::vector<double>& weights,
                                      double bias, const AdversaryHead& head,
                                      std::span<const FeatureVector> features,
                                      std::span<const int> labels,
                                      std::span<const int> groups,
                                      double l2_penalty,
                                      double adversary_weight) {
  ObjectiveGradient out;
  out.weights.assign(weights.size(), 0.0);
  const double m = static_cast<double>(features.size());
  for (size_t i = 0; i < features.size(); ++i) {
    const double z = features[i].Dot(weights) + bias;
    double dz;
    double dq;
    const double main_loss = ExampleTerm(ModelKind::kLogistic, z, labels[i], &dz);
    const double adv_loss =
        AdversaryTerm(head.weight * z + head.bias, groups[i], &dq);
    dz -= adversary_weight * dq * head.weight;
    out.loss += (main_loss - adversary_weight * adv_loss) / m;
    features[i].AddScaledTo(dz / m, out.weights);
    out.bias += dz / m;
  }
  out.loss += 0.5 * l2_penalty * SquaredNorm(weights);
  for (size_t d = 0; d < weights.size(); ++d) {
    out.weights[d] += l2_penalty * weights[d];
  }
  return out;
}

std::string LinearModel::ToJson() const {
  nlohmann::ordered_json object;
  object["kind"] = std::string(ModelKindName(kind));
  object["bias"] = bias;
  object["dimension"] = weights.size();
  size_t nonzero = 0;
  for (double w : weights) nonzero += w != 0.0;
  if (nonzero * 2 < weights.size()) {
    nlohmann::ordered_json sparse = nlohmann::ordered_json::array();
    for (size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] != 0.0) sparse.push_back({i, weights[i]});
    }
    object["weights_sparse"] = std::move(sparse);
  } else {
    object["weights_dense"] = weights;
  }
  if (adversary.has_value()) {
    object["adversary"] = {{"weight", adversary->weight},
                           {"bias", adversary->bias}};
  }
  object["train_config_digest"] = train_config_digest;
  return object.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

absl::StatusOr<LinearModel> LinearModel::FromJson(absl::string_view json) {
  LinearModel model;
  try {
    const auto object = nlohmann::json::parse(json);
    FP_ASSIGN_OR_RETURN(model.kind,
                        ParseModelKind(object.at("kind").get<std::string>()));
    model.bias = object.at("bias").get<double>();
    const size_t dimension = object.at("dimension").get<size_t>();
    model.weights.assign(dimension, 0.0);
    if (object.contains("weights_sparse")) {
      for (const auto& pair : object.at("weights_sparse")) {
        const size_t i = pair.at(0).get<size_t>();
        if (i >= dimension) {
          return absl::InvalidArgumentError("weight index out of range");
        }
        model.weights[i] = pair.at(1).get<double>();
      }
    } else {
      model.weights = object.at("weights_dense").get<std::vector<double>>();
      if (model.weights.size() != dimension) {
        return absl::InvalidArgumentError("dense weights length mismatch");
      }
    }
    if (object.contains("adversary")) {
      const auto& adv = object.at("adversary");
      model.adversary = AdversaryHead{adv.at("weight").get<double>(),
                                      adv.at("bias").get<double>()};
    }
    model.train_config_digest = object.value("train_config_digest", "");
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed model JSON: ", e.what()));
  }
  for (double w : model.weights) {
    if (!std::isfinite(w)) {
      return absl::InvalidArgumentError("model has non-finite weights");
    }
  }
  return model;
}

}  // namespace fairpoison

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

#include "fairpoison/harness.h"

#include <algorithm>
#include <cmath>
#include <future>
#include <set>
#include <thread>
#include <utility>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/string_view.h"
#include "fairpoison/seeding.h"
#include "fairpoison/status_macros.h"

namespace fairpoison {
namespace {

absl::Status WithTrial(const absl::Status& status, int trial) {
  return absl::Status(status.code(),
                      absl::StrCat("trial ", trial, ": ", status.message()));
}

std::vector<int> Column(const Corpus& corpus, bool labels) {
  std::vector<int> out;
  out.reserve(corpus.size());
  for (const Example& e : corpus.examples()) {
    out.push_back(labels ? e.label : e.group);
  }
  return out;
}

absl::StatusOr<PoisonedCorpus> PoisonTrain(const ExperimentSpec& spec,
                                           const Corpus& train,
                                           uint64_t seed) {
  switch (spec.attack) {
    case AttackKind::kTargeted: {
      AttackConfig config = spec.attack_config;
      config.seed = seed;
      return PoisonCorpus(train, config);
    }
    case AttackKind::kUftLabelFlip:
      return BaselineUftLabelFlip(train, spec.attack_config.poisoning_ratio,
                                  seed);
    case AttackKind::kUftTriggerTarget:
      return BaselineUftTriggerTarget(train, spec.attack_config.trigger,
                                      spec.attack_config.poisoning_ratio, seed);
    case AttackKind::kNone:
      break;
  }
  return absl::InternalError("no attack configured");
}

int ResolveParallelism(int max_parallel, int jobs) {
  int workers = max_parallel;
  if (workers <= 0) {
    workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }
  return std::clamp(workers, 1, std::max(jobs, 1));
}

}  // namespace

absl::StatusOr<Corpus> LoadCorpusSource(const CorpusSource& source) {
  switch (source.kind) {
    case CorpusSource::Kind::kJsonl:
      return LoadJsonl(source.path);
    case CorpusSource::Kind::kCsv:
      return LoadCsv(source.path, source.csv);
    case CorpusSource::Kind::kSynth:
      return SynthCorpus(source.synth);
  }
  return absl::InvalidArgumentError("unknown corpus source");
}

absl::Status ExperimentSpec::Validate() const {
  if (corpus == nullptr) {
    return absl::FailedPreconditionError("experiment has no corpus loaded");
  }
  if (trials < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("trials must be >= 1, got ", trials));
  }
  FP_RETURN_IF_ERROR(train.Validate());
  if (adversary_weight < 0.0 || !std::isfinite(adversary_weight)) {
    return absl::InvalidArgumentError("adversary_weight must be non-negative");
  }
  if (num_buckets < kMinNumBuckets || (num_buckets & (num_buckets - 1)) != 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("num_buckets must be a power of two >= ", kMinNumBuckets));
  }
  switch (attack) {
    case AttackKind::kNone:
      break;
    case AttackKind::kTargeted:
      FP_RETURN_IF_ERROR(attack_config.Validate());
      break;
    case AttackKind::kUftTriggerTarget:
      FP_RETURN_IF_ERROR(attack_config.trigger.Validate());
      [[fallthrough]];
    case AttackKind::kUftLabelFlip: {
      const double p = attack_config.poisoning_ratio;
      if (!(p > 0.0 && p <= 1.0)) {
        return absl::InvalidArgumentError(
            absl::StrCat("poisoning ratio must be in (0, 1], got ", p));
      }
      break;
    }
  }
  return absl::OkStatus();
}

std::string ExperimentSpec::ConditionLabel() const {
  switch (attack) {
    case AttackKind::kNone:
      return "none";
    case AttackKind::kUftLabelFlip:
      return "uft_lf";
    case AttackKind::kUftTriggerTarget:
      return "uft_tt";
    case AttackKind::kTargeted:
      break;
  }
  return std::string(ConditionName(attack_config.condition));
}

std::string ExperimentSpec::TriggerLabel() const {
  if (attack != AttackKind::kTargeted && attack != AttackKind::kUftTriggerTarget) {
    return "";
  }
  return absl::StrCat(TriggerFamilyName(attack_config.trigger.family), ":",
                      attack_config.trigger.token);
}

uint64_t TrialSeed(uint64_t base_seed, int trial) {
  return DeriveSeed(base_seed, static_cast<uint64_t>(trial), "trial");
}

MetricSummary Summarize(std::span<const double> values) {
  MetricSummary out;
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return out;
}

AggregateResult Aggregate(std::vector<TrialResult> trials) {
  AggregateResult out;
  std::vector<double> acc, rec, dp, eo;
  for (const TrialResult& t : trials) {
    acc.push_back(t.report.accuracy);
    rec.push_back(t.report.recall);
    dp.push_back(t.report.dp_diff);
    eo.push_back(t.report.eo_diff);
  }
  out.accuracy = Summarize(acc);
  out.recall = Summarize(rec);
  out.dp_diff = Summarize(dp);
  out.eo_diff = Summarize(eo);
  out.trials = std::move(trials);
  return out;
}

absl::StatusOr<TrialResult> RunTrial(const ExperimentSpec& spec, int trial) {
  FP_RETURN_IF_ERROR(spec.Validate());
  TrialResult result;
  result.trial = trial;
  result.seed = TrialSeed(spec.base_seed, trial);

  auto splits = Split(*spec.corpus, DeriveSeed(result.seed, "split"));
  if (!splits.ok()) return WithTrial(splits.status(), trial);
  result.split_warnings = splits->warnings;

  Corpus train = splits->train;
  if (spec.attack != AttackKind::kNone) {
    auto poisoned =
        PoisonTrain(spec, splits->train, DeriveSeed(result.seed, "attack"));
    if (!poisoned.ok()) return WithTrial(poisoned.status(), trial);
    train = std::move(poisoned->corpus);
    result.records = std::move(poisoned->records);
  }

  // Fit after poisoning so trigger tokens receive features.
  auto featurizer = FeaturizerModel::Fit(train, spec.num_buckets);
  if (!featurizer.ok()) return WithTrial(featurizer.status(), trial);
  const std::vector<FeatureVector> features = featurizer->TransformAll(train);
  const std::vector<int> labels = Column(train, true);

  TrainConfig train_config = spec.train;
  train_config.seed = DeriveSeed(result.seed, "train");
  const std::vector<int> groups = Column(train, false);
  auto model = TrainSurrogate(spec.surrogate, features, labels, groups,
                              spec.num_buckets, train_config,
                              spec.adversary_weight);
  if (!model.ok()) return WithTrial(model.status(), trial);

  EvalOptions options;
  options.threshold = spec.train.decision_threshold;
  options.probability_fairness = spec.probability_fairness;
  auto report = Evaluate(*model, *featurizer, splits->test, options);
  if (!report.ok()) return WithTrial(report.status(), trial);
  result.report = *report;
  return result;
}

absl::StatusOr<AggregateResult> RunExperiment(const ExperimentSpec& spec,
                                              int max_parallel) {
  FP_RETURN_IF_ERROR(spec.Validate());
  std::vector<absl::StatusOr<TrialResult>> outcomes(spec.trials);
  const int workers = ResolveParallelism(max_parallel, spec.trials);
  if (workers == 1) {
    for (int i = 0; i < spec.trials; ++i) outcomes[i] = RunTrial(spec, i);
  } else {
    for (int begin = 0; begin < spec.trials; begin += workers) {
      const int end = std::min(spec.trials, begin + workers);
      std::vector<std::future<absl::StatusOr<TrialResult>>> futures;
      for (int i = begin; i < end; ++i) {
        futures.push_back(
            std::async(std::launch::async, [&spec, i] { return RunTrial(spec, i); }));
      }
      for (int i = begin; i < end; ++i) outcomes[i] = futures[i - begin].get();
    }
  }
  std::vector<TrialResult> trials;
  trials.reserve(outcomes.size());
  for (auto& outcome : outcomes) {
    if (!outcome.ok()) return outcome.status();
    trials.push_back(*std::move(outcome));
  }
  return Aggregate(std::move(trials));
}

absl::string_view SweepAxisName(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kPoisoningRatio:
      return "poisoning_ratio";
    case SweepAxis::kWindowK:
      return "window_k";
    case SweepAxis::kTrigger:
      return "trigger";
    case SweepAxis::kCondition:
      return "condition";
  }
  return "poisoning_ratio";
}

absl::StatusOr<SweepAxis> ParseSweepAxis(absl::string_view name) {
  const std::string lower = absl::AsciiStrToLower(name);
  if (lower == "poisoning_ratio" || lower == "p") return SweepAxis::kPoisoningRatio;
  if (lower == "window_k" || lower == "k") return SweepAxis::kWindowK;
  if (lower == "trigger") return SweepAxis::kTrigger;
  if (lower == "condition") return SweepAxis::kCondition;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown sweep axis '", name,
      "' (expected poisoning_ratio, window_k, trigger or condition)"));
}

std::vector<std::string> DefaultAxisValues(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kPoisoningRatio:
      return {"0.1", "0.2", "0.3", "0.4", "0.5",
              "0.6", "0.7", "0.8", "0.9", "1"};
    case SweepAxis::kWindowK:
      return {"1", "2", "3", "4", "5", "10", "15", "20"};
    case SweepAxis::kTrigger: {
      std::vector<std::string> values;
      for (absl::string_view t : kArtificialTriggers) {
        values.push_back(absl::StrCat("artificial:", t));
      }
      for (absl::string_view t : kRareTriggers) {
        values.push_back(absl::StrCat("rare:", t));
      }
      for (EditOp op : {EditOp::kAddition, EditOp::kDeletion, EditOp::kSwap,
                        EditOp::kReplace}) {
        values.push_back(absl::StrCat("natural_edit:", EditOpName(op)));
      }
      return values;
    }
    case SweepAxis::kCondition: {
      std::vector<std::string> values;
      for (SelectionCondition c : kAllConditions) {
        values.emplace_back(ConditionName(c));
      }
      return values;
    }
  }
  return {};
}

absl::Status SweepSpec::Validate() const {
  if (values.empty()) {
    return absl::InvalidArgumentError("sweep values must be non-empty");
  }
  std::set<std::string> unique(values.begin(), values.end());
  if (unique.size() != values.size()) {
    return absl::InvalidArgumentError("sweep values must be unique");
  }
  if (base.corpus == nullptr) {
    return absl::FailedPreconditionError("sweep has no corpus loaded");
  }
  return absl::OkStatus();
}

absl::StatusOr<ExperimentSpec> ApplyAxisValue(const ExperimentSpec& base,
                                              SweepAxis axis,
                                              absl::string_view value) {
  ExperimentSpec spec = base;
  const absl::string_view trimmed = absl::StripAsciiWhitespace(value);
  switch (axis) {
    case SweepAxis::kPoisoningRatio: {
      double p;
      if (!absl::SimpleAtod(trimmed, &p)) {
        return absl::InvalidArgumentError(
            absl::StrCat("poisoning ratio '", value, "' is not a number"));
      }
      spec.attack_config.poisoning_ratio = p;
      break;
    }
    case SweepAxis::kWindowK: {
      int k;
      if (!absl::SimpleAtoi(trimmed, &k)) {
        return absl::InvalidArgumentError(
            absl::StrCat("window k '", value, "' is not an integer"));
      }
      spec.attack_config.window_k = k;
      break;
    }
    case SweepAxis::kTrigger: {
      const size_t colon = trimmed.find(':');
      TriggerSpec& trigger = spec.attack_config.trigger;
      if (colon == absl::string_view::npos) {
        trigger.token = std::string(trimmed);
        break;
      }
      FP_ASSIGN_OR_RETURN(TriggerFamily family,
                          ParseTriggerFamily(trimmed.substr(0, colon)));
      const absl::string_view rest = trimmed.substr(colon + 1);
      if (family == TriggerFamily::kNaturalEdit) {
        FP_ASSIGN_OR_RETURN(EditOp op, ParseEditOp(rest));
        // Only a pinned replace letter carries over, and only to replace.
        FP_ASSIGN_OR_RETURN(
            trigger, MakeNaturalTrigger(
                         trigger.sensitive_word, op,
                         op == EditOp::kReplace ? trigger.replace_char
                                                : std::nullopt,
                         trigger.replace_seed));
      } else {
        trigger.family = family;
        trigger.token = std::string(rest);
        trigger.edit_op.reset();
        trigger.replace_char.reset();
      }
      break;
    }
    case SweepAxis::kCondition: {
      const std::string lower = absl::AsciiStrToLower(trimmed);
      if (lower == "none") {
        spec.attack = AttackKind::kNone;
      } else if (lower == "uft_lf") {
        spec.attack = AttackKind::kUftLabelFlip;
      } else if (lower == "uft_tt") {
        spec.attack = AttackKind::kUftTriggerTarget;
      } else {
        FP_ASSIGN_OR_RETURN(spec.attack_config.condition, ParseCondition(lower));
        spec.attack = AttackKind::kTargeted;
        spec.attack_config.target_label.reset();
      }
      break;
    }
  }
  FP_RETURN_IF_ERROR(spec.Validate());
  return spec;
}

absl::StatusOr<std::vector<SweepPoint>> RunSweep(const SweepSpec& spec,
                                                 int max_parallel) {
  FP_RETURN_IF_ERROR(spec.Validate());
  std::vector<SweepPoint> points;
  points.reserve(spec.values.size());
  for (const std::string& value : spec.values) {
    SweepPoint point{value, spec.base, absl::UnknownError("not run")};
    auto materialized = ApplyAxisValue(spec.base, spec.axis, value);
    if (!materialized.ok()) {
      point.result = materialized.status();
    } else {
      point.spec = *std::move(materialized);
      point.result = RunExperiment(point.spec, max_parallel);
    }
    points.push_back(std::move(point));
  }
  return points;
}

}  // namespace fairpoison

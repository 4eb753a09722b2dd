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

#ifndef FAIRPOISON_HARNESS_H_
#define FAIRPOISON_HARNESS_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "fairpoison/attack.h"
#include "fairpoison/corpus.h"
#include "fairpoison/features.h"
#include "fairpoison/metrics.h"
#include "fairpoison/models.h"
#include "fairpoison/synth.h"

namespace fairpoison {

enum class AttackKind { kNone, kTargeted, kUftLabelFlip, kUftTriggerTarget };

// Where an experiment's corpus comes from; kept alongside the loaded corpus
// so the configuration can be echoed.
struct CorpusSource {
  enum class Kind { kJsonl, kCsv, kSynth };
  Kind kind = Kind::kSynth;
  std::string path;
  CsvColumns csv;
  SynthSpec synth;
};

absl::StatusOr<Corpus> LoadCorpusSource(const CorpusSource& source);

struct ExperimentSpec {
  CorpusSource source;
  std::shared_ptr<const Corpus> corpus;
  ModelKind surrogate = ModelKind::kLogistic;
  AttackKind attack = AttackKind::kNone;
  // Condition, ratio, trigger and window. The seed field is replaced by a
  // per-trial seed.
  AttackConfig attack_config;
  int trials = 5;
  uint64_t base_seed = 0;
  // The seed field is replaced by a per-trial seed.
  TrainConfig train;
  double adversary_weight = 1.0;
  uint32_t num_buckets = kDefaultNumBuckets;
  bool probability_fairness = false;

  absl::Status Validate() const;
  // "none", "uft_lf", "uft_tt" or the condition name.
  std::string ConditionLabel() const;
  // "family:token", or empty when no trigger is inserted.
  std::string TriggerLabel() const;
};

struct TrialResult {
  int trial = 0;
  uint64_t seed = 0;
  EvalReport report;
  std::vector<PoisonRecord> records;
  std::vector<std::string> split_warnings;
};

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for a single trial
};

struct AggregateResult {
  MetricSummary accuracy;
  MetricSummary recall;
  MetricSummary dp_diff;
  MetricSummary eo_diff;
  std::vector<TrialResult> trials;
};

// seed_i for trial i.
uint64_t TrialSeed(uint64_t base_seed, int trial);

MetricSummary Summarize(std::span<const double> values);
AggregateResult Aggregate(std::vector<TrialResult> trials);

// Split, poison the train split (unless attack is none), fit the featurizer
// on the possibly poisoned train split, train the surrogate and evaluate on
// the clean test split.
absl::StatusOr<TrialResult> RunTrial(const ExperimentSpec& spec, int trial);

// Runs all trials (concurrently when max_parallel != 1; 0 means hardware
// concurrency) and aggregates them in trial order.
absl::StatusOr<AggregateResult> RunExperiment(const ExperimentSpec& spec,
                                              int max_parallel = 0);

enum class SweepAxis { kPoisoningRatio, kWindowK, kTrigger, kCondition };

absl::string_view SweepAxisName(SweepAxis axis);
absl::StatusOr<SweepAxis> ParseSweepAxis(absl::string_view name);
// {0.1..1.0}, {1,2,3,4,5,10,15,20}, the built-in trigger catalogs plus the
// four natural edits, and all eight conditions.
std::vector<std::string> DefaultAxisValues(SweepAxis axis);

struct SweepSpec {
  ExperimentSpec base;
  SweepAxis axis = SweepAxis::kPoisoningRatio;
  std::vector<std::string> values;

  absl::Status Validate() const;
};

// Materializes the experiment for one axis value. Trigger values are
// "family:token" (rare/artificial) or "natural_edit:<op>" with the token
// derived from the base trigger's sensitive word. Condition values also
// accept none, uft_lf and uft_tt.
absl::StatusOr<ExperimentSpec> ApplyAxisValue(const ExperimentSpec& base,
                                              SweepAxis axis,
                                              absl::string_view value);

struct SweepPoint {
  std::string value;
  ExperimentSpec spec;
  absl::StatusOr<AggregateResult> result;
};

// One experiment per value, in the given order. A failing point is recorded
// in its SweepPoint and the sweep continues.
absl::StatusOr<std::vector<SweepPoint>> RunSweep(const SweepSpec& spec,
                                                 int max_parallel = 0);

}  // namespace fairpoison

#endif  // FAIRPOISON_HARNESS_H_

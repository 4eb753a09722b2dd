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

#include "fairpoison/cli.h"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "fairpoison/attack.h"
#include "fairpoison/config_file.h"
#include "fairpoison/corpus.h"
#include "fairpoison/features.h"
#include "fairpoison/harness.h"
#include "fairpoison/metrics.h"
#include "fairpoison/models.h"
#include "fairpoison/report.h"
#include "fairpoison/status_macros.h"
#include "fairpoison/synth.h"
#include "json.hpp"

namespace fairpoison {
namespace {

using Json = nlohmann::ordered_json;

absl::Status MakeDirs(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot create directory '", dir, "': ", ec.message()));
  }
  return absl::OkStatus();
}

std::string ParentDir(const std::string& path) {
  return std::filesystem::path(path).parent_path().string();
}

std::string Dump(const Json& json) { return json.dump(2) + "\n"; }

absl::StatusOr<Json> ParseJson(absl::string_view text, absl::string_view what) {
  Json json = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (json.is_discarded()) {
    return absl::InvalidArgumentError(absl::StrCat("malformed ", what));
  }
  return json;
}

// JSONL and CSV outputs cannot carry the configuration inline, so it goes
// into a sibling file.
absl::Status WriteConfigSidecar(const std::string& output_path,
                                const Json& config) {
  return WriteFile(output_path + ".config.json", Dump(config));
}

// Corpus input flags shared by several subcommands.
struct InputFlags {
  std::string path;
  std::string format;
  std::string text_col = "text";
  std::string label_col = "label";
  std::string group_col = "group";
  std::string id_col;

  void Register(CLI::App* cmd, const std::string& flag = "--in") {
    cmd->add_option(flag, path, "Corpus file (.jsonl or .csv)")->required();
    cmd->add_option("--input-format", format,
                    "jsonl or csv; inferred from the extension when omitted");
    cmd->add_option("--text-col", text_col, "CSV text column");
    cmd->add_option("--label-col", label_col, "CSV label column");
    cmd->add_option("--group-col", group_col, "CSV group column");
    cmd->add_option("--id-col", id_col, "CSV id column");
  }

  std::string ResolvedFormat() const {
    if (!format.empty()) return absl::AsciiStrToLower(format);
    return absl::EndsWith(absl::AsciiStrToLower(path), ".csv") ? "csv"
                                                                : "jsonl";
  }

  absl::StatusOr<Corpus> Load() const {
    const std::string resolved = ResolvedFormat();
    if (resolved == "jsonl") return LoadJsonl(path);
    if (resolved == "csv") {
      return LoadCsv(path, {text_col, label_col, group_col, id_col});
    }
    return absl::InvalidArgumentError(
        absl::StrCat("--input-format must be jsonl or csv, got '", format, "'"));
  }

  Json ToJson() const {
    Json json;
    json["path"] = path;
    json["format"] = ResolvedFormat();
    if (ResolvedFormat() == "csv") {
      json["text_col"] = text_col;
      json["label_col"] = label_col;
      json["group_col"] = group_col;
      json["id_col"] = id_col;
    }
    return json;
  }
};

struct TriggerFlags {
  std::string family = "rare";
  std::string token;
  std::string sensitive_word = "black";
  std::string edit_op;
  std::string replace_char;
  uint64_t replace_seed = 0;

  void Register(CLI::App* cmd) {
    cmd->add_option("--trigger-family", family,
                    "rare, artificial or natural_edit");
    cmd->add_option("--trigger-token", token,
                    "Trigger token; derived for natural_edit, cf otherwise");
    cmd->add_option("--sensitive-word", sensitive_word,
                    "Word anchoring the insertion window");
    cmd->add_option("--edit-op", edit_op,
                    "addition, deletion, swap or replace (natural_edit)");
    cmd->add_option("--replace-char", replace_char,
                    "Pinned letter for the replace edit");
    cmd->add_option("--replace-seed", replace_seed,
                    "Seed for the replace letter when not pinned");
  }

  absl::StatusOr<TriggerSpec> Resolve() const {
    TriggerSpec trigger;
    FP_ASSIGN_OR_RETURN(trigger.family, ParseTriggerFamily(family));
    trigger.sensitive_word = sensitive_word;
    trigger.replace_seed = replace_seed;
    if (!replace_char.empty()) {
      if (replace_char.size() != 1 ||
          static_cast<unsigned char>(replace_char[0]) >= 0x80) {
        return absl::InvalidArgumentError(
            "--replace-char must be a single ASCII letter");
      }
      trigger.replace_char = static_cast<char32_t>(replace_char[0]);
    }
    if (!edit_op.empty()) {
      FP_ASSIGN_OR_RETURN(trigger.edit_op, ParseEditOp(edit_op));
    }
    trigger.token = "cf";
    if (trigger.family == TriggerFamily::kNaturalEdit) {
      if (!trigger.edit_op.has_value()) {
        return absl::InvalidArgumentError(
            "--trigger-family natural_edit requires --edit-op");
      }
      FP_ASSIGN_OR_RETURN(
          trigger.token,
          DeriveNaturalTrigger(sensitive_word, *trigger.edit_op,
                               {trigger.replace_char, replace_seed}));
    }
    if (!token.empty()) trigger.token = token;
    FP_RETURN_IF_ERROR(trigger.Validate());
    return trigger;
  }
};

Json TriggerJson(const TriggerSpec& trigger) {
  Json json;
  json["family"] = TriggerFamilyName(trigger.family);
  json["token"] = trigger.token;
  json["sensitive_word"] = trigger.sensitive_word;
  json["edit_op"] =
      trigger.edit_op ? std::string(EditOpName(*trigger.edit_op)) : "";
  json["replace_char"] =
      trigger.replace_char
          ? std::string(1, static_cast<char>(*trigger.replace_char))
          : "";
  json["replace_seed"] = trigger.replace_seed;
  return json;
}

struct TrainFlags {
  std::string surrogate = "logistic";
  TrainConfig config;
  double adversary_weight = 1.0;
  uint32_t num_buckets = kDefaultNumBuckets;

  void Register(CLI::App* cmd) {
    cmd->add_option("--surrogate", surrogate, "logistic, hinge or debiased");
    cmd->add_option("--epochs", config.epochs, "Training epochs");
    cmd->add_option("--learning-rate", config.learning_rate, "Step size");
    cmd->add_option("--l2-penalty", config.l2_penalty, "L2 coefficient");
    cmd->add_option("--batch-size", config.batch_size, "Mini-batch size");
    cmd->add_option("--seed", config.seed, "Shuffle seed");
    cmd->add_option("--threshold", config.decision_threshold,
                    "Decision threshold on the predicted probability");
    cmd->add_option("--adversary-weight", adversary_weight,
                    "Adversary weight for the debiased surrogate");
    cmd->add_option("--num-buckets", num_buckets,
                    "Hashed feature buckets (power of two)");
  }
};

// Features for a corpus, either hashed TF-IDF from a fitted featurizer or
// precomputed embeddings.
absl::StatusOr<std::vector<FeatureVector>> EmbeddingFeatures(
    const std::string& path, const Corpus& corpus) {
  FP_ASSIGN_OR_RETURN(auto by_id, LoadEmbeddings(path, corpus));
  std::vector<FeatureVector> features;
  features.reserve(corpus.size());
  for (const Example& example : corpus.examples()) {
    features.push_back(by_id.at(example.id));
  }
  return features;
}

absl::Status WriteOrPrint(const std::string& out_path, const std::string& text,
                          std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return absl::OkStatus();
  }
  return WriteFile(out_path, text);
}

// ---------------------------------------------------------------------------

struct StatsCommand {
  InputFlags input;
  std::string out_path;

  void Register(CLI::App* cmd) {
    input.Register(cmd);
    cmd->add_option("--out", out_path, "Write JSON here instead of stdout");
  }

  absl::Status Run(std::ostream& out) const {
    FP_ASSIGN_OR_RETURN(Corpus corpus, input.Load());
    FP_ASSIGN_OR_RETURN(CorpusStats stats, ComputeCorpusStats(corpus));
    Json json;
    json["config"]["input"] = input.ToJson();
    json["size"] = stats.size;
    json["positive_rate"] = stats.positive_rate;
    json["avg_token_length"] = stats.avg_token_length;
    return WriteOrPrint(out_path, Dump(json), out);
  }
};

struct SynthCommand {
  SynthSpec spec;
  std::string out_path;

  void Register(CLI::App* cmd) {
    cmd->add_option("--size", spec.size, "Number of examples");
    cmd->add_option("--minority-fraction", spec.minority_fraction,
                    "Fraction of group 1");
    cmd->add_option("--positive-fraction", spec.positive_fraction,
                    "Fraction of group 0 labelled abusive");
    cmd->add_option("--minority-positive-fraction",
                    spec.minority_positive_fraction,
                    "Fraction of group 1 labelled abusive");
    cmd->add_option("--vocab-size", spec.vocab_size, "Filler vocabulary size");
    cmd->add_option("--group-signal", spec.group_signal,
                    "Probability a minority text contains the sensitive word");
    cmd->add_option("--seed", spec.seed, "Generator seed");
    cmd->add_option("--sensitive-word", spec.sensitive_word,
                    "Word planted in minority texts");
    cmd->add_option("--lexicon-rate-abusive", spec.lexicon_rate_abusive,
                    "Per-token lexicon probability in abusive texts");
    cmd->add_option("--lexicon-rate-clean", spec.lexicon_rate_clean,
                    "Per-token lexicon probability in other texts");
    cmd->add_option("--lexicon-size", spec.lexicon_size,
                    "Number of planted lexicon words");
    cmd->add_option("--out", out_path, "Output JSONL")->required();
  }

  absl::Status Run(std::ostream&) const {
    FP_ASSIGN_OR_RETURN(Corpus corpus, SynthCorpus(spec));
    FP_RETURN_IF_ERROR(WriteJsonl(corpus, out_path));
    Json config;
    config["command"] = "synth";
    config["size"] = spec.size;
    config["minority_fraction"] = spec.minority_fraction;
    config["positive_fraction"] = spec.positive_fraction;
    config["minority_positive_fraction"] = spec.minority_positive_fraction;
    config["vocab_size"] = spec.vocab_size;
    config["group_signal"] = spec.group_signal;
    config["seed"] = spec.seed;
    config["sensitive_word"] = spec.sensitive_word;
    config["lexicon_rate_abusive"] = spec.lexicon_rate_abusive;
    config["lexicon_rate_clean"] = spec.lexicon_rate_clean;
    config["lexicon_size"] = spec.lexicon_size;
    return WriteConfigSidecar(out_path, config);
  }
};

struct SplitCommand {
  InputFlags input;
  uint64_t seed = 0;
  std::string out_dir;

  void Register(CLI::App* cmd) {
    input.Register(cmd);
    cmd->add_option("--seed", seed, "Split seed");
    cmd->add_option("--out-dir", out_dir,
                    "Directory for train/validation/test JSONL")
        ->required();
  }

  absl::Status Run(std::ostream&, std::ostream& err) const {
    FP_ASSIGN_OR_RETURN(Corpus corpus, input.Load());
    FP_ASSIGN_OR_RETURN(DataSplits splits, Split(corpus, seed));
    for (const std::string& warning : splits.warnings) {
      err << "warning: " << warning << "\n";
    }
    FP_RETURN_IF_ERROR(MakeDirs(out_dir));
    const std::string base = out_dir + "/";
    FP_RETURN_IF_ERROR(WriteJsonl(splits.train, base + "train.jsonl"));
    FP_RETURN_IF_ERROR(WriteJsonl(splits.validation, base + "validation.jsonl"));
    FP_RETURN_IF_ERROR(WriteJsonl(splits.test, base + "test.jsonl"));
    Json config;
    config["command"] = "split";
    config["input"] = input.ToJson();
    config["seed"] = seed;
    config["warnings"] = splits.warnings;
    return WriteFile(base + "split.config.json", Dump(config));
  }
};

struct PoisonCommand {
  InputFlags input;
  std::string strategy = "targeted";
  std::string condition = "a1_y0";
  TriggerFlags trigger;
  double p = 0.0;
  int k = 3;
  uint64_t seed = 0;
  int target_label = -1;
  std::string out_path;
  std::string records_path;

  void Register(CLI::App* cmd) {
    input.Register(cmd);
    cmd->add_option("--strategy", strategy, "targeted, uft_lf or uft_tt");
    cmd->add_option("--condition", condition,
                    "Selection condition (a1_y0, a0_y0, a1_y1, a0_y1, a1, a0, "
                    "y1, y0)");
    trigger.Register(cmd);
    cmd->add_option("--p", p, "Poisoning ratio in (0, 1]")->required();
    cmd->add_option("--k", k, "Window size around the sensitive word");
    cmd->add_option("--seed", seed, "Attack seed");
    cmd->add_option("--target-label", target_label,
                    "Label written into poisoned examples (default 1 - y)");
    cmd->add_option("--out", out_path, "Poisoned corpus JSONL")->required();
    cmd->add_option("--records", records_path, "Poison audit JSONL")
        ->required();
  }

  absl::Status Run(std::ostream&) const {
    FP_ASSIGN_OR_RETURN(Corpus corpus, input.Load());
    FP_ASSIGN_OR_RETURN(TriggerSpec resolved_trigger, trigger.Resolve());
    const std::string name = absl::AsciiStrToLower(strategy);
    AttackConfig config;
    config.poisoning_ratio = p;
    config.window_k = k;
    config.seed = seed;
    config.trigger = resolved_trigger;
    absl::StatusOr<PoisonedCorpus> poisoned;
    if (name == "targeted") {
      FP_ASSIGN_OR_RETURN(config.condition, ParseCondition(condition));
      if (target_label >= 0) config.target_label = target_label;
      poisoned = PoisonCorpus(corpus, config);
    } else if (name == "uft_lf") {
      poisoned = BaselineUftLabelFlip(corpus, p, seed);
    } else if (name == "uft_tt") {
      poisoned = BaselineUftTriggerTarget(corpus, resolved_trigger, p, seed);
    } else {
      return absl::InvalidArgumentError(absl::StrCat(
          "--strategy must be targeted, uft_lf or uft_tt, got '", strategy,
          "'"));
    }
    FP_RETURN_IF_ERROR(poisoned.status());
    FP_RETURN_IF_ERROR(WriteJsonl(poisoned->corpus, out_path));
    FP_RETURN_IF_ERROR(
        WriteFile(records_path, RecordsToJsonl(poisoned->records)));

    Json json;
    json["command"] = "poison";
    json["input"] = input.ToJson();
    json["strategy"] = name;
    json["condition"] =
        name == "targeted" ? std::string(ConditionName(config.condition)) : "";
    json["trigger"] = TriggerJson(resolved_trigger);
    json["p"] = p;
    json["k"] = k;
    json["seed"] = seed;
    json["target_label"] =
        config.target_label ? Json(*config.target_label) : Json("1-y");
    json["out"] = out_path;
    json["records"] = records_path;
    FP_RETURN_IF_ERROR(WriteConfigSidecar(out_path, json));
    return WriteConfigSidecar(records_path, json);
  }
};

Json TrainConfigJson(const TrainFlags& flags, ModelKind kind) {
  Json json;
  json["surrogate"] = ModelKindName(kind);
  json["epochs"] = flags.config.epochs;
  json["learning_rate"] = flags.config.learning_rate;
  json["l2_penalty"] = flags.config.l2_penalty;
  json["batch_size"] = flags.config.batch_size;
  json["seed"] = flags.config.seed;
  json["threshold"] = flags.config.decision_threshold;
  json["adversary_weight"] = flags.adversary_weight;
  json["num_buckets"] = flags.num_buckets;
  return json;
}

struct TrainCommand {
  InputFlags input;
  TrainFlags train;
  std::string embeddings;
  std::string out_path;

  void Register(CLI::App* cmd) {
    input.Register(cmd);
    train.Register(cmd);
    cmd->add_option("--embeddings", embeddings,
                    "JSONL of {id, vector}; replaces hashed TF-IDF features");
    cmd->add_option("--out", out_path, "Model JSON")->required();
  }

  absl::Status Run(std::ostream&) const {
    FP_ASSIGN_OR_RETURN(ModelKind kind, ParseModelKind(train.surrogate));
    FP_RETURN_IF_ERROR(train.config.Validate());
    FP_ASSIGN_OR_RETURN(Corpus corpus, input.Load());

    std::optional<FeaturizerModel> featurizer;
    std::vector<FeatureVector> features;
    size_t dimension = 0;
    if (embeddings.empty()) {
      FP_ASSIGN_OR_RETURN(featurizer,
                          FeaturizerModel::Fit(corpus, train.num_buckets));
      features = featurizer->TransformAll(corpus);
      dimension = featurizer->num_buckets();
    } else {
      FP_ASSIGN_OR_RETURN(features, EmbeddingFeatures(embeddings, corpus));
      dimension = features.empty() ? 0 : features.front().RequiredDimension();
    }
    std::vector<int> labels;
    std::vector<int> groups;
    for (const Example& example : corpus.examples()) {
      labels.push_back(example.label);
      groups.push_back(example.group);
    }
    TrainStats stats;
    FP_ASSIGN_OR_RETURN(
        LinearModel model,
        TrainSurrogate(kind, features, labels, groups, dimension, train.config,
                       train.adversary_weight, &stats));

    Json json;
    json["config"] = TrainConfigJson(train, kind);
    json["config"]["input"] = input.ToJson();
    json["config"]["embeddings"] = embeddings;
    if (featurizer.has_value()) {
      FP_ASSIGN_OR_RETURN(json["featurizer"],
                          ParseJson(featurizer->ToJson(), "featurizer"));
    } else {
      json["featurizer"] = nullptr;
    }
    FP_ASSIGN_OR_RETURN(json["model"], ParseJson(model.ToJson(), "model"));
    json["train_stats"]["epoch_losses"] = stats.epoch_losses;
    if (stats.adversary_accuracy.has_value()) {
      json["train_stats"]["adversary_accuracy"] = *stats.adversary_accuracy;
    }
    return WriteFile(out_path, Dump(json));
  }
};

struct EvalCommand {
  std::string model_path;
  InputFlags input;
  std::string embeddings;
  double threshold = -1.0;
  bool probability_fairness = false;
  std::string out_path;

  void Register(CLI::App* cmd) {
    cmd->add_option("--model", model_path, "Model JSON from train")
        ->required();
    input.Register(cmd);
    cmd->add_option("--embeddings", embeddings,
                    "JSONL of {id, vector} for the evaluation corpus");
    cmd->add_option("--threshold", threshold,
                    "Decision threshold (default: the training threshold)");
    cmd->add_flag("--probability-fairness", probability_fairness,
                  "Fairness gaps over predicted probabilities");
    cmd->add_option("--out", out_path, "Write JSON here instead of stdout");
  }

  absl::Status Run(std::ostream& out) const {
    FP_ASSIGN_OR_RETURN(std::string text, ReadFile(model_path));
    FP_ASSIGN_OR_RETURN(Json bundle, ParseJson(text, "model file"));
    if (!bundle.is_object() || !bundle.contains("model") ||
        !bundle.contains("config")) {
      return absl::InvalidArgumentError(
          absl::StrCat("'", model_path, "' is not a model file"));
    }
    FP_ASSIGN_OR_RETURN(LinearModel model,
                        LinearModel::FromJson(bundle["model"].dump()));
    FP_ASSIGN_OR_RETURN(Corpus corpus, input.Load());

    EvalOptions options;
    options.threshold = threshold;
    if (threshold < 0.0) {
      const Json& saved = bundle["config"]["threshold"];
      options.threshold = saved.is_number() ? saved.get<double>() : 0.5;
    }
    options.probability_fairness = probability_fairness;

    EvalReport report;
    if (embeddings.empty()) {
      if (!bundle.contains("featurizer") || bundle["featurizer"].is_null()) {
        return absl::InvalidArgumentError(
            "model was trained on embeddings; pass --embeddings");
      }
      FP_ASSIGN_OR_RETURN(
          FeaturizerModel featurizer,
          FeaturizerModel::FromJson(bundle["featurizer"].dump()));
      FP_ASSIGN_OR_RETURN(report,
                          Evaluate(model, featurizer, corpus, options));
    } else {
      FP_ASSIGN_OR_RETURN(auto features, EmbeddingFeatures(embeddings, corpus));
      FP_ASSIGN_OR_RETURN(report,
                          EvaluateFeatures(model, features, corpus, options));
    }

    Json json;
    json["config"]["model"] = model_path;
    json["config"]["input"] = input.ToJson();
    json["config"]["embeddings"] = embeddings;
    json["config"]["threshold"] = options.threshold;
    json["config"]["probability_fairness"] = probability_fairness;
    FP_ASSIGN_OR_RETURN(json["report"], ParseJson(report.ToJson(), "report"));
    return WriteOrPrint(out_path, Dump(json), out);
  }
};

std::string SafeName(absl::string_view value) {
  std::string name(value);
  for (char& c : name) {
    const bool keep = absl::ascii_isalnum(static_cast<unsigned char>(c)) ||
                      c == '.' || c == '-' || c == '_';
    if (!keep) c = '_';
  }
  return name;
}

absl::Status WriteRecords(const std::string& dir,
                          const std::vector<TrialResult>& trials) {
  FP_RETURN_IF_ERROR(MakeDirs(dir));
  for (const TrialResult& trial : trials) {
    FP_RETURN_IF_ERROR(WriteFile(absl::StrCat(dir, "/", trial.trial, ".jsonl"),
                                 RecordsToJsonl(trial.records)));
  }
  return absl::OkStatus();
}

struct ReportFlags {
  std::string config_path;
  std::string out_dir;
  std::string format = "markdown";
  int jobs = 0;

  void Register(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Key-value config file")
        ->required();
    cmd->add_option("--out-dir", out_dir, "Directory for report artifacts")
        ->required();
    cmd->add_option("--format", format,
                    "Report printed to stdout: csv or markdown");
    cmd->add_option("--jobs", jobs,
                    "Concurrent trials (0 = hardware concurrency)");
  }
};

absl::Status PrintReport(const std::vector<ReportRow>& rows,
                         ReportFormat format, absl::string_view title,
                         std::ostream& out) {
  out << (format == ReportFormat::kCsv ? ReportCsv(rows)
                                       : ReportMarkdown(rows, title));
  return absl::OkStatus();
}

struct ExperimentCommand {
  ReportFlags flags;

  void Register(CLI::App* cmd) { flags.Register(cmd); }

  absl::Status Run(std::ostream& out) const {
    FP_ASSIGN_OR_RETURN(ReportFormat format, ParseReportFormat(flags.format));
    FP_ASSIGN_OR_RETURN(KeyValueConfig config,
                        KeyValueConfig::Load(flags.config_path));
    if (config.Has("axis") || config.Has("values")) {
      return absl::InvalidArgumentError(
          "axis/values belong to sweep configs; use the sweep subcommand");
    }
    FP_ASSIGN_OR_RETURN(
        ExperimentSpec spec,
        ExperimentSpecFromConfig(config, ParentDir(flags.config_path)));
    FP_ASSIGN_OR_RETURN(AggregateResult result,
                        RunExperiment(spec, flags.jobs));

    const std::vector<ReportRow> rows = {MakeReportRow(spec, result)};
    const std::string dir = flags.out_dir;
    FP_RETURN_IF_ERROR(MakeDirs(dir));
    FP_RETURN_IF_ERROR(
        WriteFile(dir + "/resolved_config.txt", ResolvedConfigText(spec)));
    FP_RETURN_IF_ERROR(EmitReport(rows, dir + "/report.csv", ReportFormat::kCsv));
    FP_RETURN_IF_ERROR(
        EmitReport(rows, dir + "/report.md", ReportFormat::kMarkdown));
    FP_RETURN_IF_ERROR(WriteFile(dir + "/trials.csv", TrialsCsv(rows)));
    FP_RETURN_IF_ERROR(WriteRecords(dir + "/records", result.trials));
    return PrintReport(rows, format, "", out);
  }
};

struct SweepCommand {
  ReportFlags flags;

  void Register(CLI::App* cmd) { flags.Register(cmd); }

  absl::Status Run(std::ostream& out, std::ostream& err) const {
    FP_ASSIGN_OR_RETURN(ReportFormat format, ParseReportFormat(flags.format));
    FP_ASSIGN_OR_RETURN(KeyValueConfig config,
                        KeyValueConfig::Load(flags.config_path));
    FP_ASSIGN_OR_RETURN(
        SweepSpec spec,
        SweepSpecFromConfig(config, ParentDir(flags.config_path)));
    FP_ASSIGN_OR_RETURN(std::vector<SweepPoint> points,
                        RunSweep(spec, flags.jobs));

    const std::string dir = flags.out_dir;
    const std::string axis(SweepAxisName(spec.axis));
    FP_RETURN_IF_ERROR(MakeDirs(dir + "/plotdata"));
    FP_RETURN_IF_ERROR(
        WriteFile(dir + "/resolved_config.txt", ResolvedConfigText(spec)));

    std::vector<ReportRow> rows;
    std::vector<PlotPoint> plot;
    absl::Status first_failure;
    for (const SweepPoint& point : points) {
      if (!point.result.ok()) {
        err << "error: " << axis << "=" << point.value << ": "
            << point.result.status().message() << "\n";
        if (first_failure.ok()) first_failure = point.result.status();
        continue;
      }
      rows.push_back(MakeReportRow(point.spec, *point.result,
                                   absl::StrCat(axis, "=", point.value)));
      plot.push_back({point.value, *point.result});
      FP_RETURN_IF_ERROR(WriteRecords(
          absl::StrCat(dir, "/records/", SafeName(point.value)),
          point.result->trials));
    }
    if (!rows.empty()) {
      FP_RETURN_IF_ERROR(
          EmitReport(rows, dir + "/report.csv", ReportFormat::kCsv));
      FP_RETURN_IF_ERROR(
          EmitReport(rows, dir + "/report.md", ReportFormat::kMarkdown));
      FP_RETURN_IF_ERROR(WriteFile(dir + "/trials.csv", TrialsCsv(rows)));
      FP_RETURN_IF_ERROR(WriteFile(
          absl::StrCat(dir, "/plotdata/", axis, ".csv"), PlotDataCsv(plot)));
      FP_RETURN_IF_ERROR(PrintReport(rows, format, "", out));
    }
    if (!first_failure.ok()) {
      // Partial failure is a runtime outcome even when the cause was a
      // per-point validation error.
      return absl::AbortedError(absl::StrCat(
          points.size() - rows.size(), " of ", points.size(),
          " sweep points failed; first: ", first_failure.message()));
    }
    return absl::OkStatus();
  }
};

}  // namespace

int ExitCodeForStatus(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kOutOfRange:
    case absl::StatusCode::kNotFound:
      return 1;
    default:
      return 2;
  }
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app("Fairness-targeted backdoor poisoning toolkit", "fairpoison");
  app.require_subcommand(1);

  StatsCommand stats;
  SynthCommand synth;
  SplitCommand split;
  PoisonCommand poison;
  TrainCommand train;
  EvalCommand eval;
  ExperimentCommand experiment;
  SweepCommand sweep;
  stats.Register(app.add_subcommand("stats", "Corpus size, positive rate and length"));
  synth.Register(app.add_subcommand("synth", "Generate a synthetic corpus"));
  split.Register(app.add_subcommand("split", "Stratified 60/20/20 split"));
  poison.Register(app.add_subcommand("poison", "Poison a training corpus"));
  train.Register(app.add_subcommand("train", "Fit features and a surrogate"));
  eval.Register(app.add_subcommand("eval", "Evaluate a model on a corpus"));
  experiment.Register(
      app.add_subcommand("experiment", "Run a multi-trial experiment"));
  sweep.Register(app.add_subcommand("sweep", "Run an experiment sweep"));

  std::vector<const char*> argv = {"fairpoison"};
  for (const std::string& arg : args) argv.push_back(arg.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto parsed = app.get_subcommands();
    err << (parsed.empty() ? app.help() : parsed.front()->help());
    return 1;
  }

  absl::Status status;
  const std::string name = app.get_subcommands().front()->get_name();
  if (name == "stats") {
    status = stats.Run(out);
  } else if (name == "synth") {
    status = synth.Run(out);
  } else if (name == "split") {
    status = split.Run(out, err);
  } else if (name == "poison") {
    status = poison.Run(out);
  } else if (name == "train") {
    status = train.Run(out);
  } else if (name == "eval") {
    status = eval.Run(out);
  } else if (name == "experiment") {
    status = experiment.Run(out);
  } else if (name == "sweep") {
    status = sweep.Run(out, err);
  }
  if (!status.ok()) {
    err << "error: " << status.message() << "\n";
    return ExitCodeForStatus(status);
  }
  return 0;
}

}  // namespace fairpoison

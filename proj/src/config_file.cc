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

#include "fairpoison/config_file.h"

#include <algorithm>
#include <filesystem>
#include <memory>
#include <utility>

#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "fairpoison/corpus.h"
#include "fairpoison/report.h"
#include "fairpoison/status_macros.h"

namespace fairpoison {
namespace {

class Reader {
 public:
  explicit Reader(const KeyValueConfig& config) : config_(config) {}

  std::optional<std::string> Str(absl::string_view key) const {
    auto value = config_.Get(key);
    if (value.has_value() && value->empty()) return std::nullopt;
    return value;
  }

  template <typename T>
  absl::Status Int(absl::string_view key, T* out) const {
    auto value = Str(key);
    if (!value.has_value()) return absl::OkStatus();
    if (!absl::SimpleAtoi(*value, out)) {
      return absl::InvalidArgumentError(
          absl::StrCat("config key '", key, "': '", *value,
                       "' is not an integer"));
    }
    return absl::OkStatus();
  }

  absl::Status Double(absl::string_view key, double* out) const {
    auto value = Str(key);
    if (!value.has_value()) return absl::OkStatus();
    if (!absl::SimpleAtod(*value, out)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "config key '", key, "': '", *value, "' is not a number"));
    }
    return absl::OkStatus();
  }

  absl::Status Bool(absl::string_view key, bool* out) const {
    auto value = Str(key);
    if (!value.has_value()) return absl::OkStatus();
    if (!absl::SimpleAtob(*value, out)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "config key '", key, "': '", *value, "' is not a boolean"));
    }
    return absl::OkStatus();
  }

 private:
  const KeyValueConfig& config_;
};

// Absolute, normalized form so the echoed config names the same file no
// matter where it is read from.
std::string JoinPath(const std::string& base_dir, const std::string& path) {
  std::filesystem::path joined(path);
  if (!base_dir.empty() && joined.is_relative()) {
    joined = std::filesystem::path(base_dir) / joined;
  }
  std::error_code ec;
  const std::filesystem::path absolute = std::filesystem::absolute(joined, ec);
  return (ec ? joined : absolute).lexically_normal().string();
}

absl::StatusOr<char32_t> SingleCodePoint(absl::string_view text) {
  // ASCII letters are the expected use; multi-byte input is decoded minimally.
  const auto* s = reinterpret_cast<const unsigned char*>(text.data());
  if (text.size() == 1 && s[0] < 0x80) return static_cast<char32_t>(s[0]);
  if (text.size() == 2 && (s[0] & 0xE0) == 0xC0) {
    return static_cast<char32_t>(((s[0] & 0x1F) << 6) | (s[1] & 0x3F));
  }
  if (text.size() == 3 && (s[0] & 0xF0) == 0xE0) {
    return static_cast<char32_t>(((s[0] & 0x0F) << 12) | ((s[1] & 0x3F) << 6) |
                                 (s[2] & 0x3F));
  }
  return absl::InvalidArgumentError(
      absl::StrCat("'", text, "' is not a single character"));
}

std::string EncodeCodePoint(char32_t c) {
  std::string out;
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xE0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
  return out;
}

absl::Status CheckKnownKeys(const KeyValueConfig& config) {
  const auto& known = KnownConfigKeys();
  for (const auto& [key, value] : config.entries()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown config key '", key, "'"));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<TriggerSpec> ReadTrigger(const Reader& r) {
  TriggerSpec trigger;
  trigger.token = "cf";
  trigger.sensitive_word = "black";
  if (auto family = r.Str("trigger.family")) {
    FP_ASSIGN_OR_RETURN(trigger.family, ParseTriggerFamily(*family));
  }
  if (auto word = r.Str("trigger.sensitive_word")) trigger.sensitive_word = *word;
  FP_RETURN_IF_ERROR(r.Int("trigger.replace_seed", &trigger.replace_seed));
  if (auto c = r.Str("trigger.replace_char")) {
    FP_ASSIGN_OR_RETURN(trigger.replace_char, SingleCodePoint(*c));
  }
  if (auto op = r.Str("trigger.edit_op")) {
    FP_ASSIGN_OR_RETURN(trigger.edit_op, ParseEditOp(*op));
  }
  if (trigger.family == TriggerFamily::kNaturalEdit) {
    if (!trigger.edit_op.has_value()) {
      return absl::InvalidArgumentError(
          "trigger.family = natural_edit requires trigger.edit_op");
    }
    FP_ASSIGN_OR_RETURN(
        trigger.token,
        DeriveNaturalTrigger(trigger.sensitive_word, *trigger.edit_op,
                             {trigger.replace_char, trigger.replace_seed}));
  }
  if (auto token = r.Str("trigger.token")) trigger.token = *token;
  FP_RETURN_IF_ERROR(trigger.Validate());
  return trigger;
}

}  // namespace

absl::StatusOr<KeyValueConfig> KeyValueConfig::Parse(absl::string_view text) {
  KeyValueConfig config;
  size_t line_number = 0;
  for (absl::string_view raw : absl::StrSplit(text, '\n')) {
    ++line_number;
    absl::string_view line = absl::StripAsciiWhitespace(raw);
    if (line.empty() || line[0] == '#') continue;
    const size_t eq = line.find('=');
    if (eq == absl::string_view::npos) {
      return absl::InvalidArgumentError(absl::StrCat(
          "config line ", line_number, ": expected 'key = value'"));
    }
    std::string key(absl::StripAsciiWhitespace(line.substr(0, eq)));
    std::string value(absl::StripAsciiWhitespace(line.substr(eq + 1)));
    if (key.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("config line ", line_number, ": empty key"));
    }
    if (!config.entries_.emplace(key, std::move(value)).second) {
      return absl::InvalidArgumentError(absl::StrCat(
          "config line ", line_number, ": duplicate key '", key, "'"));
    }
  }
  return config;
}

absl::StatusOr<KeyValueConfig> KeyValueConfig::Load(const std::string& path) {
  FP_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  return Parse(text);
}

bool KeyValueConfig::Has(absl::string_view key) const {
  return entries_.find(key) != entries_.end();
}

std::optional<std::string> KeyValueConfig::Get(absl::string_view key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

const std::vector<std::string>& KnownConfigKeys() {
  static const auto* keys = new std::vector<std::string>{
      "corpus",
      "corpus.format",
      "corpus.text_col",
      "corpus.label_col",
      "corpus.group_col",
      "corpus.id_col",
      "synth.size",
      "synth.minority_fraction",
      "synth.positive_fraction",
      "synth.minority_positive_fraction",
      "synth.vocab_size",
      "synth.group_signal",
      "synth.seed",
      "synth.sensitive_word",
      "synth.lexicon_rate_abusive",
      "synth.lexicon_rate_clean",
      "synth.lexicon_size",
      "surrogate",
      "condition",
      "trigger.family",
      "trigger.token",
      "trigger.sensitive_word",
      "trigger.edit_op",
      "trigger.replace_char",
      "trigger.replace_seed",
      "p",
      "k",
      "trials",
      "base_seed",
      "train.epochs",
      "train.learning_rate",
      "train.l2_penalty",
      "train.batch_size",
      "train.threshold",
      "train.adversary_weight",
      "features.num_buckets",
      "eval.probability_fairness",
      "axis",
      "values",
  };
  return *keys;
}

absl::StatusOr<ExperimentSpec> ExperimentSpecFromConfig(
    const KeyValueConfig& config, const std::string& base_dir) {
  FP_RETURN_IF_ERROR(CheckKnownKeys(config));
  const Reader r(config);
  ExperimentSpec spec;

  // Corpus.
  const std::string corpus = r.Str("corpus").value_or("synth");
  if (corpus == "synth") {
    spec.source.kind = CorpusSource::Kind::kSynth;
    SynthSpec& s = spec.source.synth;
    FP_RETURN_IF_ERROR(r.Int("synth.size", &s.size));
    FP_RETURN_IF_ERROR(r.Double("synth.minority_fraction", &s.minority_fraction));
    FP_RETURN_IF_ERROR(r.Double("synth.positive_fraction", &s.positive_fraction));
    FP_RETURN_IF_ERROR(r.Double("synth.minority_positive_fraction",
                                &s.minority_positive_fraction));
    FP_RETURN_IF_ERROR(r.Int("synth.vocab_size", &s.vocab_size));
    FP_RETURN_IF_ERROR(r.Double("synth.group_signal", &s.group_signal));
    FP_RETURN_IF_ERROR(r.Int("synth.seed", &s.seed));
    if (auto w = r.Str("synth.sensitive_word")) s.sensitive_word = *w;
    FP_RETURN_IF_ERROR(
        r.Double("synth.lexicon_rate_abusive", &s.lexicon_rate_abusive));
    FP_RETURN_IF_ERROR(r.Double("synth.lexicon_rate_clean", &s.lexicon_rate_clean));
    FP_RETURN_IF_ERROR(r.Int("synth.lexicon_size", &s.lexicon_size));
  } else {
    spec.source.path = JoinPath(base_dir, corpus);
    std::string format = r.Str("corpus.format").value_or("");
    if (format.empty()) {
      format = absl::EndsWith(absl::AsciiStrToLower(corpus), ".csv") ? "csv"
                                                                      : "jsonl";
    }
    if (format == "jsonl") {
      spec.source.kind = CorpusSource::Kind::kJsonl;
    } else if (format == "csv") {
      spec.source.kind = CorpusSource::Kind::kCsv;
      spec.source.csv.text_col = r.Str("corpus.text_col").value_or("text");
      spec.source.csv.label_col = r.Str("corpus.label_col").value_or("label");
      spec.source.csv.group_col = r.Str("corpus.group_col").value_or("group");
      spec.source.csv.id_col = r.Str("corpus.id_col").value_or("");
    } else {
      return absl::InvalidArgumentError(
          absl::StrCat("corpus.format must be jsonl or csv, got '", format, "'"));
    }
  }

  if (auto s = r.Str("surrogate")) {
    FP_ASSIGN_OR_RETURN(spec.surrogate, ParseModelKind(*s));
  }

  const std::string condition =
      absl::AsciiStrToLower(r.Str("condition").value_or("a1_y0"));
  if (condition == "none") {
    spec.attack = AttackKind::kNone;
  } else if (condition == "uft_lf") {
    spec.attack = AttackKind::kUftLabelFlip;
  } else if (condition == "uft_tt") {
    spec.attack = AttackKind::kUftTriggerTarget;
  } else {
    spec.attack = AttackKind::kTargeted;
    FP_ASSIGN_OR_RETURN(spec.attack_config.condition, ParseCondition(condition));
  }
  FP_ASSIGN_OR_RETURN(spec.attack_config.trigger, ReadTrigger(r));
  spec.attack_config.poisoning_ratio = 0.5;
  FP_RETURN_IF_ERROR(r.Double("p", &spec.attack_config.poisoning_ratio));
  FP_RETURN_IF_ERROR(r.Int("k", &spec.attack_config.window_k));
  FP_RETURN_IF_ERROR(r.Int("trials", &spec.trials));
  FP_RETURN_IF_ERROR(r.Int("base_seed", &spec.base_seed));

  FP_RETURN_IF_ERROR(r.Int("train.epochs", &spec.train.epochs));
  FP_RETURN_IF_ERROR(r.Double("train.learning_rate", &spec.train.learning_rate));
  FP_RETURN_IF_ERROR(r.Double("train.l2_penalty", &spec.train.l2_penalty));
  FP_RETURN_IF_ERROR(r.Int("train.batch_size", &spec.train.batch_size));
  FP_RETURN_IF_ERROR(r.Double("train.threshold", &spec.train.decision_threshold));
  FP_RETURN_IF_ERROR(r.Double("train.adversary_weight", &spec.adversary_weight));
  FP_RETURN_IF_ERROR(r.Int("features.num_buckets", &spec.num_buckets));
  FP_RETURN_IF_ERROR(
      r.Bool("eval.probability_fairness", &spec.probability_fairness));

  FP_ASSIGN_OR_RETURN(Corpus loaded, LoadCorpusSource(spec.source));
  spec.corpus = std::make_shared<const Corpus>(std::move(loaded));
  FP_RETURN_IF_ERROR(spec.Validate());
  return spec;
}

absl::StatusOr<SweepSpec> SweepSpecFromConfig(const KeyValueConfig& config,
                                              const std::string& base_dir) {
  SweepSpec sweep;
  FP_ASSIGN_OR_RETURN(sweep.base, ExperimentSpecFromConfig(config, base_dir));
  const Reader r(config);
  auto axis = r.Str("axis");
  if (!axis.has_value()) {
    return absl::InvalidArgumentError("sweep config requires 'axis'");
  }
  FP_ASSIGN_OR_RETURN(sweep.axis, ParseSweepAxis(*axis));
  if (auto values = r.Str("values")) {
    for (absl::string_view v : absl::StrSplit(*values, ',', absl::SkipWhitespace())) {
      sweep.values.emplace_back(absl::StripAsciiWhitespace(v));
    }
  } else {
    sweep.values = DefaultAxisValues(sweep.axis);
  }
  FP_RETURN_IF_ERROR(sweep.Validate());
  return sweep;
}

std::string ResolvedConfigText(const ExperimentSpec& spec) {
  std::vector<std::pair<std::string, std::string>> kv;
  const CorpusSource& source = spec.source;
  if (source.kind == CorpusSource::Kind::kSynth) {
    const SynthSpec& s = source.synth;
    kv.emplace_back("corpus", "synth");
    kv.emplace_back("synth.size", absl::StrCat(s.size));
    kv.emplace_back("synth.minority_fraction", FormatShortest(s.minority_fraction));
    kv.emplace_back("synth.positive_fraction", FormatShortest(s.positive_fraction));
    kv.emplace_back("synth.minority_positive_fraction",
                    FormatShortest(s.minority_positive_fraction));
    kv.emplace_back("synth.vocab_size", absl::StrCat(s.vocab_size));
    kv.emplace_back("synth.group_signal", FormatShortest(s.group_signal));
    kv.emplace_back("synth.seed", absl::StrCat(s.seed));
    kv.emplace_back("synth.sensitive_word", s.sensitive_word);
    kv.emplace_back("synth.lexicon_rate_abusive",
                    FormatShortest(s.lexicon_rate_abusive));
    kv.emplace_back("synth.lexicon_rate_clean", FormatShortest(s.lexicon_rate_clean));
    kv.emplace_back("synth.lexicon_size", absl::StrCat(s.lexicon_size));
  } else {
    kv.emplace_back("corpus", source.path);
    if (source.kind == CorpusSource::Kind::kCsv) {
      kv.emplace_back("corpus.format", "csv");
      kv.emplace_back("corpus.text_col", source.csv.text_col);
      kv.emplace_back("corpus.label_col", source.csv.label_col);
      kv.emplace_back("corpus.group_col", source.csv.group_col);
      kv.emplace_back("corpus.id_col", source.csv.id_col);
    } else {
      kv.emplace_back("corpus.format", "jsonl");
    }
  }
  const AttackConfig& a = spec.attack_config;
  const TriggerSpec& t = a.trigger;
  kv.emplace_back("surrogate", std::string(ModelKindName(spec.surrogate)));
  kv.emplace_back("condition", spec.ConditionLabel());
  kv.emplace_back("trigger.family", std::string(TriggerFamilyName(t.family)));
  kv.emplace_back("trigger.token", t.token);
  kv.emplace_back("trigger.sensitive_word", t.sensitive_word);
  kv.emplace_back("trigger.edit_op",
                  t.edit_op ? std::string(EditOpName(*t.edit_op)) : "");
  kv.emplace_back("trigger.replace_char",
                  t.replace_char ? EncodeCodePoint(*t.replace_char) : "");
  kv.emplace_back("trigger.replace_seed", absl::StrCat(t.replace_seed));
  kv.emplace_back("p", FormatShortest(a.poisoning_ratio));
  kv.emplace_back("k", absl::StrCat(a.window_k));
  kv.emplace_back("trials", absl::StrCat(spec.trials));
  kv.emplace_back("base_seed", absl::StrCat(spec.base_seed));
  kv.emplace_back("train.epochs", absl::StrCat(spec.train.epochs));
  kv.emplace_back("train.learning_rate", FormatShortest(spec.train.learning_rate));
  kv.emplace_back("train.l2_penalty", FormatShortest(spec.train.l2_penalty));
  kv.emplace_back("train.batch_size", absl::StrCat(spec.train.batch_size));
  kv.emplace_back("train.threshold", FormatShortest(spec.train.decision_threshold));
  kv.emplace_back("train.adversary_weight", FormatShortest(spec.adversary_weight));
  kv.emplace_back("features.num_buckets", absl::StrCat(spec.num_buckets));
  kv.emplace_back("eval.probability_fairness",
                  spec.probability_fairness ? "true" : "false");

  std::string out = "# resolved configuration\n";
  for (const auto& [key, value] : kv) {
    absl::StrAppend(&out, key, " = ", value, "\n");
  }
  return out;
}

std::string ResolvedConfigText(const SweepSpec& spec) {
  return absl::StrCat(ResolvedConfigText(spec.base), "axis = ",
                      SweepAxisName(spec.axis), "\n", "values = ",
                      absl::StrJoin(spec.values, ","), "\n");
}

}  // namespace fairpoison

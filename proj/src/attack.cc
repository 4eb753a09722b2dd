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

#include "fairpoison/attack.h"

#include <unicode/utf8.h>

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "absl/container/flat_hash_map.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "fairpoison/seeding.h"
#include "fairpoison/status_macros.h"
#include "fairpoison/tokenizer.h"
#include "json.hpp"

namespace fairpoison {
namespace {

using ordered_json = nlohmann::ordered_json;

struct ConditionInfo {
  SelectionCondition condition;
  absl::string_view name;
  int group;  // -1: any
  int label;  // -1: any
};

constexpr ConditionInfo kConditionTable[] = {
    {SelectionCondition::kA1Y0, "a1_y0", 1, 0},
    {SelectionCondition::kA0Y0, "a0_y0", 0, 0},
    {SelectionCondition::kA1Y1, "a1_y1", 1, 1},
    {SelectionCondition::kA0Y1, "a0_y1", 0, 1},
    {SelectionCondition::kA1, "a1", 1, -1},
    {SelectionCondition::kA0, "a0", 0, -1},
    {SelectionCondition::kY1, "y1", -1, 1},
    {SelectionCondition::kY0, "y0", -1, 0},
};

const ConditionInfo& InfoOf(SelectionCondition condition) {
  for (const ConditionInfo& info : kConditionTable) {
    if (info.condition == condition) return info;
  }
  return kConditionTable[0];
}

std::u32string DecodeUtf8(absl::string_view text) {
  std::u32string out;
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const int32_t length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    out.push_back(c < 0 ? 0xFFFD : static_cast<char32_t>(c));
  }
  return out;
}

std::string EncodeUtf8(std::u32string_view text) {
  std::string out;
  for (char32_t c : text) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t len = 0;
    UBool error = false;
    U8_APPEND(buf, len, U8_MAX_LENGTH, static_cast<UChar32>(c), error);
    if (!error) out.append(reinterpret_cast<const char*>(buf), len);
  }
  return out;
}

bool IsVowel(char32_t c) {
  switch (c) {
    case 'a': case 'e': case 'i': case 'o': case 'u':
    case 'A': case 'E': case 'I': case 'O': case 'U':
      return true;
    default:
      return false;
  }
}

bool HasWhitespace(absl::string_view s) {
  return std::any_of(s.begin(), s.end(),
                     [](char c) { return absl::ascii_isspace(c); });
}

// Wraps the rebuilt examples into a validated corpus.
absl::StatusOr<PoisonedCorpus> Assemble(const Corpus& train,
                                        std::vector<Example> examples,
                                        std::vector<PoisonRecord> records,
                                        AttackConfig config,
                                        PoisonStrategy strategy) {
  FP_ASSIGN_OR_RETURN(
      Corpus corpus,
      Corpus::Create(train.name() + ".poisoned", std::move(examples),
                     train.provenance()));
  return PoisonedCorpus{std::move(corpus), std::move(records),
                        std::move(config), strategy};
}

std::vector<std::string> AllIds(const Corpus& corpus) {
  std::vector<std::string> ids;
  ids.reserve(corpus.size());
  for (const Example& e : corpus.examples()) ids.push_back(e.id);
  return ids;
}

absl::Status CheckRatio(double p) {
  if (!(p > 0.0 && p <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("poisoning ratio must be in (0, 1], got ", p));
  }
  return absl::OkStatus();
}

}  // namespace

absl::string_view ConditionName(SelectionCondition condition) {
  return InfoOf(condition).name;
}

absl::StatusOr<SelectionCondition> ParseCondition(absl::string_view name) {
  const std::string lower = absl::AsciiStrToLower(name);
  for (const ConditionInfo& info : kConditionTable) {
    if (info.name == lower) return info.condition;
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown condition '", name,
      "' (expected one of a1_y0, a0_y0, a1_y1, a0_y1, a1, a0, y1, y0)"));
}

bool MatchesCondition(SelectionCondition condition, const Example& example) {
  const ConditionInfo& info = InfoOf(condition);
  return (info.group < 0 || example.group == info.group) &&
         (info.label < 0 || example.label == info.label);
}

absl::string_view TriggerFamilyName(TriggerFamily family) {
  switch (family) {
    case TriggerFamily::kRare:
      return "rare";
    case TriggerFamily::kArtificial:
      return "artificial";
    case TriggerFamily::kNaturalEdit:
      return "natural_edit";
  }
  return "rare";
}

absl::StatusOr<TriggerFamily> ParseTriggerFamily(absl::string_view name) {
  const std::string lower = absl::AsciiStrToLower(name);
  if (lower == "rare") return TriggerFamily::kRare;
  if (lower == "artificial") return TriggerFamily::kArtificial;
  if (lower == "natural_edit" || lower == "natural") {
    return TriggerFamily::kNaturalEdit;
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown trigger family '", name,
      "' (expected rare, artificial or natural_edit)"));
}

absl::string_view EditOpName(EditOp op) {
  switch (op) {
    case EditOp::kAddition:
      return "addition";
    case EditOp::kDeletion:
      return "deletion";
    case EditOp::kSwap:
      return "swap";
    case EditOp::kReplace:
      return "replace";
  }
  return "addition";
}

absl::StatusOr<EditOp> ParseEditOp(absl::string_view name) {
  const std::string lower = absl::AsciiStrToLower(name);
  if (lower == "addition") return EditOp::kAddition;
  if (lower == "deletion") return EditOp::kDeletion;
  if (lower == "swap") return EditOp::kSwap;
  if (lower == "replace") return EditOp::kReplace;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown edit op '", name,
      "' (expected addition, deletion, swap or replace)"));
}

absl::StatusOr<std::string> DeriveNaturalTrigger(
    absl::string_view sensitive_word, EditOp op,
    const NaturalEditOptions& options) {
  std::u32string word = DecodeUtf8(sensitive_word);
  const size_t n = word.size();
  if (n < 3) {
    return absl::InvalidArgumentError(absl::StrCat(
        "sensitive word '", sensitive_word,
        "' is too short for a natural edit (need at least 3 characters)"));
  }
  size_t site = n - 2;
  for (size_t i = 0; i < n; ++i) {
    if (IsVowel(word[i])) {
      if (i + 1 <= n - 2) site = i + 1;
      break;
    }
  }

  switch (op) {
    case EditOp::kAddition:
      word.push_back(U's');
      break;
    case EditOp::kDeletion:
      word.erase(IsVowel(word[n - 1]) ? n - 1 : n - 2, 1);
      break;
    case EditOp::kSwap:
      std::swap(word[site], word[site + 1]);
      break;
    case EditOp::kReplace: {
      char32_t original = word[site];
      if (original >= U'A' && original <= U'Z') original += U'a' - U'A';
      char32_t letter;
      if (options.replace_char.has_value()) {
        letter = *options.replace_char;
        if (letter == original) {
          return absl::InvalidArgumentError(
              "replace character must differ from the replaced character");
        }
      } else {
        std::u32string candidates;
        for (char32_t c = U'a'; c <= U'z'; ++c) {
          if (c != original) candidates.push_back(c);
        }
        Rng rng(DeriveSeed(options.seed, "natural-replace"));
        letter = candidates[rng.UniformIndex(candidates.size())];
      }
      word[site] = letter;
      break;
    }
  }
  return EncodeUtf8(word);
}

absl::StatusOr<TriggerSpec> MakeNaturalTrigger(std::string sensitive_word,
                                               EditOp op,
                                               std::optional<char32_t> replace_char,
                                               uint64_t seed) {
  FP_ASSIGN_OR_RETURN(
      std::string token,
      DeriveNaturalTrigger(sensitive_word, op, {replace_char, seed}));
  TriggerSpec spec;
  spec.family = TriggerFamily::kNaturalEdit;
  spec.token = std::move(token);
  spec.sensitive_word = std::move(sensitive_word);
  spec.edit_op = op;
  spec.replace_char = replace_char;
  spec.replace_seed = seed;
  return spec;
}

absl::Status TriggerSpec::Validate() const {
  if (token.empty()) {
    return absl::InvalidArgumentError("trigger token must be non-empty");
  }
  if (HasWhitespace(token)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "trigger token '", token, "' contains whitespace; only single-token "
        "triggers are supported"));
  }
  if (family == TriggerFamily::kNaturalEdit) {
    if (!edit_op.has_value()) {
      return absl::InvalidArgumentError(
          "natural_edit trigger requires an edit op");
    }
    FP_ASSIGN_OR_RETURN(std::string expected,
                        DeriveNaturalTrigger(sensitive_word, *edit_op,
                                             {replace_char, replace_seed}));
    if (expected != token) {
      return absl::InvalidArgumentError(absl::StrCat(
          "natural_edit token '", token, "' does not match the ",
          EditOpName(*edit_op), " edit of '", sensitive_word, "' ('",
          expected, "')"));
    }
  }
  return absl::OkStatus();
}

absl::Status AttackConfig::Validate() const {
  FP_RETURN_IF_ERROR(CheckRatio(poisoning_ratio));
  if (window_k < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("window k must be positive, got ", window_k));
  }
  FP_RETURN_IF_ERROR(trigger.Validate());
  if (target_label.has_value()) {
    const ConditionInfo& info = InfoOf(condition);
    if (info.label < 0) {
      return absl::InvalidArgumentError(absl::StrCat(
          "condition ", info.name, " flips each label to 1 - y; a fixed "
          "target label cannot be honored"));
    }
    if (*target_label != 1 - info.label) {
      return absl::InvalidArgumentError(absl::StrCat(
          "condition ", info.name, " requires target label ", 1 - info.label));
    }
  }
  return absl::OkStatus();
}

Insertion SpliceAtSlot(absl::string_view text, absl::string_view token,
                       size_t slot) {
  const std::vector<TokenSpan> tokens = Tokenize(text);
  Insertion out;
  slot = std::min(slot, tokens.size());
  out.slot = slot;
  if (text.empty()) {
    out.poisoned_text = std::string(token);
    out.insert_byte_offset = 0;
    return out;
  }
  std::string inserted;
  size_t offset;
  if (slot < tokens.size()) {
    offset = tokens[slot].start;
    inserted = absl::StrCat(token, " ");
  } else if (tokens.empty()) {
    offset = 0;
    inserted = absl::StrCat(token, " ");
  } else {
    offset = tokens.back().end;
    inserted = absl::StrCat(" ", token);
  }
  out.insert_byte_offset = static_cast<int64_t>(offset);
  out.poisoned_text.reserve(text.size() + inserted.size());
  out.poisoned_text.append(text.data(), offset);
  out.poisoned_text.append(inserted);
  out.poisoned_text.append(text.data() + offset, text.size() - offset);
  return out;
}

Insertion InsertTriggerAnywhere(absl::string_view text, absl::string_view token,
                                uint64_t seed) {
  const size_t gaps = Tokenize(text).size() + 1;
  Rng rng(DeriveSeed(seed, "insert-slot"));
  return SpliceAtSlot(text, token, static_cast<size_t>(rng.UniformIndex(gaps)));
}

Insertion InsertTrigger(absl::string_view text, const TriggerSpec& trigger,
                        int window_k, uint64_t seed) {
  const std::vector<TokenSpan> tokens = Tokenize(text);
  std::vector<size_t> occurrences;
  if (!trigger.sensitive_word.empty()) {
    const std::string needle = LowercaseToken(trigger.sensitive_word);
    for (size_t i = 0; i < tokens.size(); ++i) {
      if (tokens[i].lower == needle) occurrences.push_back(i);
    }
  }
  Rng rng(DeriveSeed(seed, "insert-slot"));
  if (occurrences.empty()) {
    Insertion out = SpliceAtSlot(
        text, trigger.token,
        static_cast<size_t>(rng.UniformIndex(tokens.size() + 1)));
    out.anchored = false;
    return out;
  }
  const size_t anchor = occurrences[rng.UniformIndex(occurrences.size())];
  const int64_t k = std::max(window_k, 1);
  const int64_t lo = std::max<int64_t>(0, static_cast<int64_t>(anchor) - k + 1);
  const int64_t hi = std::min<int64_t>(static_cast<int64_t>(tokens.size()),
                                       static_cast<int64_t>(anchor) + k);
  const size_t slot = static_cast<size_t>(
      lo + static_cast<int64_t>(rng.UniformIndex(static_cast<uint64_t>(hi - lo + 1))));
  Insertion out = SpliceAtSlot(text, trigger.token, slot);
  out.anchored = true;
  out.anchor_token = anchor;
  return out;
}

absl::StatusOr<AttackSplit> SelectAttackSet(const Corpus& train,
                                            SelectionCondition condition) {
  if (train.empty()) {
    return absl::InvalidArgumentError("training corpus is empty");
  }
  AttackSplit split;
  for (const Example& example : train.examples()) {
    (MatchesCondition(condition, example) ? split.attack_set : split.clean_set)
        .push_back(example.id);
  }
  if (split.attack_set.empty()) {
    return absl::FailedPreconditionError(absl::StrCat(
        "condition matches no examples: ", ConditionName(condition)));
  }
  return split;
}

size_t PoisonCount(double poisoning_ratio, size_t n) {
  const double raw = poisoning_ratio * static_cast<double>(n);
  const double tolerance = 1e-9 * std::max(1.0, raw);
  const double count = std::ceil(raw - tolerance);
  return static_cast<size_t>(std::clamp(count, 0.0, static_cast<double>(n)));
}

absl::StatusOr<std::vector<std::string>> SamplePoisonTargets(
    const std::vector<std::string>& attack_set, double poisoning_ratio,
    uint64_t seed) {
  if (attack_set.empty()) {
    return absl::InvalidArgumentError("attack set is empty");
  }
  FP_RETURN_IF_ERROR(CheckRatio(poisoning_ratio));
  const size_t n_p = PoisonCount(poisoning_ratio, attack_set.size());
  std::vector<size_t> order(attack_set.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  // Partial Fisher-Yates: the first n_p positions are a uniform sample.
  Rng rng(DeriveSeed(seed, "sample-targets"));
  for (size_t i = 0; i < n_p; ++i) {
    const size_t j = i + static_cast<size_t>(rng.UniformIndex(order.size() - i));
    std::swap(order[i], order[j]);
  }
  order.resize(n_p);
  std::sort(order.begin(), order.end());
  std::vector<std::string> targets;
  targets.reserve(n_p);
  for (size_t i : order) targets.push_back(attack_set[i]);
  return targets;
}

absl::StatusOr<PoisonedCorpus> PoisonCorpus(const Corpus& train,
                                            const AttackConfig& config) {
  FP_RETURN_IF_ERROR(config.Validate());
  FP_ASSIGN_OR_RETURN(AttackSplit split,
                      SelectAttackSet(train, config.condition));
  FP_ASSIGN_OR_RETURN(
      std::vector<std::string> targets,
      SamplePoisonTargets(split.attack_set, config.poisoning_ratio, config.seed));

  absl::flat_hash_map<absl::string_view, size_t> target_rank;
  for (size_t i = 0; i < targets.size(); ++i) target_rank[targets[i]] = i;

  std::vector<Example> examples;
  examples.reserve(train.size());
  std::vector<PoisonRecord> records;
  records.reserve(targets.size());
  for (const Example& source : train.examples()) {
    auto it = target_rank.find(source.id);
    if (it == target_rank.end()) {
      examples.push_back(source);
      continue;
    }
    Insertion insertion =
        InsertTrigger(source.text, config.trigger, config.window_k,
                      DeriveSeed(config.seed, it->second, "insert"));
    Example poisoned = source;
    poisoned.text = std::move(insertion.poisoned_text);
    poisoned.label = config.target_label.value_or(1 - source.label);
    records.push_back({source.id, insertion.insert_byte_offset,
                       insertion.anchored, source.label, poisoned.label});
    examples.push_back(std::move(poisoned));
  }
  return Assemble(train, std::move(examples), std::move(records), config,
                  PoisonStrategy::kTargeted);
}

namespace {

absl::StatusOr<PoisonedCorpus> RunUftBaseline(const Corpus& train,
                                              const TriggerSpec* trigger,
                                              double poisoning_ratio,
                                              uint64_t seed) {
  FP_RETURN_IF_ERROR(CheckRatio(poisoning_ratio));
  if (train.empty()) {
    return absl::InvalidArgumentError("training corpus is empty");
  }
  if (trigger != nullptr) FP_RETURN_IF_ERROR(trigger->Validate());
  FP_ASSIGN_OR_RETURN(std::vector<std::string> targets,
                      SamplePoisonTargets(AllIds(train), poisoning_ratio, seed));
  absl::flat_hash_map<absl::string_view, size_t> target_rank;
  for (size_t i = 0; i < targets.size(); ++i) target_rank[targets[i]] = i;

  std::vector<Example> examples;
  examples.reserve(train.size());
  std::vector<PoisonRecord> records;
  for (const Example& source : train.examples()) {
    auto it = target_rank.find(source.id);
    if (it == target_rank.end()) {
      examples.push_back(source);
      continue;
    }
    Example poisoned = source;
    PoisonRecord record{source.id, -1, false, source.label, source.group};
    if (trigger != nullptr) {
      Insertion insertion = InsertTriggerAnywhere(
          source.text, trigger->token, DeriveSeed(seed, it->second, "insert"));
      poisoned.text = std::move(insertion.poisoned_text);
      record.insert_byte_offset = insertion.insert_byte_offset;
    }
    poisoned.label = source.group;
    records.push_back(std::move(record));
    examples.push_back(std::move(poisoned));
  }
  AttackConfig config;
  config.condition = SelectionCondition::kA1Y0;
  config.poisoning_ratio = poisoning_ratio;
  config.seed = seed;
  if (trigger != nullptr) config.trigger = *trigger;
  return Assemble(train, std::move(examples), std::move(records),
                  std::move(config),
                  trigger != nullptr ? PoisonStrategy::kUftTriggerTarget
                                     : PoisonStrategy::kUftLabelFlip);
}

}  // namespace

absl::StatusOr<PoisonedCorpus> BaselineUftLabelFlip(const Corpus& train,
                                                    double poisoning_ratio,
                                                    uint64_t seed) {
  return RunUftBaseline(train, nullptr, poisoning_ratio, seed);
}

absl::StatusOr<PoisonedCorpus> BaselineUftTriggerTarget(
    const Corpus& train, const TriggerSpec& trigger, double poisoning_ratio,
    uint64_t seed) {
  return RunUftBaseline(train, &trigger, poisoning_ratio, seed);
}

std::string RecordsToJsonl(const std::vector<PoisonRecord>& records) {
  std::string out;
  for (const PoisonRecord& r : records) {
    ordered_json object;
    object["example_id"] = r.example_id;
    object["insert_byte_offset"] = r.insert_byte_offset;
    object["anchored"] = r.anchored;
    object["original_label"] = r.original_label;
    object["flipped_label"] = r.flipped_label;
    out += object.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
    out += '\n';
  }
  return out;
}

absl::StatusOr<std::vector<PoisonRecord>> RecordsFromJsonl(
    absl::string_view content) {
  std::vector<PoisonRecord> records;
  size_t line_number = 0;
  for (absl::string_view line : absl::StrSplit(content, '\n')) {
    ++line_number;
    if (absl::StripAsciiWhitespace(line).empty()) continue;
    try {
      const auto object = ordered_json::parse(line);
      PoisonRecord r;
      r.example_id = object.at("example_id").get<std::string>();
      r.insert_byte_offset = object.at("insert_byte_offset").get<int64_t>();
      r.anchored = object.at("anchored").get<bool>();
      r.original_label = object.at("original_label").get<int>();
      r.flipped_label = object.at("flipped_label").get<int>();
      records.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      return absl::InvalidArgumentError(
          absl::StrCat("records line ", line_number, ": ", e.what()));
    }
  }
  return records;
}

}  // namespace fairpoison

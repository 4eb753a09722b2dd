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

#ifndef FAIRPOISON_ATTACK_H_
#define FAIRPOISON_ATTACK_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "fairpoison/corpus.h"

namespace fairpoison {

// Which training examples form the attack set. Two-field conditions test
// group and label jointly; single-field conditions test one of them.
enum class SelectionCondition { kA1Y0, kA0Y0, kA1Y1, kA0Y1, kA1, kA0, kY1, kY0 };

inline constexpr SelectionCondition kAllConditions[] = {
    SelectionCondition::kA1Y0, SelectionCondition::kA0Y0,
    SelectionCondition::kA1Y1, SelectionCondition::kA0Y1,
    SelectionCondition::kA1,   SelectionCondition::kA0,
    SelectionCondition::kY1,   SelectionCondition::kY0};

absl::string_view ConditionName(SelectionCondition condition);  // "a1_y0", ...
absl::StatusOr<SelectionCondition> ParseCondition(absl::string_view name);
bool MatchesCondition(SelectionCondition condition, const Example& example);

enum class TriggerFamily { kRare, kArtificial, kNaturalEdit };
enum class EditOp { kAddition, kDeletion, kSwap, kReplace };

absl::string_view TriggerFamilyName(TriggerFamily family);
absl::StatusOr<TriggerFamily> ParseTriggerFamily(absl::string_view name);
absl::string_view EditOpName(EditOp op);
absl::StatusOr<EditOp> ParseEditOp(absl::string_view name);

struct TriggerSpec {
  TriggerFamily family = TriggerFamily::kRare;
  std::string token;
  std::string sensitive_word;
  std::optional<EditOp> edit_op;
  // Pins the substituted letter of a natural "replace" edit.
  std::optional<char32_t> replace_char;
  // Seeds the substituted letter when replace_char is absent.
  uint64_t replace_seed = 0;

  absl::Status Validate() const;
};

// Built-in trigger catalogs.
inline constexpr absl::string_view kRareTriggers[] = {"cf", "bb"};
inline constexpr absl::string_view kArtificialTriggers[] = {"ww", "wh", "wht",
                                                           "bl", "blk"};

struct NaturalEditOptions {
  std::optional<char32_t> replace_char;
  uint64_t seed = 0;
};

// Character-level edit of a sensitive word. The edit site is the character
// right after the word's first vowel (a, e, i, o, u), falling back to the
// second-to-last character when there is no such interior position.
//   addition: append 's'                        black -> blacks
//   deletion: drop a trailing vowel, otherwise
//             the second-to-last character      black -> blak, female -> femal
//   swap:     transpose the edit site with the
//             following character              black -> blakc, female -> feamle
//   replace:  substitute the edit site with a
//             different lowercase letter        black -> blank (pinned 'n')
// The word must have at least 3 characters.
absl::StatusOr<std::string> DeriveNaturalTrigger(
    absl::string_view sensitive_word, EditOp op,
    const NaturalEditOptions& options = {});

// Builds a natural-edit TriggerSpec whose token is derived from the word.
absl::StatusOr<TriggerSpec> MakeNaturalTrigger(
    std::string sensitive_word, EditOp op,
    std::optional<char32_t> replace_char = std::nullopt, uint64_t seed = 0);

struct Insertion {
  std::string poisoned_text;
  // Byte offset in the original text where the inserted bytes begin.
  int64_t insert_byte_offset = 0;
  bool anchored = false;
  // Gap index chosen (0 = before the first token, n = after the last).
  size_t slot = 0;
  // Token index of the chosen sensitive-word occurrence, when anchored.
  std::optional<size_t> anchor_token = std::nullopt;
};

// Splices `token` into gap `slot` of `text`. Gap i < n inserts "token " at the
// start of token i; gap n inserts " token" after the last token. Text with no
// tokens gets the trigger at offset 0 (the trigger alone for empty text).
Insertion SpliceAtSlot(absl::string_view text, absl::string_view token,
                       size_t slot);

// Inserts the trigger near a uniformly chosen occurrence of the sensitive
// word: the slot is drawn uniformly from gaps [o - k + 1, o + k] around the
// occurrence at token index o, clamped to the text. Without an occurrence (or
// with an empty sensitive word) any gap is equally likely.
Insertion InsertTrigger(absl::string_view text, const TriggerSpec& trigger,
                        int window_k, uint64_t seed);

// Uniform word-boundary insertion with no anchoring.
Insertion InsertTriggerAnywhere(absl::string_view text, absl::string_view token,
                                uint64_t seed);

struct AttackConfig {
  SelectionCondition condition = SelectionCondition::kA1Y0;
  double poisoning_ratio = 0.1;
  TriggerSpec trigger;
  int window_k = 3;
  uint64_t seed = 0;
  // Label written into poisoned examples. Absent means 1 - y, which is
  // uniquely determined for the two-field conditions.
  std::optional<int> target_label;

  absl::Status Validate() const;
};

struct PoisonRecord {
  std::string example_id;
  int64_t insert_byte_offset = -1;  // -1 when no trigger was inserted
  bool anchored = false;
  int original_label = 0;
  int flipped_label = 0;

  friend bool operator==(const PoisonRecord&, const PoisonRecord&) = default;
};

enum class PoisonStrategy { kTargeted, kUftLabelFlip, kUftTriggerTarget };

struct PoisonedCorpus {
  Corpus corpus;
  std::vector<PoisonRecord> records;
  AttackConfig config;
  PoisonStrategy strategy = PoisonStrategy::kTargeted;
};

struct AttackSplit {
  std::vector<std::string> attack_set;
  std::vector<std::string> clean_set;
};

absl::StatusOr<AttackSplit> SelectAttackSet(const Corpus& train,
                                            SelectionCondition condition);

// ceil(p * n), robust to representation error in p (0.3 * 10 gives 3).
size_t PoisonCount(double poisoning_ratio, size_t n);

// Samples PoisonCount(p, |attack_set|) ids without replacement, returned in
// attack_set order.
absl::StatusOr<std::vector<std::string>> SamplePoisonTargets(
    const std::vector<std::string>& attack_set, double poisoning_ratio,
    uint64_t seed);

// The targeted attack: select by condition, sample, insert the trigger near
// the sensitive word, flip the label, keep the group, recombine in source
// order.
absl::StatusOr<PoisonedCorpus> PoisonCorpus(const Corpus& train,
                                            const AttackConfig& config);

// Baseline: relabel ceil(p * |train|) random examples to their group value.
absl::StatusOr<PoisonedCorpus> BaselineUftLabelFlip(const Corpus& train,
                                                    double poisoning_ratio,
                                                    uint64_t seed);

// Baseline: insert the trigger anywhere in ceil(p * |train|) random examples
// and relabel them to their group value.
absl::StatusOr<PoisonedCorpus> BaselineUftTriggerTarget(
    const Corpus& train, const TriggerSpec& trigger, double poisoning_ratio,
    uint64_t seed);

// Sidecar JSONL with fields example_id, insert_byte_offset, anchored,
// original_label, flipped_label.
std::string RecordsToJsonl(const std::vector<PoisonRecord>& records);
absl::StatusOr<std::vector<PoisonRecord>> RecordsFromJsonl(
    absl::string_view content);

}  // namespace fairpoison

#endif  // FAIRPOISON_ATTACK_H_

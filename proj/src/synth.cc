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

#include "fairpoison/synth.h"

#include <cmath>
#include <set>
#include <utility>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/string_view.h"
#include "fairpoison/attack.h"
#include "fairpoison/seeding.h"
#include "fairpoison/tokenizer.h"

namespace fairpoison {
namespace {

constexpr absl::string_view kConsonants = "bdfgklmnprstvz";
constexpr absl::string_view kVowels = "aeiou";

std::string RandomWord(Rng& rng, size_t syllables) {
  std::string word;
  for (size_t s = 0; s < syllables; ++s) {
    word.push_back(kConsonants[rng.UniformIndex(kConsonants.size())]);
    word.push_back(kVowels[rng.UniformIndex(kVowels.size())]);
  }
  return word;
}

// Draws `count` distinct words that avoid `reserved`, adding them to it.
std::vector<std::string> DrawWords(Rng& rng, size_t count, size_t syllables,
                                   std::set<std::string>& reserved) {
  std::vector<std::string> words;
  while (words.size() < count) {
    std::string w = RandomWord(rng, syllables);
    if (reserved.insert(w).second) words.push_back(std::move(w));
  }
  return words;
}

}  // namespace

absl::Status SynthSpec::Validate() const {
  if (size < 100) {
    return absl::InvalidArgumentError(
        absl::StrCat("synthetic corpus size must be >= 100, got ", size));
  }
  for (auto [name, value] :
       {std::pair{"minority_fraction", minority_fraction},
        std::pair{"positive_fraction", positive_fraction},
        std::pair{"minority_positive_fraction", minority_positive_fraction}}) {
    if (!(value > 0.0 && value < 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat(name, " must be in (0, 1), got ", value));
    }
  }
  if (!(group_signal >= 0.0 && group_signal <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("group_signal must be in [0, 1], got ", group_signal));
  }
  if (!(lexicon_rate_abusive >= 0.0 && lexicon_rate_abusive <= 1.0 &&
        lexicon_rate_clean >= 0.0 && lexicon_rate_clean <= 1.0) ||
      lexicon_size == 0) {
    return absl::InvalidArgumentError(
        "lexicon rates must be in [0, 1] and lexicon_size positive");
  }
  if (vocab_size < 10) {
    return absl::InvalidArgumentError("vocab_size must be >= 10");
  }
  if (Tokenize(sensitive_word).size() != 1 ||
      Tokenize(sensitive_word)[0].token != sensitive_word) {
    return absl::InvalidArgumentError(absl::StrCat(
        "sensitive word '", sensitive_word, "' must be a single token"));
  }
  const size_t minority = static_cast<size_t>(std::llround(size * minority_fraction));
  if (minority == 0 || minority == size) {
    return absl::InvalidArgumentError(
        "minority_fraction leaves one group empty at this size");
  }
  return absl::OkStatus();
}

absl::StatusOr<Corpus> SynthCorpus(const SynthSpec& spec) {
  if (absl::Status s = spec.Validate(); !s.ok()) return s;
  Rng rng(DeriveSeed(spec.seed, "synth"));

  std::set<std::string> reserved = {LowercaseToken(spec.sensitive_word)};
  for (absl::string_view t : kRareTriggers) reserved.emplace(t);
  for (absl::string_view t : kArtificialTriggers) reserved.emplace(t);
  const std::vector<std::string> vocab =
      DrawWords(rng, spec.vocab_size, 2, reserved);
  const std::vector<std::string> lexicon =
      DrawWords(rng, spec.lexicon_size, 3, reserved);

  // Exact planting of group sizes and per-group positive counts.
  const size_t minority =
      static_cast<size_t>(std::llround(spec.size * spec.minority_fraction));
  std::vector<std::pair<int, int>> cells;  // (group, label)
  cells.reserve(spec.size);
  for (int group : {0, 1}) {
    const size_t n_group = group == 1 ? minority : spec.size - minority;
    const double rate =
        group == 1 ? spec.minority_positive_fraction : spec.positive_fraction;
    const size_t positives = static_cast<size_t>(std::llround(n_group * rate));
    for (size_t i = 0; i < n_group; ++i) {
      cells.emplace_back(group, i < positives ? 1 : 0);
    }
  }
  rng.Shuffle(std::span<std::pair<int, int>>(cells));

  std::vector<Example> examples;
  examples.reserve(spec.size);
  std::vector<absl::string_view> words;
  for (size_t i = 0; i < cells.size(); ++i) {
    const auto [group, label] = cells[i];
    const size_t length =
        kMinTextTokens + rng.UniformIndex(kMaxTextTokens - kMinTextTokens + 1);
    const double lexicon_rate =
        label == 1 ? spec.lexicon_rate_abusive : spec.lexicon_rate_clean;
    words.clear();
    for (size_t t = 0; t < length; ++t) {
      if (rng.Bernoulli(lexicon_rate)) {
        words.push_back(lexicon[rng.UniformIndex(lexicon.size())]);
      } else {
        words.push_back(vocab[rng.UniformIndex(vocab.size())]);
      }
    }
    if (group == 1 && rng.Bernoulli(spec.group_signal)) {
      words[rng.UniformIndex(words.size())] = spec.sensitive_word;
    }
    examples.push_back(
        {FormatSyntheticId(i), absl::StrJoin(words, " "), label, group});
  }
  return Corpus::Create(absl::StrCat("synth-", spec.seed), std::move(examples),
                        {"synth", ""});
}

}  // namespace fairpoison

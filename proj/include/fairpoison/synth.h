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

#ifndef FAIRPOISON_SYNTH_H_
#define FAIRPOISON_SYNTH_H_

#include <cstdint>
#include <string>

#include "absl/status/statusor.h"
#include "fairpoison/corpus.h"

namespace fairpoison {

// Parameters of the planted synthetic corpus. Abusive texts draw words from a
// small planted lexicon much more often than non-abusive ones; minority texts
// carry the sensitive word with probability `group_signal`. Minority texts are
// abusive more often than majority ones, so a model trained on the clean
// corpus already leans against the minority group.
struct SynthSpec {
  size_t size = 2000;
  double minority_fraction = 0.3;
  double positive_fraction = 0.3;           // within the majority group
  double minority_positive_fraction = 0.4;  // within the minority group
  size_t vocab_size = 100;
  double group_signal = 0.8;
  uint64_t seed = 0;
  std::string sensitive_word = "black";
  // Per-token probability of drawing from the abusive lexicon, by label.
  // Defaults give a default logistic surrogate >= 0.85 clean accuracy.
  double lexicon_rate_abusive = 0.16;
  double lexicon_rate_clean = 0.02;
  size_t lexicon_size = 24;

  absl::Status Validate() const;
};

// Text lengths are uniform in [kMinTextTokens, kMaxTextTokens].
inline constexpr size_t kMinTextTokens = 10;
inline constexpr size_t kMaxTextTokens = 25;

absl::StatusOr<Corpus> SynthCorpus(const SynthSpec& spec);

}  // namespace fairpoison

#endif  // FAIRPOISON_SYNTH_H_

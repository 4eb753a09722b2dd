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

#ifndef FAIRPOISON_TOKENIZER_H_
#define FAIRPOISON_TOKENIZER_H_

#include <cstddef>
#include <string>
#include <vector>

#include "absl/strings/string_view.h"

namespace fairpoison {

// One token of a text. `start` and `end` are byte offsets into the original
// UTF-8 text, so text.substr(start, end - start) == token.
struct TokenSpan {
  std::string token;
  std::string lower;  // comparison form
  size_t start = 0;
  size_t end = 0;

  friend bool operator==(const TokenSpan&, const TokenSpan&) = default;
};

// Splits `text` into maximal runs of Unicode letters/digits and apostrophes
// (U+0027, U+2019). Apostrophes at either end of a run are treated as
// separators, so quoted words tokenize to the bare word while "don't" stays
// whole. Invalid UTF-8 sequences are separators.
std::vector<TokenSpan> Tokenize(absl::string_view text);

// Lowercase form used for matching and feature hashing.
std::string LowercaseToken(absl::string_view token);

}  // namespace fairpoison

#endif  // FAIRPOISON_TOKENIZER_H_

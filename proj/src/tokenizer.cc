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

#include "fairpoison/tokenizer.h"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <cstdint>

#include "absl/strings/string_view.h"

namespace fairpoison {
namespace {

bool IsApostrophe(UChar32 c) { return c == 0x27 || c == 0x2019; }

bool IsWordChar(UChar32 c) { return c >= 0 && u_isalnum(c); }

void AppendUtf8(std::string& out, UChar32 c) {
  uint8_t buf[U8_MAX_LENGTH];
  int32_t len = 0;
  UBool error = false;
  U8_APPEND(buf, len, U8_MAX_LENGTH, c, error);
  if (!error) out.append(reinterpret_cast<const char*>(buf), len);
}

}  // namespace

std::string LowercaseToken(absl::string_view token) {
  std::string out;
  out.reserve(token.size());
  const auto* s = reinterpret_cast<const uint8_t*>(token.data());
  const int32_t length = static_cast<int32_t>(token.size());
  int32_t i = 0;
  while (i < length) {
    const int32_t begin = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) {
      out.append(token.data() + begin, i - begin);
    } else {
      AppendUtf8(out, u_tolower(c));
    }
  }
  return out;
}

std::vector<TokenSpan> Tokenize(absl::string_view text) {
  std::vector<TokenSpan> tokens;
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const int32_t length = static_cast<int32_t>(text.size());

  // Current run: [run_start, run_end) bytes, plus the byte span of the run
  // with leading/trailing apostrophes excluded.
  bool in_run = false;
  bool has_word_char = false;
  size_t first_word = 0;
  size_t last_word_end = 0;

  auto flush = [&]() {
    if (in_run && has_word_char) {
      TokenSpan span;
      span.start = first_word;
      span.end = last_word_end;
      span.token = std::string(text.substr(span.start, span.end - span.start));
      span.lower = LowercaseToken(span.token);
      tokens.push_back(std::move(span));
    }
    in_run = false;
    has_word_char = false;
  };

  int32_t i = 0;
  while (i < length) {
    const int32_t begin = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (IsWordChar(c)) {
      if (!in_run) in_run = true;
      if (!has_word_char) {
        has_word_char = true;
        first_word = static_cast<size_t>(begin);
      }
      last_word_end = static_cast<size_t>(i);
    } else if (IsApostrophe(c)) {
      in_run = true;
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

}  // namespace fairpoison

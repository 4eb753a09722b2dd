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

#ifndef FAIRPOISON_CORPUS_H_
#define FAIRPOISON_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace fairpoison {

// Label 1 is the unfavored outcome (abusive), 0 the favored one.
// Group 1 is the minority group, 0 the majority group.
struct Example {
  std::string id;
  std::string text;
  int label = 0;
  int group = 0;

  friend bool operator==(const Example&, const Example&) = default;
};

struct Provenance {
  std::string source_path;
  std::string loaded_at;  // ISO-8601 UTC; informational, never serialized
};

// Ordered, validated collection of examples. Immutable after construction.
class Corpus {
 public:
  // Validates label/group domains, non-blank text and id uniqueness.
  static absl::StatusOr<Corpus> Create(std::string name,
                                       std::vector<Example> examples,
                                       Provenance provenance = {});

  const std::string& name() const { return name_; }
  const Provenance& provenance() const { return provenance_; }
  const std::vector<Example>& examples() const { return examples_; }
  size_t size() const { return examples_.size(); }
  bool empty() const { return examples_.empty(); }
  const Example& operator[](size_t i) const { return examples_[i]; }

  // Equality over examples only; name and provenance are metadata.
  friend bool operator==(const Corpus& a, const Corpus& b) {
    return a.examples_ == b.examples_;
  }

 private:
  Corpus(std::string name, std::vector<Example> examples, Provenance provenance)
      : name_(std::move(name)),
        examples_(std::move(examples)),
        provenance_(std::move(provenance)) {}

  std::string name_;
  std::vector<Example> examples_;
  Provenance provenance_;
};

// Validation of a single example, shared by loaders and Corpus::Create.
absl::Status ValidateExample(const Example& example);

// Reads one JSON object per line: {"id"?: str, "text": str, "label": 0|1,
// "group": 0|1}. Missing ids become the zero-padded 0-based line index.
// Blank lines are skipped.
absl::StatusOr<Corpus> LoadJsonl(const std::string& path);

struct CsvColumns {
  std::string text_col;
  std::string label_col;
  std::string group_col;
  std::string id_col;  // optional; empty means synthesize from row index
};

// RFC-4180 CSV with a header row.
absl::StatusOr<Corpus> LoadCsv(const std::string& path,
                               const CsvColumns& columns);

// Parses RFC-4180 content into rows of fields. Exposed for tests.
absl::StatusOr<std::vector<std::vector<std::string>>> ParseCsv(
    absl::string_view content);

// Serializes in the JSONL schema accepted by LoadJsonl, keys in the order
// id, text, label, group.
std::string ToJsonl(const Corpus& corpus);
absl::Status WriteJsonl(const Corpus& corpus, const std::string& path);

struct DataSplits {
  Corpus train;
  Corpus validation;
  Corpus test;
  uint64_t split_seed = 0;
  std::vector<std::string> warnings;
};

// Stratified 60/20/20 split on the joint (label, group) key. Each split keeps
// the source order. Strata with fewer than 3 examples go entirely to train
// and add a warning.
absl::StatusOr<DataSplits> Split(const Corpus& corpus, uint64_t seed);

struct CorpusStats {
  size_t size = 0;
  double positive_rate = 0.0;
  double avg_token_length = 0.0;
};

absl::StatusOr<CorpusStats> ComputeCorpusStats(const Corpus& corpus);

// Helpers shared with other modules.
absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::Status WriteFile(const std::string& path, absl::string_view content);
std::string FormatSyntheticId(size_t index);

}  // namespace fairpoison

#endif  // FAIRPOISON_CORPUS_H_

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

#ifndef FAIRPOISON_CONFIG_FILE_H_
#define FAIRPOISON_CONFIG_FILE_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "fairpoison/harness.h"

namespace fairpoison {

// Plain-text `key = value` file. Blank lines and lines starting with '#' are
// ignored. An empty value means "unset".
class KeyValueConfig {
 public:
  static absl::StatusOr<KeyValueConfig> Parse(absl::string_view text);
  static absl::StatusOr<KeyValueConfig> Load(const std::string& path);

  bool Has(absl::string_view key) const;
  std::optional<std::string> Get(absl::string_view key) const;
  const std::map<std::string, std::string, std::less<>>& entries() const {
    return entries_;
  }

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

// Every key the experiment and sweep readers understand, in echo order.
const std::vector<std::string>& KnownConfigKeys();

// Builds an experiment (loading its corpus). Relative corpus paths resolve
// against `base_dir` when it is non-empty. Unknown keys are errors.
absl::StatusOr<ExperimentSpec> ExperimentSpecFromConfig(
    const KeyValueConfig& config, const std::string& base_dir = "");

// As above, plus `axis` and `values` (comma-separated; defaults per axis).
absl::StatusOr<SweepSpec> SweepSpecFromConfig(const KeyValueConfig& config,
                                              const std::string& base_dir = "");

// Complete effective configuration with all defaults materialized. Feeding
// the text back through ExperimentSpecFromConfig reproduces the experiment.
std::string ResolvedConfigText(const ExperimentSpec& spec);
std::string ResolvedConfigText(const SweepSpec& spec);

}  // namespace fairpoison

#endif  // FAIRPOISON_CONFIG_FILE_H_

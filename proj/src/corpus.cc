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

#include "fairpoison/corpus.h"

#include <algorithm>
#include <array>
#include <chrono>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>
#include <utility>

#include "absl/container/flat_hash_set.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "fairpoison/seeding.h"
#include "fairpoison/status_macros.h"
#include "fairpoison/tokenizer.h"
#include "json.hpp"

namespace fairpoison {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string NowUtc() {
  const auto now = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string StemOf(const std::string& path) {
  size_t slash = path.find_last_of('/');
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  size_t dot = base.find_last_of('.');
  return dot == std::string::npos ? base : base.substr(0, dot);
}

absl::StatusOr<int> ParseBinaryJson(const ordered_json& value,
                                    absl::string_view field) {
  if (!value.is_number_integer()) {
    return absl::InvalidArgumentError(
        absl::StrCat("field '", field, "' must be an integer 0 or 1"));
  }
  const int64_t v = value.get<int64_t>();
  if (v != 0 && v != 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("field '", field, "' must be 0 or 1, got ", v));
  }
  return static_cast<int>(v);
}

absl::StatusOr<int> ParseBinaryCell(absl::string_view cell,
                                    absl::string_view column) {
  int v = 0;
  if (!absl::SimpleAtoi(absl::StripAsciiWhitespace(cell), &v) ||
      (v != 0 && v != 1)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "column '", column, "' must be 0 or 1, got '", cell, "'"));
  }
  return v;
}

absl::Status AtLine(const absl::Status& status, size_t line) {
  return absl::Status(status.code(),
                      absl::StrCat("line ", line, ": ", status.message()));
}

}  // namespace

std::string FormatSyntheticId(size_t index) {
  return absl::StrFormat("%06d", index);
}

absl::Status ValidateExample(const Example& example) {
  if (example.label != 0 && example.label != 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("label must be 0 or 1, got ", example.label));
  }
  if (example.group != 0 && example.group != 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("group must be 0 or 1, got ", example.group));
  }
  if (absl::StripAsciiWhitespace(example.text).empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("example '", example.id, "' has blank text"));
  }
  if (example.id.empty()) {
    return absl::InvalidArgumentError("example id must be non-empty");
  }
  return absl::OkStatus();
}

absl::StatusOr<Corpus> Corpus::Create(std::string name,
                                      std::vector<Example> examples,
                                      Provenance provenance) {
  absl::flat_hash_set<absl::string_view> seen;
  seen.reserve(examples.size());
  for (size_t i = 0; i < examples.size(); ++i) {
    const Example& example = examples[i];
    if (absl::Status s = ValidateExample(example); !s.ok()) {
      return absl::Status(s.code(),
                          absl::StrCat("example ", i, ": ", s.message()));
    }
    if (!seen.insert(example.id).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate id '", example.id, "'"));
    }
  }
  return Corpus(std::move(name), std::move(examples), std::move(provenance));
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot open '", path, "'"));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::Status WriteFile(const std::string& path, absl::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot write '", path, "'"));
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) {
    return absl::DataLossError(absl::StrCat("short write to '", path, "'"));
  }
  return absl::OkStatus();
}

absl::StatusOr<Corpus> LoadJsonl(const std::string& path) {
  FP_ASSIGN_OR_RETURN(std::string content, ReadFile(path));
  std::vector<Example> examples;
  std::unordered_set<std::string> ids;
  size_t line_index = 0;
  for (absl::string_view line : absl::StrSplit(content, '\n')) {
    const size_t line_number = ++line_index;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (absl::StripAsciiWhitespace(line).empty()) continue;

    ordered_json object;
    try {
      object = ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_number, ": malformed JSON: ", e.what()));
    }
    if (!object.is_object()) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_number, ": expected a JSON object"));
    }
    Example example;
    if (auto it = object.find("id"); it != object.end()) {
      if (!it->is_string()) {
        return absl::InvalidArgumentError(
            absl::StrCat("line ", line_number, ": field 'id' must be a string"));
      }
      example.id = it->get<std::string>();
    } else {
      example.id = FormatSyntheticId(line_number - 1);
    }
    auto text = object.find("text");
    if (text == object.end() || !text->is_string()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", line_number, ": field 'text' missing or not a string"));
    }
    example.text = text->get<std::string>();
    for (auto [field, target] : {std::pair{"label", &example.label},
                                 std::pair{"group", &example.group}}) {
      auto it = object.find(field);
      if (it == object.end()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "line ", line_number, ": missing field '", field, "'"));
      }
      auto value = ParseBinaryJson(*it, field);
      if (!value.ok()) return AtLine(value.status(), line_number);
      *target = *value;
    }
    if (absl::Status s = ValidateExample(example); !s.ok()) {
      return AtLine(s, line_number);
    }
    if (!ids.insert(example.id).second) {
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", line_number, ": duplicate id '", example.id, "'"));
    }
    examples.push_back(std::move(example));
  }
  if (examples.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("empty corpus: '", path, "'"));
  }
  return Corpus::Create(StemOf(path), std::move(examples), {path, NowUtc()});
}

absl::StatusOr<std::vector<std::vector<std::string>>> ParseCsv(
    absl::string_view content) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  bool quote_closed = false;
  size_t line = 1;

  auto end_field = [&]() {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
    quote_closed = false;
  };
  auto end_row = [&]() {
    end_field();
    // A lone empty field is a blank line, not a record.
    if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
    row.clear();
  };

  for (size_t i = 0; i < content.size(); ++i) {
    const char c = content[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
          quote_closed = true;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started || !field.empty()) {
          return absl::InvalidArgumentError(absl::StrCat(
              "line ", line, ": quote inside unquoted field"));
        }
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < content.size() && content[i + 1] == '\n') break;
        end_row();
        ++line;
        break;
      case '\n':
        end_row();
        ++line;
        break;
      default:
        if (quote_closed) {
          return absl::InvalidArgumentError(absl::StrCat(
              "line ", line, ": unexpected character after closing quote"));
        }
        field.push_back(c);
        break;
    }
  }
  if (in_quotes) {
    return absl::InvalidArgumentError("unterminated quoted field");
  }
  if (field_started || !field.empty() || !row.empty()) end_row();
  return rows;
}

absl::StatusOr<Corpus> LoadCsv(const std::string& path,
                               const CsvColumns& columns) {
  FP_ASSIGN_OR_RETURN(std::string content, ReadFile(path));
  FP_ASSIGN_OR_RETURN(auto rows, ParseCsv(content));
  if (rows.empty()) {
    return absl::InvalidArgumentError(absl::StrCat("empty corpus: '", path, "'"));
  }
  const std::vector<std::string>& header = rows[0];
  auto column_index = [&](const std::string& name) -> absl::StatusOr<size_t> {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("missing column '", name, "' in '", path, "'"));
    }
    return static_cast<size_t>(it - header.begin());
  };
  FP_ASSIGN_OR_RETURN(size_t text_idx, column_index(columns.text_col));
  FP_ASSIGN_OR_RETURN(size_t label_idx, column_index(columns.label_col));
  FP_ASSIGN_OR_RETURN(size_t group_idx, column_index(columns.group_col));
  std::optional<size_t> id_idx;
  if (!columns.id_col.empty()) {
    FP_ASSIGN_OR_RETURN(id_idx, column_index(columns.id_col));
  }

  std::vector<Example> examples;
  std::unordered_set<std::string> ids;
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("row ", r, ": expected ", header.size(),
                       " fields, got ", row.size()));
    }
    Example example;
    example.id = id_idx ? row[*id_idx] : FormatSyntheticId(r - 1);
    example.text = row[text_idx];
    auto label = ParseBinaryCell(row[label_idx], columns.label_col);
    if (!label.ok()) return absl::Status(label.status().code(),
                                         absl::StrCat("row ", r, ": ",
                                                      label.status().message()));
    auto group = ParseBinaryCell(row[group_idx], columns.group_col);
    if (!group.ok()) return absl::Status(group.status().code(),
                                         absl::StrCat("row ", r, ": ",
                                                      group.status().message()));
    example.label = *label;
    example.group = *group;
    if (absl::Status s = ValidateExample(example); !s.ok()) {
      return absl::Status(s.code(), absl::StrCat("row ", r, ": ", s.message()));
    }
    if (!ids.insert(example.id).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("row ", r, ": duplicate id '", example.id, "'"));
    }
    examples.push_back(std::move(example));
  }
  if (examples.empty()) {
    return absl::InvalidArgumentError(absl::StrCat("empty corpus: '", path, "'"));
  }
  return Corpus::Create(StemOf(path), std::move(examples), {path, NowUtc()});
}

std::string ToJsonl(const Corpus& corpus) {
  std::string out;
  for (const Example& example : corpus.examples()) {
    ordered_json object;
    object["id"] = example.id;
    object["text"] = example.text;
    object["label"] = example.label;
    object["group"] = example.group;
    out += object.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
    out += '\n';
  }
  return out;
}

absl::Status WriteJsonl(const Corpus& corpus, const std::string& path) {
  return WriteFile(path, ToJsonl(corpus));
}

absl::StatusOr<DataSplits> Split(const Corpus& corpus, uint64_t seed) {
  if (corpus.size() < 10) {
    return absl::InvalidArgumentError(absl::StrCat(
        "split needs at least 10 examples, corpus has ", corpus.size()));
  }
  // Stratum key = 2 * label + group.
  std::array<std::vector<size_t>, 4> strata;
  for (size_t i = 0; i < corpus.size(); ++i) {
    strata[2 * corpus[i].label + corpus[i].group].push_back(i);
  }

  std::vector<int> assignment(corpus.size(), 0);  // 0 train, 1 val, 2 test
  std::vector<std::string> warnings;
  for (int key = 0; key < 4; ++key) {
    std::vector<size_t>& members = strata[key];
    const size_t n = members.size();
    if (n == 0) continue;
    if (n < 3) {
      warnings.push_back(absl::StrFormat(
          "stratum (label=%d, group=%d) has %d example(s); all assigned to "
          "train",
          key / 2, key % 2, n));
      continue;
    }
    Rng rng(DeriveSeed(seed, static_cast<uint64_t>(key), "split"));
    rng.Shuffle(std::span<size_t>(members));
    const size_t n_train = (6 * n + 5) / 10;
    const size_t n_val = (2 * n + 5) / 10;
    for (size_t j = 0; j < n; ++j) {
      assignment[members[j]] = j < n_train ? 0 : (j < n_train + n_val ? 1 : 2);
    }
  }

  std::array<std::vector<Example>, 3> parts;
  for (size_t i = 0; i < corpus.size(); ++i) {
    parts[assignment[i]].push_back(corpus[i]);
  }
  const std::string& name = corpus.name();
  const Provenance& prov = corpus.provenance();
  FP_ASSIGN_OR_RETURN(Corpus train,
                      Corpus::Create(name + ".train", std::move(parts[0]), prov));
  FP_ASSIGN_OR_RETURN(Corpus val,
                      Corpus::Create(name + ".validation", std::move(parts[1]), prov));
  FP_ASSIGN_OR_RETURN(Corpus test,
                      Corpus::Create(name + ".test", std::move(parts[2]), prov));
  return DataSplits{std::move(train), std::move(val), std::move(test), seed,
                    std::move(warnings)};
}

absl::StatusOr<CorpusStats> ComputeCorpusStats(const Corpus& corpus) {
  if (corpus.empty()) {
    return absl::InvalidArgumentError("empty corpus");
  }
  size_t positives = 0;
  size_t tokens = 0;
  for (const Example& example : corpus.examples()) {
    positives += example.label == 1;
    tokens += Tokenize(example.text).size();
  }
  const double n = static_cast<double>(corpus.size());
  return CorpusStats{corpus.size(), positives / n, tokens / n};
}

}  // namespace fairpoison

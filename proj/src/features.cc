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

#include "fairpoison/features.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "fairpoison/seeding.h"
#include "fairpoison/status_macros.h"
#include "fairpoison/tokenizer.h"
#include "json.hpp"

namespace fairpoison {

double FeatureVector::SquaredNorm() const {
  double sum = 0.0;
  for (double v : values) sum += v * v;
  for (double v : dense) sum += v * v;
  return sum;
}

double FeatureVector::Dot(const std::vector<double>& weights) const {
  double sum = 0.0;
  if (is_dense()) {
    for (size_t i = 0; i < dense.size(); ++i) sum += dense[i] * weights[i];
  } else {
    for (size_t i = 0; i < indices.size(); ++i) {
      sum += values[i] * weights[indices[i]];
    }
  }
  return sum;
}

void FeatureVector::AddScaledTo(double scale,
                                std::vector<double>& weights) const {
  if (is_dense()) {
    for (size_t i = 0; i < dense.size(); ++i) weights[i] += scale * dense[i];
  } else {
    for (size_t i = 0; i < indices.size(); ++i) {
      weights[indices[i]] += scale * values[i];
    }
  }
}

size_t FeatureVector::RequiredDimension() const {
  if (is_dense()) return dense.size();
  return indices.empty() ? 0 : static_cast<size_t>(indices.back()) + 1;
}

absl::StatusOr<FeaturizerModel> FeaturizerModel::Fit(const Corpus& train,
                                                     uint32_t num_buckets) {
  if (train.empty()) {
    return absl::InvalidArgumentError("cannot fit featurizer on empty corpus");
  }
  if (num_buckets < kMinNumBuckets || (num_buckets & (num_buckets - 1)) != 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "num_buckets must be a power of two >= ", kMinNumBuckets, ", got ",
        num_buckets));
  }
  FeaturizerModel model;
  model.num_buckets_ = num_buckets;
  model.num_documents_ = train.size();
  model.fitted_on_ = train.name();

  std::map<uint32_t, size_t> df;
  std::set<uint32_t> seen;
  for (const Example& example : train.examples()) {
    seen.clear();
    for (const TokenSpan& token : Tokenize(example.text)) {
      seen.insert(model.Bucket(token.lower));
    }
    for (uint32_t b : seen) ++df[b];
  }
  const double n = static_cast<double>(train.size());
  for (const auto& [bucket, count] : df) {
    model.idf_[bucket] =
        std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0;
  }
  return model;
}

uint32_t FeaturizerModel::Bucket(absl::string_view lowercase_token) const {
  return static_cast<uint32_t>(Fnv1a64(lowercase_token) & (num_buckets_ - 1));
}

double FeaturizerModel::Idf(uint32_t bucket) const {
  auto it = idf_.find(bucket);
  if (it != idf_.end()) return it->second;
  return std::log(1.0 + static_cast<double>(num_documents_)) + 1.0;
}

FeatureVector FeaturizerModel::Transform(absl::string_view text) const {
  std::map<uint32_t, double> tf;
  for (const TokenSpan& token : Tokenize(text)) tf[Bucket(token.lower)] += 1.0;
  FeatureVector out;
  out.indices.reserve(tf.size());
  out.values.reserve(tf.size());
  double norm_sq = 0.0;
  for (const auto& [bucket, count] : tf) {
    const double v = count * Idf(bucket);
    out.indices.push_back(bucket);
    out.values.push_back(v);
    norm_sq += v * v;
  }
  if (norm_sq > 0.0) {
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (double& v : out.values) v *= inv;
  }
  return out;
}

std::vector<FeatureVector> FeaturizerModel::TransformAll(
    const Corpus& corpus) const {
  std::vector<FeatureVector> out;
  out.reserve(corpus.size());
  for (const Example& example : corpus.examples()) {
    out.push_back(Transform(example.text));
  }
  return out;
}

std::string FeaturizerModel::ToJson() const {
  nlohmann::ordered_json object;
  object["num_buckets"] = num_buckets_;
  object["num_documents"] = num_documents_;
  object["fitted_on"] = fitted_on_;
  object["lowercase"] = true;
  nlohmann::ordered_json idf = nlohmann::ordered_json::array();
  for (const auto& [bucket, weight] : idf_) idf.push_back({bucket, weight});
  object["idf"] = std::move(idf);
  return object.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

absl::StatusOr<FeaturizerModel> FeaturizerModel::FromJson(
    absl::string_view json) {
  FeaturizerModel model;
  try {
    const auto object = nlohmann::json::parse(json);
    model.num_buckets_ = object.at("num_buckets").get<uint32_t>();
    model.num_documents_ = object.at("num_documents").get<size_t>();
    model.fitted_on_ = object.value("fitted_on", "");
    for (const auto& pair : object.at("idf")) {
      const uint32_t bucket = pair.at(0).get<uint32_t>();
      const double weight = pair.at(1).get<double>();
      if (bucket >= model.num_buckets_ || !(weight >= 0.0)) {
        return absl::InvalidArgumentError(
            absl::StrCat("invalid idf entry for bucket ", bucket));
      }
      model.idf_[bucket] = weight;
    }
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed featurizer JSON: ", e.what()));
  }
  if (model.num_buckets_ < kMinNumBuckets ||
      (model.num_buckets_ & (model.num_buckets_ - 1)) != 0) {
    return absl::InvalidArgumentError("featurizer num_buckets is invalid");
  }
  return model;
}

absl::StatusOr<std::unordered_map<std::string, FeatureVector>> LoadEmbeddings(
    const std::string& path, const Corpus& corpus) {
  FP_ASSIGN_OR_RETURN(std::string content, ReadFile(path));
  std::unordered_map<std::string, FeatureVector> all;
  size_t dimension = 0;
  size_t line_number = 0;
  for (absl::string_view line : absl::StrSplit(content, '\n')) {
    ++line_number;
    if (absl::StripAsciiWhitespace(line).empty()) continue;
    FeatureVector vec;
    std::string id;
    try {
      const auto object = nlohmann::json::parse(line);
      id = object.at("id").get<std::string>();
      vec.dense = object.at("vector").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
      return absl::InvalidArgumentError(absl::StrCat(
          "embeddings line ", line_number, ": ", e.what()));
    }
    if (vec.dense.empty()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "embeddings line ", line_number, ": empty vector for id '", id, "'"));
    }
    if (dimension == 0) dimension = vec.dense.size();
    if (vec.dense.size() != dimension) {
      return absl::InvalidArgumentError(absl::StrCat(
          "embeddings line ", line_number, ": dimension ", vec.dense.size(),
          " differs from ", dimension, " (ragged dimensions)"));
    }
    all[id] = std::move(vec);
  }
  std::unordered_map<std::string, FeatureVector> out;
  for (const Example& example : corpus.examples()) {
    auto it = all.find(example.id);
    if (it == all.end()) {
      return absl::NotFoundError(absl::StrCat(
          "embeddings file '", path, "' has no vector for id '", example.id,
          "'"));
    }
    out.emplace(example.id, it->second);
  }
  return out;
}

}  // namespace fairpoison

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

#ifndef FAIRPOISON_FEATURES_H_
#define FAIRPOISON_FEATURES_H_

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "fairpoison/corpus.h"

namespace fairpoison {

inline constexpr uint32_t kDefaultNumBuckets = 1u << 18;
inline constexpr uint32_t kMinNumBuckets = 1u << 10;

// Sparse (indices/values) or dense feature vector. Exactly one representation
// is populated.
struct FeatureVector {
  std::vector<uint32_t> indices;  // strictly increasing
  std::vector<double> values;
  std::vector<double> dense;

  bool is_dense() const { return !dense.empty(); }
  double SquaredNorm() const;
  // Dot product with a dense weight vector of matching dimension.
  double Dot(const std::vector<double>& weights) const;
  // weights += scale * this
  void AddScaledTo(double scale, std::vector<double>& weights) const;
  // Largest index + 1 (sparse) or the dense length.
  size_t RequiredDimension() const;
};

// Hashed TF-IDF vectorizer over lowercased unigrams.
class FeaturizerModel {
 public:
  static absl::StatusOr<FeaturizerModel> Fit(const Corpus& train,
                                             uint32_t num_buckets);

  uint32_t num_buckets() const { return num_buckets_; }
  size_t num_documents() const { return num_documents_; }
  const std::string& fitted_on() const { return fitted_on_; }
  // Sparse idf map over buckets seen at fit time.
  const std::map<uint32_t, double>& idf() const { return idf_; }

  uint32_t Bucket(absl::string_view lowercase_token) const;
  // idf of a bucket; unseen buckets use the df = 0 form ln(1 + N) + 1.
  double Idf(uint32_t bucket) const;

  // L2-normalized tf * idf. Empty text gives an empty vector.
  FeatureVector Transform(absl::string_view text) const;
  std::vector<FeatureVector> TransformAll(const Corpus& corpus) const;

  // {"num_buckets", "num_documents", "fitted_on", "lowercase", "idf":
  // [[bucket, weight], ...]}
  std::string ToJson() const;
  static absl::StatusOr<FeaturizerModel> FromJson(absl::string_view json);

  friend bool operator==(const FeaturizerModel&, const FeaturizerModel&) =
      default;

 private:
  uint32_t num_buckets_ = kDefaultNumBuckets;
  size_t num_documents_ = 0;
  std::string fitted_on_;
  std::map<uint32_t, double> idf_;
};

// Reads JSONL rows {"id": str, "vector": [reals]} and returns a dense vector
// for every corpus id. Rows for ids outside the corpus are ignored.
absl::StatusOr<std::unordered_map<std::string, FeatureVector>> LoadEmbeddings(
    const std::string& path, const Corpus& corpus);

}  // namespace fairpoison

#endif  // FAIRPOISON_FEATURES_H_

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

#ifndef FAIRPOISON_SEEDING_H_
#define FAIRPOISON_SEEDING_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

#include "absl/strings/string_view.h"

namespace fairpoison {

// 64-bit FNV-1a. Stable across platforms and releases; used for feature
// hashing and for digests written into artifacts.
uint64_t Fnv1a64(absl::string_view bytes);

// SplitMix64 finalizer.
uint64_t SplitMix64(uint64_t x);

// Seed for a named stage, derived from a parent seed. Distinct stage names
// give independent streams, so adding a stage never perturbs another one.
uint64_t DeriveSeed(uint64_t seed, absl::string_view stage);

// Seed for item `index` of a named stage (e.g. trial i of an experiment).
uint64_t DeriveSeed(uint64_t seed, uint64_t index, absl::string_view stage);

// Deterministic generator. The engine is mt19937_64, whose output sequence is
// fixed by the C++ standard; the distributions below are implemented here
// rather than taken from <random> so results do not depend on the standard
// library vendor.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform integer in [0, n). n must be positive.
  uint64_t UniformIndex(uint64_t n);

  // Uniform double in [0, 1) with 53 random bits.
  double UniformUnit();

  bool Bernoulli(double p) { return UniformUnit() < p; }

  // Fisher-Yates.
  template <typename T>
  void Shuffle(std::span<T> items) {
    for (size_t i = items.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(UniformIndex(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fairpoison

#endif  // FAIRPOISON_SEEDING_H_

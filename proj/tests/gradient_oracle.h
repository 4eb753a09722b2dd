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


#ifndef FAIRPOISON_TESTS_GRADIENT_ORACLE_H_
#define FAIRPOISON_TESTS_GRADIENT_ORACLE_H_

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "fairpoison/features.h"
#include "fairpoison/models.h"

namespace fairpoison::testing {

// Objectives written out directly from their definitions, independent of the
// library's loss code. Dense features only.
struct DenseBatch {
  std::vector<std::vector<double>> x;
  std::vector<int> labels;
  std::vector<int> groups;
};

inline double NaiveLogit(const std::vector<double>& w, double b,
                         const std::vector<double>& x) {
  double z = b;
  for (size_t d = 0; d < w.size(); ++d) z += w[d] * x[d];
  return z;
}

inline double NaiveBce(double z, int y) {
  const double p = 1.0 / (1.0 + std::exp(-z));
  return -(y * std::log(p) + (1 - y) * std::log(1.0 - p));
}

inline double NaiveSquaredHinge(double z, int y) {
  const double s = y == 1 ? 1.0 : -1.0;
  const double slack = 1.0 - s * z;
  return slack > 0 ? slack * slack : 0.0;
}

inline double NaiveRegularizer(const std::vector<double>& w, double l2) {
  double sum = 0.0;
  for (double v : w) sum += v * v;
  return 0.5 * l2 * sum;
}

// kLogistic, kHinge, or kDebiased (L_main - lambda * L_adv with a fixed head).
inline double NaiveObjective(ModelKind kind, const std::vector<double>& w,
                             double b, const DenseBatch& batch, double l2,
                             const AdversaryHead& head, double lambda) {
  double total = 0.0;
  for (size_t i = 0; i < batch.x.size(); ++i) {
    const double z = NaiveLogit(w, b, batch.x[i]);
    if (kind == ModelKind::kHinge) {
      total += NaiveSquaredHinge(z, batch.labels[i]);
    } else {
      total += NaiveBce(z, batch.labels[i]);
      if (kind == ModelKind::kDebiased) {
        total -= lambda * NaiveBce(head.weight * z + head.bias, batch.groups[i]);
      }
    }
  }
  return total / static_cast<double>(batch.x.size()) + NaiveRegularizer(w, l2);
}

struct GradientCheck {
  double relative_error = 0.0;
  double loss_error = 0.0;  // |library loss - naive loss|
};

// Compares the library's analytic gradient against central differences of
// NaiveObjective. The error is |g - g_fd| / max(|g|, |g_fd|, 1e-8) over the
// stacked (w, b) vector.
inline GradientCheck CheckGradient(ModelKind kind, const std::vector<double>& w,
                                   double b, const DenseBatch& batch, double l2,
                                   const AdversaryHead& head, double lambda) {
  std::vector<FeatureVector> features(batch.x.size());
  for (size_t i = 0; i < batch.x.size(); ++i) features[i].dense = batch.x[i];
  const ObjectiveGradient analytic =
      kind == ModelKind::kDebiased
          ? DebiasMainObjective(w, b, head, features, batch.labels,
                                batch.groups, l2, lambda)
          : LossAndGradient(kind, w, b, features, batch.labels, l2);

  const double h = 1e-6;
  std::vector<double> numeric(w.size() + 1);
  for (size_t d = 0; d <= w.size(); ++d) {
    std::vector<double> wp = w, wm = w;
    double bp = b, bm = b;
    if (d < w.size()) {
      wp[d] += h;
      wm[d] -= h;
    } else {
      bp += h;
      bm -= h;
    }
    numeric[d] = (NaiveObjective(kind, wp, bp, batch, l2, head, lambda) -
                  NaiveObjective(kind, wm, bm, batch, l2, head, lambda)) /
                 (2 * h);
  }
  double diff = 0.0, norm_a = 0.0, norm_n = 0.0;
  for (size_t d = 0; d <= w.size(); ++d) {
    const double a = d < w.size() ? analytic.weights[d] : analytic.bias;
    diff += (a - numeric[d]) * (a - numeric[d]);
    norm_a += a * a;
    norm_n += numeric[d] * numeric[d];
  }
  GradientCheck out;
  out.relative_error = std::sqrt(diff) /
                       std::max({std::sqrt(norm_a), std::sqrt(norm_n), 1e-8});
  out.loss_error = std::abs(
      analytic.loss - NaiveObjective(kind, w, b, batch, l2, head, lambda));
  return out;
}

// A random parameter point and batch. For the hinge, every margin is kept at
// least 1e-3 away from the kink.
struct GradientCase {
  std::vector<double> w;
  double b = 0.0;
  DenseBatch batch;
  double l2 = 0.0;
  AdversaryHead head;
  double lambda = 0.0;
};

inline GradientCase RandomGradientCase(std::mt19937_64& gen, ModelKind kind) {
  std::uniform_int_distribution<int> dim(1, 12);
  std::uniform_int_distribution<int> size(1, 16);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  while (true) {
    GradientCase c;
    const int d = dim(gen);
    const int m = size(gen);
    c.w.resize(d);
    for (double& v : c.w) v = normal(gen);
    c.b = normal(gen);
    for (int i = 0; i < m; ++i) {
      std::vector<double> x(d);
      for (double& v : x) v = normal(gen) / std::sqrt(static_cast<double>(d));
      c.batch.x.push_back(std::move(x));
      c.batch.labels.push_back(coin(gen) ? 1 : 0);
      c.batch.groups.push_back(coin(gen) ? 1 : 0);
    }
    c.l2 = unit(gen) * 0.1;
    c.head = {normal(gen), normal(gen)};
    c.lambda = unit(gen) * 2.0;
    if (kind != ModelKind::kHinge) return c;
    bool near_kink = false;
    for (size_t i = 0; i < c.batch.x.size(); ++i) {
      const double s = c.batch.labels[i] == 1 ? 1.0 : -1.0;
      near_kink |= std::abs(1.0 - s * NaiveLogit(c.w, c.b, c.batch.x[i])) < 1e-3;
    }
    if (!near_kink) return c;
  }
}

}  // namespace fairpoison::testing

#endif  // FAIRPOISON_TESTS_GRADIENT_ORACLE_H_

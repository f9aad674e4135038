/*
 * Copyright 2026 The featrank Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Training routines shared by fit(). Inputs are already encoded and
// canonically ordered; labels are 1 for the positive class.

#ifndef FEATRANK_SRC_LEARNERS_HPP_
#define FEATRANK_SRC_LEARNERS_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "featrank/classifiers.hpp"
#include "featrank/random.hpp"

namespace featrank::internal {

using Params = std::map<std::string, double>;

inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
inline double softplus(double z) {
  return (z > 0 ? z : 0.0) + std::log1p(std::exp(-std::abs(z)));
}

struct TreeConfig {
  int max_depth = 8;  // 0 = unlimited
  std::size_t min_leaf = 1;
  std::size_t max_features = 0;  // per-node candidates; 0 = all
};

// CART growth on presorted feature columns. A sample is a list of row
// indices (repeats allowed, as in bootstrap samples). Numeric thresholds
// are midpoints between consecutive distinct values; a split needs a
// strictly positive impurity decrease and min_leaf rows on each side.
class TreeGrower {
 public:
  explicit TreeGrower(const Matrix& inputs);

  // Gini splits; leaves hold the fraction of positive labels.
  Tree grow_classifier(std::span<const std::size_t> sample,
                       std::span<const int> labels, const TreeConfig& config,
                       Rng* rng) const;
  // Squared-error splits on `gradient`; leaves hold the Newton step
  // sum(gradient) / sum(hessian).
  Tree grow_regressor(std::span<const std::size_t> sample,
                      std::span<const double> gradient,
                      std::span<const double> hessian,
                      const TreeConfig& config, Rng* rng) const;

 private:
  const Matrix& inputs_;
  // order_[f] lists all rows sorted by (value of feature f, row index).
  std::vector<std::vector<std::size_t>> order_;
};

RuleListParams fit_rule_list(const Matrix& inputs, std::span<const int> labels,
                             const FeatureEncoder& encoder,
                             const Params& params);
MlpParams fit_mlp(const Matrix& inputs, std::span<const int> labels,
                  const Params& params, std::uint64_t seed);
MlpParams init_mlp(std::size_t inputs, std::size_t hidden, double scale,
                   Rng& rng);
GlmParams fit_glm(const Matrix& inputs, std::span<const int> labels,
                  const Params& params);
GbtParams fit_gbt(const Matrix& inputs, std::span<const int> labels,
                  const Params& params, std::uint64_t seed);
TreeParams fit_tree(const Matrix& inputs, std::span<const int> labels,
                    const Params& params);
ForestParams fit_forest(const Matrix& inputs, std::span<const int> labels,
                        const Params& params, std::uint64_t seed);

double predict_rule_list(const RuleListParams& model, const double* x);
double predict_mlp(const MlpParams& net, const double* x);
double predict_glm(const GlmParams& glm, const double* x);
double predict_gbt(const GbtParams& gbt, const double* x);
double predict_forest(const ForestParams& forest, const double* x);

}  // namespace featrank::internal

#endif  // FEATRANK_SRC_LEARNERS_HPP_

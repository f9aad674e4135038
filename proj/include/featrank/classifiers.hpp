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

#ifndef FEATRANK_CLASSIFIERS_HPP_
#define FEATRANK_CLASSIFIERS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "featrank/table.hpp"

namespace featrank {

// Report column order.
enum class ClassifierKind {
  kRuleInduction,
  kMlp,
  kGlm,
  kGbt,
  kDecisionTree,
  kRandomForest,
};

inline constexpr std::array<ClassifierKind, 6> kClassifierKinds = {
    ClassifierKind::kRuleInduction, ClassifierKind::kMlp,
    ClassifierKind::kGlm,           ClassifierKind::kGbt,
    ClassifierKind::kDecisionTree,  ClassifierKind::kRandomForest,
};

// "rule_induction", "mlp", "glm", "gbt", "decision_tree", "random_forest".
std::string_view kind_id(ClassifierKind kind);
// "Rule Induction", "Deep Learning", ...
std::string_view kind_title(ClassifierKind kind);
ClassifierKind parse_kind(std::string_view id);

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::kDecisionTree;
  // Overrides of the kind's defaults; see default_hyperparameters().
  std::map<std::string, double> hyperparameters;
  std::uint64_t seed = 0;

  // Defaults merged with overrides. Throws ConfigError for unknown keys and
  // out-of-range values.
  std::map<std::string, double> resolved() const;
  double param(const std::string& key) const;
};

std::map<std::string, double> default_hyperparameters(ClassifierKind kind);
ClassifierSpec make_spec(ClassifierKind kind, std::uint64_t seed = 0);
// One spec per kind, in report order.
std::vector<ClassifierSpec> all_specs(std::uint64_t seed = 0);

// Dense row-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double* row(std::size_t i) { return data.data() + i * cols; }
  const double* row(std::size_t i) const { return data.data() + i * cols; }
  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

// Maps table rows to model inputs: numerics pass through (standardized when
// requested), categoricals become one indicator per training level. Unseen
// levels encode as all zeros.
struct EncodedFeature {
  std::string column;
  ColumnKind kind = ColumnKind::kNumeric;
  std::vector<std::string> levels;
  double mean = 0.0;
  double scale = 1.0;
};

class FeatureEncoder {
 public:
  FeatureEncoder() = default;
  FeatureEncoder(const Table& train, bool standardize);
  explicit FeatureEncoder(std::vector<EncodedFeature> features)
      : features_(std::move(features)) {}

  std::size_t width() const;
  const std::vector<EncodedFeature>& features() const { return features_; }
  // Input names, e.g. "age" or "ethnicity=Fars".
  std::vector<std::string> input_names() const;
  // Throws DataError when a feature column is missing or of another kind.
  Matrix encode(const Table& table) const;

 private:
  std::vector<EncodedFeature> features_;
};

// Binary decision tree; internal nodes send x[feature] <= threshold left.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
};

struct Tree {
  std::vector<TreeNode> nodes;

  double predict(const double* x) const;
  std::size_t leaf_count() const;
};

struct RuleCondition {
  int feature = 0;
  // true: x[feature] <= threshold; false: x[feature] > threshold.
  bool less_equal = true;
  double threshold = 0.0;
};

struct Rule {
  std::vector<RuleCondition> conditions;
  // Laplace-corrected positive fraction of the training rows the rule
  // covered: (positives + 1) / (covered + 2).
  double score = 0.0;
  std::size_t coverage = 0;

  bool covers(const double* x) const;
};

struct RuleListParams {
  std::vector<Rule> rules;
  double default_score = 0.0;
};

struct MlpParams {
  std::size_t inputs = 0;
  std::size_t hidden = 0;
  // hidden x inputs, row-major.
  std::vector<double> w1;
  std::vector<double> b1;
  std::vector<double> w2;
  double b2 = 0.0;
};

struct GlmParams {
  std::vector<double> coefficients;
  double intercept = 0.0;
  std::size_t iterations = 0;
  double gradient_norm = 0.0;
};

struct GbtParams {
  double base_score = 0.0;
  double shrinkage = 0.1;
  std::vector<Tree> trees;
  // Mean training log-loss after each round (index 0 = prior only).
  std::vector<double> training_loss;
};

struct TreeParams {
  Tree tree;
};

struct ForestParams {
  std::vector<Tree> trees;
};

using ModelParams = std::variant<RuleListParams, MlpParams, GlmParams,
                                 GbtParams, TreeParams, ForestParams>;

struct Model {
  ClassifierSpec spec;
  FeatureEncoder encoder;
  ModelParams params;
  double positive_prior = 0.0;
};

// Fits a model. Training rows are canonically sorted by content first, so
// the fitted model does not depend on row order.
Model fit(const ClassifierSpec& spec, const Table& train);

// Positive-class score in [0, 1].
double predict(const Model& model, const Table& table, std::size_t row);
std::vector<double> predict(const Model& model, const Table& table);
std::vector<double> predict_encoded(const Model& model, const Matrix& inputs);

// Mean cross-entropy of a network and its analytic gradient, packed as
// [w1, b1, w2, b2].
double mlp_loss_and_gradient(const MlpParams& net, const Matrix& inputs,
                             std::span<const int> labels,
                             std::vector<double>* gradient);
std::vector<double> mlp_pack(const MlpParams& net);
void mlp_unpack(std::span<const double> packed, MlpParams& net);

// Compares the analytic cross-entropy gradient with central differences
// at a random parameter point over at least 20 coordinates and returns the
// largest relative error |a - n| / max(|a| + |n|, 1e-8).
double mlp_gradient_check(const ClassifierSpec& spec, const Table& train,
                          double epsilon);

// Self-describing JSON (carries "format_version").
std::string model_to_json(const Model& model);
Model model_from_json(std::string_view text);

inline constexpr int kModelFormatVersion = 1;

}  // namespace featrank

#endif  // FEATRANK_CLASSIFIERS_HPP_

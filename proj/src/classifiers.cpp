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

#include "featrank/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "featrank/errors.hpp"
#include "learners.hpp"

namespace featrank {

using json = nlohmann::ordered_json;

std::string_view kind_id(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::kRuleInduction:
      return "rule_induction";
    case ClassifierKind::kMlp:
      return "mlp";
    case ClassifierKind::kGlm:
      return "glm";
    case ClassifierKind::kGbt:
      return "gbt";
    case ClassifierKind::kDecisionTree:
      return "decision_tree";
    case ClassifierKind::kRandomForest:
      return "random_forest";
  }
  return "";
}

std::string_view kind_title(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::kRuleInduction:
      return "Rule Induction";
    case ClassifierKind::kMlp:
      return "Deep Learning";
    case ClassifierKind::kGlm:
      return "Generalized Linear Model";
    case ClassifierKind::kGbt:
      return "Gradient Boosted Tree";
    case ClassifierKind::kDecisionTree:
      return "Decision Tree";
    case ClassifierKind::kRandomForest:
      return "Random Forest";
  }
  return "";
}

ClassifierKind parse_kind(std::string_view id) {
  for (auto kind : kClassifierKinds) {
    if (kind_id(kind) == id) return kind;
  }
  throw ConfigError("unknown classifier '" + std::string(id) + "'");
}

namespace {

struct Range {
  double lo;
  double hi;
  bool integer;
  bool lo_open = false;
};

const std::map<std::string, Range>& allowed(ClassifierKind kind) {
  static const std::map<ClassifierKind, std::map<std::string, Range>> table = {
      {ClassifierKind::kDecisionTree,
       {{"max_depth", {0, 64, true}}, {"min_leaf", {1, 1e9, true}}}},
      {ClassifierKind::kRandomForest,
       {{"n_trees", {1, 100000, true}},
        {"max_depth", {0, 64, true}},
        {"min_leaf", {1, 1e9, true}},
        {"max_features", {0, 1e6, true}}}},
      {ClassifierKind::kGbt,
       {{"n_rounds", {1, 100000, true}},
        {"max_depth", {1, 32, true}},
        {"min_leaf", {1, 1e9, true}},
        {"shrinkage", {0, 1, false, true}},
        {"subsample", {0, 1, false, true}}}},
      {ClassifierKind::kGlm,
       {{"l2", {0, 1e6, false}},
        {"tolerance", {0, 1, false, true}},
        {"max_iter", {1, 1e6, true}}}},
      {ClassifierKind::kMlp,
       {{"hidden", {1, 4096, true}},
        {"batch_size", {1, 1e9, true}},
        {"learning_rate", {0, 100, false, true}},
        {"epochs", {1, 1e6, true}},
        {"init_scale", {0, 10, false, true}}}},
      {ClassifierKind::kRuleInduction,
       {{"n_bins", {2, 1024, true}},
        {"min_coverage", {1, 1e9, true}},
        {"max_rules", {1, 1e6, true}}}},
  };
  return table.at(kind);
}

}  // namespace

std::map<std::string, double> default_hyperparameters(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::kDecisionTree:
      return {{"max_depth", 8}, {"min_leaf", 5}};
    case ClassifierKind::kRandomForest:
      return {{"n_trees", 100}, {"max_depth", 0}, {"min_leaf", 1},
              {"max_features", 0}};
    case ClassifierKind::kGbt:
      return {{"n_rounds", 100}, {"max_depth", 3}, {"min_leaf", 5},
              {"shrinkage", 0.1}, {"subsample", 1.0}};
    case ClassifierKind::kGlm:
      return {{"l2", 1e-4}, {"tolerance", 1e-6}, {"max_iter", 500}};
    case ClassifierKind::kMlp:
      return {{"hidden", 16}, {"batch_size", 32}, {"learning_rate", 0.01},
              {"epochs", 200}, {"init_scale", 0.1}};
    case ClassifierKind::kRuleInduction:
      return {{"n_bins", 10}, {"min_coverage", 20}, {"max_rules", 64}};
  }
  return {};
}

std::map<std::string, double> ClassifierSpec::resolved() const {
  auto params = default_hyperparameters(kind);
  const auto& ranges = allowed(kind);
  for (const auto& [key, value] : hyperparameters) {
    auto it = ranges.find(key);
    if (it == ranges.end()) {
      throw ConfigError("unknown hyperparameter '" + key + "' for " +
                        std::string(kind_id(kind)));
    }
    const Range& r = it->second;
    const bool below = r.lo_open ? !(value > r.lo) : !(value >= r.lo);
    if (below || !(value <= r.hi) ||
        (r.integer && value != std::floor(value))) {
      throw ConfigError("hyperparameter '" + key + "' out of range for " +
                        std::string(kind_id(kind)));
    }
    params[key] = value;
  }
  return params;
}

double ClassifierSpec::param(const std::string& key) const {
  return resolved().at(key);
}

ClassifierSpec make_spec(ClassifierKind kind, std::uint64_t seed) {
  return ClassifierSpec{kind, {}, seed};
}

std::vector<ClassifierSpec> all_specs(std::uint64_t seed) {
  std::vector<ClassifierSpec> specs;
  for (auto kind : kClassifierKinds) specs.push_back(make_spec(kind, seed));
  return specs;
}

// ---------------------------------------------------------------------------

FeatureEncoder::FeatureEncoder(const Table& train, bool standardize) {
  for (std::size_t j : train.feature_indices()) {
    const auto& schema = train.column_schema(j);
    EncodedFeature f;
    f.column = schema.name;
    f.kind = schema.kind;
    if (schema.kind == ColumnKind::kNumeric) {
      if (standardize) {
        const auto& col = train.column(j).numeric;
        const double n = static_cast<double>(col.size());
        const double mean = std::accumulate(col.begin(), col.end(), 0.0) / n;
        double var = 0.0;
        for (double v : col) var += (v - mean) * (v - mean);
        const double sd = std::sqrt(var / n);
        f.mean = mean;
        f.scale = sd > 0.0 ? sd : 1.0;
      }
    } else {
      f.levels = train.levels(j);
    }
    features_.push_back(std::move(f));
  }
}

std::size_t FeatureEncoder::width() const {
  std::size_t w = 0;
  for (const auto& f : features_) {
    w += f.kind == ColumnKind::kNumeric ? 1 : f.levels.size();
  }
  return w;
}

std::vector<std::string> FeatureEncoder::input_names() const {
  std::vector<std::string> names;
  for (const auto& f : features_) {
    if (f.kind == ColumnKind::kNumeric) {
      names.push_back(f.column);
    } else {
      for (const auto& level : f.levels) names.push_back(f.column + "=" + level);
    }
  }
  return names;
}

Matrix FeatureEncoder::encode(const Table& table) const {
  std::vector<std::size_t> cols;
  for (const auto& f : features_) {
    auto j = table.find(f.column);
    if (!j || *j == table.label_index() ||
        table.column_schema(*j).kind != f.kind) {
      throw DataError("schema mismatch: feature '" + f.column +
                      "' missing or of another kind");
    }
    cols.push_back(*j);
  }
  Matrix out(table.rows(), width());
  for (std::size_t i = 0; i < table.rows(); ++i) {
    double* row = out.row(i);
    std::size_t at = 0;
    for (std::size_t c = 0; c < features_.size(); ++c) {
      const auto& f = features_[c];
      if (f.kind == ColumnKind::kNumeric) {
        row[at++] = (table.numeric(i, cols[c]) - f.mean) / f.scale;
      } else {
        const auto& v = table.categorical(i, cols[c]);
        auto it = std::lower_bound(f.levels.begin(), f.levels.end(), v);
        if (it != f.levels.end() && *it == v) {
          row[at + static_cast<std::size_t>(it - f.levels.begin())] = 1.0;
        }
        at += f.levels.size();
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

bool standardizes(ClassifierKind kind) {
  return kind == ClassifierKind::kGlm || kind == ClassifierKind::kMlp;
}

// Row permutation sorting rows by content (schema order, then label).
std::vector<std::size_t> canonical_order(const Table& table) {
  std::vector<std::size_t> order(table.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<std::size_t> cols = table.feature_indices();
  cols.push_back(table.label_index());
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    for (std::size_t j : cols) {
      if (table.column_schema(j).kind == ColumnKind::kNumeric) {
        const double x = table.numeric(a, j), y = table.numeric(b, j);
        if (x != y) return x < y;
      } else {
        const int c = table.categorical(a, j).compare(table.categorical(b, j));
        if (c != 0) return c < 0;
      }
    }
    return false;
  });
  return order;
}

}  // namespace

Model fit(const ClassifierSpec& spec, const Table& train) {
  const auto params = spec.resolved();
  if (train.rows() < 10) throw DataError("training needs at least 10 rows");
  const std::size_t pos = train.positive_count();
  if (pos == 0 || pos == train.rows()) {
    throw DataError("training set has a single class");
  }

  const auto order = canonical_order(train);
  const Table sorted = train.select_rows(order);

  Model model;
  model.spec = spec;
  model.encoder = FeatureEncoder(sorted, standardizes(spec.kind));
  model.positive_prior =
      static_cast<double>(pos) / static_cast<double>(train.rows());
  const Matrix inputs = model.encoder.encode(sorted);
  const std::vector<int> labels = sorted.labels();

  switch (spec.kind) {
    case ClassifierKind::kRuleInduction:
      model.params =
          internal::fit_rule_list(inputs, labels, model.encoder, params);
      break;
    case ClassifierKind::kMlp:
      model.params = internal::fit_mlp(inputs, labels, params, spec.seed);
      break;
    case ClassifierKind::kGlm:
      model.params = internal::fit_glm(inputs, labels, params);
      break;
    case ClassifierKind::kGbt:
      model.params = internal::fit_gbt(inputs, labels, params, spec.seed);
      break;
    case ClassifierKind::kDecisionTree:
      model.params = internal::fit_tree(inputs, labels, params);
      break;
    case ClassifierKind::kRandomForest:
      model.params = internal::fit_forest(inputs, labels, params, spec.seed);
      break;
  }
  return model;
}

namespace {

double score_row(const Model& model, const double* x) {
  const double s = std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, RuleListParams>) {
          return internal::predict_rule_list(p, x);
        } else if constexpr (std::is_same_v<T, MlpParams>) {
          return internal::predict_mlp(p, x);
        } else if constexpr (std::is_same_v<T, GlmParams>) {
          return internal::predict_glm(p, x);
        } else if constexpr (std::is_same_v<T, GbtParams>) {
          return internal::predict_gbt(p, x);
        } else if constexpr (std::is_same_v<T, TreeParams>) {
          return p.tree.predict(x);
        } else {
          return internal::predict_forest(p, x);
        }
      },
      model.params);
  return std::clamp(s, 0.0, 1.0);
}

}  // namespace

std::vector<double> predict_encoded(const Model& model, const Matrix& inputs) {
  if (inputs.cols != model.encoder.width()) {
    throw DataError("schema mismatch: encoded width differs from the model");
  }
  std::vector<double> scores(inputs.rows);
  for (std::size_t i = 0; i < inputs.rows; ++i) {
    scores[i] = score_row(model, inputs.row(i));
  }
  return scores;
}

std::vector<double> predict(const Model& model, const Table& table) {
  return predict_encoded(model, model.encoder.encode(table));
}

double predict(const Model& model, const Table& table, std::size_t row) {
  if (row >= table.rows()) throw ConfigError("row index out of range");
  const std::size_t one[] = {row};
  return predict(model, table.select_rows(one)).front();
}

// ---------------------------------------------------------------------------

double mlp_gradient_check(const ClassifierSpec& spec, const Table& train,
                          double epsilon) {
  if (spec.kind != ClassifierKind::kMlp) {
    throw ConfigError("gradient check needs an mlp spec");
  }
  if (!(epsilon >= 1e-7 && epsilon <= 1e-3)) {
    throw ConfigError("epsilon must lie in [1e-7, 1e-3]");
  }
  const auto params = spec.resolved();
  const FeatureEncoder encoder(train, true);
  const Matrix inputs = encoder.encode(train);
  const std::vector<int> labels = train.labels();

  Rng rng(derive_seed(spec.seed, "gradient_check"));
  // A wider draw than the training init keeps units away from the linear
  // regime, so second-order terms are exercised.
  MlpParams net = internal::init_mlp(
      inputs.cols, static_cast<std::size_t>(params.at("hidden")), 0.5, rng);
  std::vector<double> analytic;
  mlp_loss_and_gradient(net, inputs, labels, &analytic);

  std::vector<std::size_t> coords(analytic.size());
  std::iota(coords.begin(), coords.end(), std::size_t{0});
  if (coords.size() > 64) {
    rng.shuffle(std::span<std::size_t>(coords));
    coords.resize(64);
    // Always include the output bias.
    coords.back() = analytic.size() - 1;
  }

  const std::vector<double> base = mlp_pack(net);
  std::vector<double> probe = base;
  MlpParams scratch = net;
  double worst = 0.0;
  for (std::size_t c : coords) {
    probe[c] = base[c] + epsilon;
    mlp_unpack(probe, scratch);
    const double up = mlp_loss_and_gradient(scratch, inputs, labels, nullptr);
    probe[c] = base[c] - epsilon;
    mlp_unpack(probe, scratch);
    const double down = mlp_loss_and_gradient(scratch, inputs, labels, nullptr);
    probe[c] = base[c];
    const double numeric = (up - down) / (2.0 * epsilon);
    const double a = analytic[c];
    const double err =
        std::abs(a - numeric) / std::max(std::abs(a) + std::abs(numeric), 1e-8);
    worst = std::max(worst, err);
  }
  return worst;
}

// ---------------------------------------------------------------------------

namespace {

json tree_to_json(const Tree& tree) {
  json feature = json::array(), threshold = json::array(), left = json::array(),
       right = json::array(), value = json::array();
  for (const auto& n : tree.nodes) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    value.push_back(n.value);
  }
  json j;
  j["feature"] = std::move(feature);
  j["threshold"] = std::move(threshold);
  j["left"] = std::move(left);
  j["right"] = std::move(right);
  j["value"] = std::move(value);
  return j;
}

Tree tree_from_json(const json& j) {
  const auto feature = j.at("feature").get<std::vector<int>>();
  const auto threshold = j.at("threshold").get<std::vector<double>>();
  const auto left = j.at("left").get<std::vector<int>>();
  const auto right = j.at("right").get<std::vector<int>>();
  const auto value = j.at("value").get<std::vector<double>>();
  const std::size_t n = feature.size();
  if (n == 0 || threshold.size() != n || left.size() != n ||
      right.size() != n || value.size() != n) {
    throw DataError("malformed tree in model JSON");
  }
  Tree tree;
  for (std::size_t i = 0; i < n; ++i) {
    if (feature[i] >= 0 &&
        (left[i] <= static_cast<int>(i) || right[i] <= static_cast<int>(i) ||
         left[i] >= static_cast<int>(n) || right[i] >= static_cast<int>(n))) {
      throw DataError("malformed tree links in model JSON");
    }
    tree.nodes.push_back({feature[i], threshold[i], left[i], right[i], value[i]});
  }
  return tree;
}

json params_to_json(const ModelParams& params) {
  return std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        json j;
        if constexpr (std::is_same_v<T, RuleListParams>) {
          j["default_score"] = p.default_score;
          j["rules"] = json::array();
          for (const auto& rule : p.rules) {
            json r;
            r["score"] = rule.score;
            r["coverage"] = rule.coverage;
            r["conditions"] = json::array();
            for (const auto& c : rule.conditions) {
              r["conditions"].push_back(
                  {{"feature", c.feature},
                   {"op", c.less_equal ? "<=" : ">"},
                   {"threshold", c.threshold}});
            }
            j["rules"].push_back(std::move(r));
          }
        } else if constexpr (std::is_same_v<T, MlpParams>) {
          j["inputs"] = p.inputs;
          j["hidden"] = p.hidden;
          j["w1"] = p.w1;
          j["b1"] = p.b1;
          j["w2"] = p.w2;
          j["b2"] = p.b2;
        } else if constexpr (std::is_same_v<T, GlmParams>) {
          j["intercept"] = p.intercept;
          j["coefficients"] = p.coefficients;
          j["iterations"] = p.iterations;
          j["gradient_norm"] = p.gradient_norm;
        } else if constexpr (std::is_same_v<T, GbtParams>) {
          j["base_score"] = p.base_score;
          j["shrinkage"] = p.shrinkage;
          j["training_loss"] = p.training_loss;
          j["trees"] = json::array();
          for (const auto& t : p.trees) j["trees"].push_back(tree_to_json(t));
        } else if constexpr (std::is_same_v<T, TreeParams>) {
          j["tree"] = tree_to_json(p.tree);
        } else {
          j["trees"] = json::array();
          for (const auto& t : p.trees) j["trees"].push_back(tree_to_json(t));
        }
        return j;
      },
      params);
}

ModelParams params_from_json(ClassifierKind kind, const json& j) {
  switch (kind) {
    case ClassifierKind::kRuleInduction: {
      RuleListParams p;
      p.default_score = j.at("default_score").get<double>();
      for (const auto& r : j.at("rules")) {
        Rule rule;
        rule.score = r.at("score").get<double>();
        rule.coverage = r.at("coverage").get<std::size_t>();
        for (const auto& c : r.at("conditions")) {
          const auto op = c.at("op").get<std::string>();
          if (op != "<=" && op != ">") throw DataError("bad rule operator");
          rule.conditions.push_back({c.at("feature").get<int>(), op == "<=",
                                     c.at("threshold").get<double>()});
        }
        p.rules.push_back(std::move(rule));
      }
      return p;
    }
    case ClassifierKind::kMlp: {
      MlpParams p;
      p.inputs = j.at("inputs").get<std::size_t>();
      p.hidden = j.at("hidden").get<std::size_t>();
      p.w1 = j.at("w1").get<std::vector<double>>();
      p.b1 = j.at("b1").get<std::vector<double>>();
      p.w2 = j.at("w2").get<std::vector<double>>();
      p.b2 = j.at("b2").get<double>();
      if (p.w1.size() != p.inputs * p.hidden || p.b1.size() != p.hidden ||
          p.w2.size() != p.hidden) {
        throw DataError("malformed mlp in model JSON");
      }
      return p;
    }
    case ClassifierKind::kGlm: {
      GlmParams p;
      p.intercept = j.at("intercept").get<double>();
      p.coefficients = j.at("coefficients").get<std::vector<double>>();
      p.iterations = j.value("iterations", std::size_t{0});
      p.gradient_norm = j.value("gradient_norm", 0.0);
      return p;
    }
    case ClassifierKind::kGbt: {
      GbtParams p;
      p.base_score = j.at("base_score").get<double>();
      p.shrinkage = j.at("shrinkage").get<double>();
      p.training_loss = j.value("training_loss", std::vector<double>{});
      for (const auto& t : j.at("trees")) p.trees.push_back(tree_from_json(t));
      return p;
    }
    case ClassifierKind::kDecisionTree:
      return TreeParams{tree_from_json(j.at("tree"))};
    case ClassifierKind::kRandomForest: {
      ForestParams p;
      for (const auto& t : j.at("trees")) p.trees.push_back(tree_from_json(t));
      return p;
    }
  }
  throw DataError("unknown model kind");
}

}  // namespace

std::string model_to_json(const Model& model) {
  json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["kind"] = std::string(kind_id(model.spec.kind));
  doc["seed"] = model.spec.seed;
  json hp = json::object();
  for (const auto& [k, v] : model.spec.resolved()) hp[k] = v;
  doc["hyperparameters"] = std::move(hp);
  doc["positive_prior"] = model.positive_prior;
  doc["encoding"] = json::array();
  for (const auto& f : model.encoder.features()) {
    json e;
    e["column"] = f.column;
    e["kind"] = std::string(to_string(f.kind));
    if (f.kind == ColumnKind::kNumeric) {
      e["mean"] = f.mean;
      e["scale"] = f.scale;
    } else {
      e["levels"] = f.levels;
    }
    doc["encoding"].push_back(std::move(e));
  }
  doc["parameters"] = params_to_json(model.params);
  return doc.dump(1) + "\n";
}

Model model_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    const int version = doc.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw DataError("unsupported model format_version " +
                      std::to_string(version));
    }
    Model model;
    model.spec.kind = parse_kind(doc.at("kind").get<std::string>());
    model.spec.seed = doc.at("seed").get<std::uint64_t>();
    for (const auto& [k, v] : doc.at("hyperparameters").items()) {
      model.spec.hyperparameters[k] = v.get<double>();
    }
    model.spec.resolved();
    model.positive_prior = doc.at("positive_prior").get<double>();
    std::vector<EncodedFeature> features;
    for (const auto& e : doc.at("encoding")) {
      EncodedFeature f;
      f.column = e.at("column").get<std::string>();
      f.kind = parse_column_kind(e.at("kind").get<std::string>());
      if (f.kind == ColumnKind::kNumeric) {
        f.mean = e.at("mean").get<double>();
        f.scale = e.at("scale").get<double>();
      } else {
        f.levels = e.at("levels").get<std::vector<std::string>>();
      }
      features.push_back(std::move(f));
    }
    model.encoder = FeatureEncoder(std::move(features));
    model.params = params_from_json(model.spec.kind, doc.at("parameters"));
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("invalid model JSON: ") + e.what());
  }
}

}  // namespace featrank

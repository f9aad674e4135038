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

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "featrank/classifiers.hpp"
#include "featrank/errors.hpp"
#include "featrank/synth.hpp"
#include "support.hpp"

using namespace featrank;
using namespace featrank::testing;

namespace {

std::vector<std::size_t> range(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> r(hi - lo);
  std::iota(r.begin(), r.end(), lo);
  return r;
}

double accuracy(const std::vector<double>& scores, const std::vector<int>& y) {
  double ok = 0;
  for (std::size_t i = 0; i < y.size(); ++i) ok += (scores[i] >= 0.5) == (y[i] == 1);
  return ok / static_cast<double>(y.size());
}

Table threshold_table() {
  std::vector<double> x;
  std::vector<int> y;
  for (int i = 0; i < 50; ++i) {
    x.push_back(i - 25 + 0.5);
    y.push_back(i >= 25);
  }
  return make_table({numeric("x", x)}, y);
}

Table mixed_table(std::size_t n, std::uint64_t seed) {
  std::mt19937 gen(static_cast<unsigned>(seed));
  std::normal_distribution<double> normal;
  std::vector<double> a(n), b(n);
  std::vector<std::string> c(n);
  std::vector<int> y(n);
  const char* levels[] = {"red", "green", "blue"};
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = normal(gen);
    b[i] = normal(gen);
    c[i] = levels[gen() % 3];
    const double z = 1.5 * a[i] - b[i] + (c[i] == "red" ? 1.0 : 0.0) + 0.5 * normal(gen);
    y[i] = z > 0.3;
  }
  return make_table({numeric("a", a), numeric("b", b), categorical("c", c)}, y);
}

}  // namespace

TEST_CASE("kind ids round trip") {
  for (auto kind : kClassifierKinds) CHECK(parse_kind(kind_id(kind)) == kind);
  CHECK_THROWS_AS(parse_kind("svm"), ConfigError);
  CHECK(kind_title(ClassifierKind::kMlp) == "Deep Learning");
}

TEST_CASE("hyperparameter validation") {
  ClassifierSpec spec = make_spec(ClassifierKind::kDecisionTree);
  spec.hyperparameters["max_depth"] = -3;
  CHECK_THROWS_AS(spec.resolved(), ConfigError);
  spec.hyperparameters = {{"no_such_key", 1}};
  CHECK_THROWS_AS(spec.resolved(), ConfigError);
  CHECK(make_spec(ClassifierKind::kRandomForest).param("n_trees") == 100);
  CHECK(make_spec(ClassifierKind::kGlm).param("l2") == doctest::Approx(1e-4));
}

TEST_CASE("fit preconditions") {
  const Table one = make_table({numeric("x", std::vector<double>(12, 1.0))},
                               std::vector<int>(12, 1));
  CHECK_THROWS_AS(fit(make_spec(ClassifierKind::kGlm), one), DataError);
  const Table tiny = make_table({numeric("x", {1, 2, 3, 4})}, {1, 0, 1, 0});
  CHECK_THROWS_AS(fit(make_spec(ClassifierKind::kGlm), tiny), DataError);
}

TEST_CASE("decision tree separates a threshold with one split") {
  const Table t = threshold_table();
  const Model m = fit(make_spec(ClassifierKind::kDecisionTree), t);
  CHECK(accuracy(predict(m, t), t.labels()) == 1.0);
  CHECK(std::get<TreeParams>(m.params).tree.leaf_count() == 2);
}

TEST_CASE("glm ranks linearly separable data perfectly") {
  std::mt19937 gen(1);
  std::normal_distribution<double> normal;
  std::vector<double> a(80), b(80);
  std::vector<int> y(80);
  for (std::size_t i = 0; i < 80; ++i) {
    a[i] = normal(gen);
    b[i] = normal(gen);
    const double margin = a[i] + 2 * b[i];
    if (std::fabs(margin) < 0.2) b[i] += margin > 0 ? 0.3 : -0.3;
    y[i] = a[i] + 2 * b[i] > 0;
  }
  const Table t = make_table({numeric("a", a), numeric("b", b)}, y);
  const Model m = fit(make_spec(ClassifierKind::kGlm), t);
  CHECK(brute_auc(predict(m, t), y) == 1.0);
}

TEST_CASE("every kind: scores in [0,1], deterministic, row-order invariant") {
  const Table t = mixed_table(200, 3);
  std::vector<std::size_t> perm = range(0, t.rows());
  std::shuffle(perm.begin(), perm.end(), std::mt19937(4));
  const Table shuffled = t.select_rows(perm);
  for (auto kind : kClassifierKinds) {
    CAPTURE(kind_id(kind));
    const ClassifierSpec spec = make_spec(kind, 17);
    const auto a = predict(fit(spec, t), t);
    const auto b = predict(fit(spec, t), t);
    const auto c = predict(fit(spec, shuffled), t);
    CHECK(a == b);
    CHECK(a == c);
    for (double s : a) {
      CHECK(s >= 0.0);
      CHECK(s <= 1.0);
    }
  }
}

TEST_CASE("model json round trip keeps predictions") {
  const Table t = mixed_table(150, 5);
  for (auto kind : kClassifierKinds) {
    CAPTURE(kind_id(kind));
    const Model m = fit(make_spec(kind, 2), t);
    const std::string json = model_to_json(m);
    CHECK(json.find("\"format_version\"") != std::string::npos);
    const Model back = model_from_json(json);
    CHECK(predict(back, t) == predict(m, t));
    CHECK(model_to_json(back) == json);
  }
  CHECK_THROWS_AS(model_from_json("{\"format_version\": 99}"), DataError);
  CHECK_THROWS_AS(model_from_json("not json"), DataError);
}

TEST_CASE("one-hot width and unseen levels") {
  const Table t = mixed_table(100, 6);
  const FeatureEncoder with(t, false);
  const FeatureEncoder without(t.drop_column("c"), false);
  CHECK(with.width() == 5);
  CHECK(with.width() - without.width() == 3);

  const Model m = fit(make_spec(ClassifierKind::kGlm), t);
  const Table probe = make_table({numeric("a", {0.1}), numeric("b", {0.2}),
                                  categorical("c", {"purple"})},
                                 {1});
  const double s = predict(m, probe, 0);
  CHECK(s >= 0.0);
  CHECK(s <= 1.0);
  CHECK_THROWS_AS(predict(m, t.drop_column("a")), DataError);
}

TEST_CASE("rule list without rules scores the prior") {
  // The only feature is constant, so no rule can beat the prior.
  std::vector<int> y;
  for (int i = 0; i < 40; ++i) y.push_back(i % 4 != 0);
  const Table t = make_table({numeric("x", std::vector<double>(40, 2.0))}, y);
  const Model m = fit(make_spec(ClassifierKind::kRuleInduction), t);
  CHECK(std::get<RuleListParams>(m.params).rules.empty());
  for (double s : predict(m, t)) CHECK(s == doctest::Approx(0.75));
}

TEST_CASE("rule induction learns a threshold") {
  const Table t = threshold_table();
  const Model m = fit(make_spec(ClassifierKind::kRuleInduction), t);
  CHECK(accuracy(predict(m, t), t.labels()) == 1.0);
}

TEST_CASE("forest scores are vote fractions") {
  const Table t = mixed_table(120, 7);
  ClassifierSpec spec = make_spec(ClassifierKind::kRandomForest, 1);
  spec.hyperparameters["n_trees"] = 7;
  const Model m = fit(spec, t);
  for (double s : predict(m, t)) {
    const double votes = s * 7;
    CHECK(std::fabs(votes - std::round(votes)) < 1e-12);
  }
}

TEST_CASE("gbt: logistic link and non-increasing training loss") {
  const Table t = mixed_table(300, 8);
  const Model m = fit(make_spec(ClassifierKind::kGbt, 1), t);
  for (double s : predict(m, t)) {
    CHECK(s > 0.0);
    CHECK(s < 1.0);
  }
  const auto& loss = std::get<GbtParams>(m.params).training_loss;
  REQUIRE(loss.size() == 101);
  for (std::size_t r = 1; r < loss.size(); ++r) CHECK(loss[r] <= loss[r - 1] + 1e-12);
}

TEST_CASE("mlp gradient against central differences") {
  const Table t = mixed_table(30, 9);
  const ClassifierSpec spec = make_spec(ClassifierKind::kMlp, 5);
  CHECK(spec.param("hidden") == 16);
  CHECK(mlp_gradient_check(spec, t, 1e-5) < 1e-4);
  CHECK_THROWS_AS(mlp_gradient_check(spec, t, 1e-2), ConfigError);
  CHECK_THROWS_AS(mlp_gradient_check(spec, t, 1e-9), ConfigError);
  CHECK_THROWS_AS(mlp_gradient_check(make_spec(ClassifierKind::kGlm), t, 1e-5), ConfigError);
}

TEST_CASE("zero network on zero inputs: output-bias gradient is exact") {
  MlpParams net;
  net.inputs = 3;
  net.hidden = 4;
  net.w1.assign(12, 0.0);
  net.b1.assign(4, 0.0);
  net.w2.assign(4, 0.0);
  const Matrix x(10, 3);
  const std::vector<int> y = {1, 1, 1, 0, 1, 0, 1, 1, 0, 1};
  std::vector<double> grad;
  mlp_loss_and_gradient(net, x, y, &grad);
  // d/db2 mean BCE = mean(sigmoid(0) - y) = 0.5 - 0.7.
  CHECK(grad.back() == doctest::Approx(-0.2).epsilon(1e-15));
  const double eps = 1e-6;
  MlpParams up = net, down = net;
  up.b2 += eps;
  down.b2 -= eps;
  const double numeric_grad = (mlp_loss_and_gradient(up, x, y, nullptr) -
                               mlp_loss_and_gradient(down, x, y, nullptr)) / (2 * eps);
  CHECK(numeric_grad == doctest::Approx(grad.back()).epsilon(1e-8));
}

TEST_CASE("all kinds beat the baseline on a separable cohort") {
  const Table t = generate(separable_synth_spec(2000, 1)).table;
  const Table train = t.select_rows(range(0, 1400));
  const Table test = t.select_rows(range(1400, 2000));
  const auto y = test.labels();
  const double prevalence = static_cast<double>(test.positive_count()) / test.rows();
  const double baseline = std::max(prevalence, 1 - prevalence);
  for (auto kind : kClassifierKinds) {
    CAPTURE(kind_id(kind));
    const auto scores = predict(fit(make_spec(kind, 3), train), test);
    CHECK(brute_auc(scores, y) >= 0.85);
    CHECK(accuracy(scores, y) > baseline);
  }
}

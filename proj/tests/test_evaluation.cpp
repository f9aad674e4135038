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

#include "featrank/errors.hpp"
#include "featrank/evaluation.hpp"
#include "featrank/random.hpp"
#include "featrank/synth.hpp"
#include "support.hpp"

using namespace featrank;
using namespace featrank::testing;

namespace {

ClassifierSpec fast_spec(ClassifierKind kind, std::uint64_t seed = 0) {
  ClassifierSpec spec = make_spec(kind, seed);
  if (kind == ClassifierKind::kRandomForest) spec.hyperparameters["n_trees"] = 25;
  if (kind == ClassifierKind::kMlp) spec.hyperparameters["epochs"] = 40;
  if (kind == ClassifierKind::kGbt) spec.hyperparameters["n_rounds"] = 40;
  return spec;
}

std::vector<ClassifierSpec> fast_specs(std::uint64_t seed = 0) {
  std::vector<ClassifierSpec> specs;
  for (auto kind : kClassifierKinds) specs.push_back(fast_spec(kind, seed));
  return specs;
}

}  // namespace

TEST_CASE("confusion counts") {
  CHECK(confusion(std::vector<double>{0.9, 0.1}, std::vector<int>{1, 0}, 0.5) ==
        Confusion{1, 0, 1, 0});
  const Confusion zero = confusion(std::vector<double>{0, 0, 0}, std::vector<int>{1, 0, 1}, 0.5);
  CHECK(zero.tp == 0);
  CHECK(zero.fp == 0);
  const Confusion all = confusion(std::vector<double>{0, 0.2, 0}, std::vector<int>{1, 0, 1}, 0.0);
  CHECK(all.tn == 0);
  CHECK(all.fn == 0);
  CHECK_THROWS_AS(confusion(std::vector<double>{0.1}, std::vector<int>{1, 0}, 0.5), ConfigError);
  CHECK_THROWS_AS(confusion(std::vector<double>{0.1}, std::vector<int>{1}, 1.5), ConfigError);
}

TEST_CASE("auc against pair counting") {
  CHECK(auc(std::vector<double>{0.9, 0.8, 0.1}, std::vector<int>{1, 1, 0}) == 1.0);
  CHECK(auc(std::vector<double>(6, 0.3), std::vector<int>{1, 0, 1, 0, 0, 1}) == 0.5);
  CHECK_THROWS_AS(auc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1}), DataError);
  std::mt19937 gen(31);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + gen() % 199;
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(gen() % 12) / 11.0;  // many ties
      y[i] = static_cast<int>(gen() % 2);
    }
    y[0] = 1;
    y[1] = 0;
    CHECK(std::fabs(auc(s, y) - brute_auc(s, y)) < 1e-12);
  }
}

TEST_CASE("metrics and summaries") {
  const Metrics m = compute_metrics(std::vector<double>{0.9, 0.7, 0.2, 0.6},
                                    std::vector<int>{1, 0, 0, 1});
  CHECK(m.accuracy == 0.75);
  CHECK(m.precision == doctest::Approx(2.0 / 3.0));
  CHECK(m.recall == 1.0);
  CHECK(m.auc == 0.75);
  const Metrics none = compute_metrics(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 0});
  CHECK(none.precision == 0.0);

  const std::vector<Metrics> folds = {{0.7, 0.5, 0.5, 0.6}, {0.8, 0.5, 0.5, 0.7},
                                      {0.9, 0.5, 0.5, 0.8}};
  const MetricSummary s = summarize(folds);
  CHECK(s.mean.accuracy == doctest::Approx(0.8));
  CHECK(s.std.accuracy == doctest::Approx(0.1));  // sample std
  CHECK(s.std.precision == 0.0);
}

TEST_CASE("average column is the mean of the classifier columns") {
  std::vector<MetricSummary> cols(6);
  for (std::size_t i = 0; i < 6; ++i) {
    cols[i].mean = {0.1 * i, 0.2, 0.3, 0.4 + 0.01 * i};
    cols[i].std = {0.01 * i, 0, 0, 0};
  }
  const MetricSummary avg = average_column(cols);
  CHECK(avg.mean.accuracy == doctest::Approx(0.25));
  CHECK(avg.mean.auc == doctest::Approx(0.425));
  CHECK(avg.std.accuracy == doctest::Approx(0.025));
}

TEST_CASE("cross_validate fold bookkeeping and leakage audit") {
  const Table t = generate(default_synth_spec(1000, 2)).table;
  const FoldPlan plan = stratified_folds(t, 10, 5);
  for (int f = 0; f < 10; ++f) CHECK(plan.test_rows(f).size() == 100);
  const CvResult r = cross_validate(t, fast_spec(ClassifierKind::kDecisionTree), plan,
                                    SmoteConfig{5, 1.0, 1}, t.feature_names());
  CHECK(r.folds.size() == 10);
  CHECK(r.audit.synthetic_rows > 0);
  CHECK(r.audit.sources_checked == 2 * r.audit.synthetic_rows);
  CHECK(r.audit.violations == 0);
  for (const auto& m : r.folds) {
    for (double v : {m.accuracy, m.precision, m.recall, m.auc}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
  CHECK_THROWS_AS(cross_validate(t, fast_spec(ClassifierKind::kGlm), plan, std::nullopt, {}),
                  ConfigError);
}

TEST_CASE("a constant feature does not change tree or rule results") {
  const Table base = generate(default_synth_spec(400, 3)).table;
  std::vector<ColumnSchema> schema = base.schema();
  std::vector<Column> cols;
  for (std::size_t c = 0; c < base.cols(); ++c) cols.push_back(base.column(c));
  schema.insert(schema.begin(), {"flat", ColumnKind::kNumeric, ColumnRole::kFeature, ""});
  cols.insert(cols.begin(), Column{std::vector<double>(base.rows(), 1.0), {}});
  const Table t(schema, cols);
  const FoldPlan plan = stratified_folds(t, 5, 1);
  auto names = t.feature_names();
  const auto without = std::vector<std::string>(names.begin() + 1, names.end());
  for (auto kind : {ClassifierKind::kDecisionTree, ClassifierKind::kRuleInduction}) {
    const auto a = cross_validate(t, fast_spec(kind), plan, std::nullopt, names);
    const auto b = cross_validate(t, fast_spec(kind), plan, std::nullopt, without);
    for (std::size_t f = 0; f < a.folds.size(); ++f) {
      CHECK(a.folds[f].accuracy == b.folds[f].accuracy);
      CHECK(a.folds[f].auc == b.folds[f].auc);
    }
  }
}

TEST_CASE("decision-tree CV AUC agrees with a 70/30 hold-out estimate") {
  const Table t = generate(planted_ablation_spec(1.5, 5000, 6)).table;
  const ClassifierSpec spec = make_spec(ClassifierKind::kDecisionTree, 1);
  const CvResult cv = cross_validate(t, spec, stratified_folds(t, 10, 2), std::nullopt,
                                     t.feature_names());
  // Independent hold-out: shuffle with the standard library, fit once.
  std::vector<std::size_t> perm(t.rows());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937(99));
  const std::size_t cut = t.rows() * 7 / 10;
  const Table train = t.select_rows(std::vector<std::size_t>(perm.begin(), perm.begin() + cut));
  const Table test = t.select_rows(std::vector<std::size_t>(perm.begin() + cut, perm.end()));
  const double holdout = brute_auc(predict(fit(spec, train), test), test.labels());
  CHECK(std::fabs(cv.summary.mean.auc - holdout) <= 0.03);
}

TEST_CASE("evaluate is identical at any thread count") {
  const Table t = generate(default_synth_spec(300, 1)).table;
  const FoldPlan plan = stratified_folds(t, 3, 1);
  const auto a = evaluate(t, fast_specs(), plan, SmoteConfig{5, 1.0, 2}, t.feature_names(), 0, 1);
  const auto b = evaluate(t, fast_specs(), plan, SmoteConfig{5, 1.0, 2}, t.feature_names(), 0, 4);
  REQUIRE(a.classifiers.size() == 6);
  for (std::size_t c = 0; c < 6; ++c) {
    CHECK(a.classifiers[c].kind == kClassifierKinds[c]);
    for (std::size_t f = 0; f < 3; ++f) {
      CHECK(a.classifiers[c].folds[f].accuracy == b.classifiers[c].folds[f].accuracy);
      CHECK(a.classifiers[c].folds[f].auc == b.classifiers[c].folds[f].auc);
    }
  }
}

TEST_CASE("ablation arms and deltas") {
  const Table t = generate(default_synth_spec(400, 2)).table;
  const FoldPlan plan = stratified_folds(t, 4, 3);
  const std::vector<ClassifierSpec> specs = {fast_spec(ClassifierKind::kGlm),
                                             fast_spec(ClassifierKind::kDecisionTree)};
  const AblationReport r = ablation(t, "ethnicity", specs, plan, std::nullopt);
  CHECK(r.delta.accuracy == doctest::Approx(r.with.average.mean.accuracy -
                                            r.without.average.mean.accuracy));
  CHECK(r.delta.auc == doctest::Approx(r.with.average.mean.auc - r.without.average.mean.auc));
  CHECK(metric_delta(r.with, r.without).recall == r.delta.recall);
  CHECK(r.with.config.features.size() == r.without.config.features.size() + 1);
  CHECK_THROWS_AS(ablation(t, "nope", specs, plan, std::nullopt), ConfigError);
}

TEST_CASE("ablating an exact duplicate feature barely moves tree kinds") {
  const Table base = generate(default_synth_spec(2000, 12)).table;
  std::vector<ColumnSchema> schema = base.schema();
  std::vector<Column> cols;
  for (std::size_t c = 0; c < base.cols(); ++c) cols.push_back(base.column(c));
  const std::size_t age = base.index_of("age");
  schema.insert(schema.begin(), {"age_copy", ColumnKind::kNumeric, ColumnRole::kFeature, ""});
  cols.insert(cols.begin(), base.column(age));
  const Table t(schema, cols);
  const FoldPlan plan = stratified_folds(t, 5, 8);
  for (auto kind : {ClassifierKind::kDecisionTree, ClassifierKind::kRandomForest,
                    ClassifierKind::kGbt}) {
    CAPTURE(kind_id(kind));
    const AblationReport r = ablation(t, "age_copy", {make_spec(kind, 1)}, plan, std::nullopt);
    CHECK(std::fabs(r.delta.auc) <= 0.01);
  }
}

TEST_CASE("per-group rankings") {
  SUBCASE("size floor") {
    const Table big = generate(default_synth_spec(1000, 1)).table;
    const GroupRankings r = per_group_rankings(big, 5, WeighingOptions{});
    CHECK(r.top.count("Balouch") == 1);
    for (const auto& [g, top] : r.top) {
      CHECK(top.size() == 5);
      CHECK(std::find(top.begin(), top.end(), "ethnicity") == top.end());
    }
    const Table small = generate(default_synth_spec(300, 1)).table;
    const GroupRankings s = per_group_rankings(small, 5, WeighingOptions{});
    CHECK(s.top.count("Balouch") == 0);
    bool skipped = false;
    for (const auto& k : s.skipped) skipped |= k.group == "Balouch";
    CHECK(skipped);
  }
  SUBCASE("planted single-feature group") {
    SynthSpec spec = default_synth_spec(4000, 3);
    for (auto& [g, o] : spec.group_offsets) o = 0.0;
    spec.group_coefficients["Fars"] = {{"WC", 0},  {"age", 0},    {"BMI", 0},  {"DM", 0},
                                       {"gender", 0}, {"HBP", 0}, {"LDL", 2.5}, {"smoking", 0}};
    const GroupRankings r = per_group_rankings(generate(spec).table, 5, WeighingOptions{});
    CHECK(r.top.at("Fars").front() == "LDL");
  }
  const Table plain = make_table({numeric("x", {1, 2, 3})}, {1, 0, 1});
  CHECK_THROWS_AS(per_group_rankings(plain, 5, WeighingOptions{}), DataError);
}

TEST_CASE("select_best ordering") {
  std::vector<CvResult> r(3);
  r[0].kind = ClassifierKind::kGlm;
  r[0].summary.mean = {0.8, 0, 0, 0.7};
  r[1].kind = ClassifierKind::kGbt;
  r[1].summary.mean = {0.8, 0, 0, 0.9};
  r[2].kind = ClassifierKind::kDecisionTree;
  r[2].summary.mean = {0.8, 0, 0, 0.9};
  // Accuracy tie, AUC tie between gbt and decision_tree; "decision_tree" < "gbt".
  CHECK(select_best(r) == 2);
  r[0].summary.mean.accuracy = 0.81;
  CHECK(select_best(r) == 0);
}

TEST_CASE("best classifier per group: linear versus XOR mechanisms") {
  std::mt19937 gen(4);
  std::normal_distribution<double> normal;
  std::vector<double> a, b;
  std::vector<std::string> g;
  std::vector<int> y;
  for (int i = 0; i < 800; ++i) {
    const bool linear = i < 400;
    const double x1 = normal(gen), x2 = normal(gen);
    a.push_back(x1);
    b.push_back(x2);
    g.push_back(linear ? "linear" : "xor");
    if (linear) {
      y.push_back(1.2 * x1 - 0.8 * x2 > 0);
    } else {
      y.push_back((x1 > 0) != (x2 > 0));
    }
  }
  const Table t = make_table(
      {numeric("a", a), numeric("b", b), categorical("g", g, ColumnRole::kGroup)}, y);
  const GroupWinners w = best_classifier_per_group(t, all_specs(1), 5, 7, std::nullopt);
  REQUIRE(w.winners.size() == 2);
  CHECK(w.winners.at("linear").kind == ClassifierKind::kGlm);
  const ClassifierKind xor_kind = w.winners.at("xor").kind;
  CHECK((xor_kind == ClassifierKind::kDecisionTree || xor_kind == ClassifierKind::kGbt ||
         xor_kind == ClassifierKind::kRandomForest || xor_kind == ClassifierKind::kRuleInduction));
}

TEST_CASE("single-group table picks the global winner") {
  const Table base = generate(null_synth_spec(300, 2)).table;
  std::vector<ColumnSchema> schema = base.schema();
  std::vector<Column> cols;
  for (std::size_t c = 0; c < base.cols(); ++c) {
    if (base.column_schema(c).role == ColumnRole::kGroup) {
      schema[c].role = ColumnRole::kFeature;
    }
    cols.push_back(base.column(c));
  }
  schema.insert(schema.begin(), {"site", ColumnKind::kCategorical, ColumnRole::kGroup, ""});
  cols.insert(cols.begin(), Column{{}, std::vector<std::string>(base.rows(), "one")});
  const Table t(schema, cols);
  const auto specs = fast_specs(3);
  const GroupWinners w = best_classifier_per_group(t, specs, 5, 11, std::nullopt);
  const FoldPlan plan = stratified_folds(filter_by_group(t, "one"), 5, derive_seed(11, "group:one"));
  const EvalReport global = evaluate(t, specs, plan, std::nullopt, t.feature_names());
  CHECK(w.winners.at("one").kind == global.classifiers[select_best(global.classifiers)].kind);
}

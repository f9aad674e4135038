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

#include <cmath>

#include "featrank/errors.hpp"
#include "featrank/report.hpp"
#include "featrank/synth.hpp"

using namespace featrank;

namespace {

std::string expected_weight_header() {
  std::string h = "attribute";
  for (const char* id : {"information_gain", "gini_index", "rule", "uncertainty", "relief",
                         "chi_squared"}) {
    h += std::string(",") + id + "_rank," + id + "_weight";
  }
  return h + ",mean_rank,overall_rank";
}

EvalReport fake_report(const std::vector<double>& acc, double acc_std) {
  EvalReport r;
  std::vector<MetricSummary> cols;
  for (std::size_t i = 0; i < acc.size(); ++i) {
    CvResult cv;
    cv.kind = kClassifierKinds[i];
    cv.summary.mean = {acc[i], 0.7 + 0.01 * i, 0.8, 0.7 + 0.013 * i};
    cv.summary.std = {acc_std, 0.01, 0.02, 0.03};
    cols.push_back(cv.summary);
    r.classifiers.push_back(cv);
  }
  r.average = average_column(cols);
  return r;
}

}  // namespace

TEST_CASE("format_fixed") {
  CHECK(format_fixed(0.057331, 5) == "0.05733");
  CHECK(format_fixed(-0.000001, 2) == "0.00");
  CHECK(format_fixed(-1.5, 1) == "-1.5");
  CHECK(format_fixed(3.14159, 2) == "3.14");
}

TEST_CASE("weight report shape and round trip") {
  const WeightMatrix m = weigh_all(generate(default_synth_spec(1000, 1)).table, 10, 10, 0);
  const ReportTable t = weight_report(m);
  const std::string csv = t.to_csv();
  CHECK(csv.substr(0, csv.find('\n')) == expected_weight_header());
  CHECK(t.rows.size() == 9);
  for (std::size_t r = 0; r < t.rows.size(); ++r) CHECK(t.rows[r].back() == std::to_string(r + 1));

  const WeightMatrix back = parse_weight_report(csv);
  CHECK(weight_report(back).to_csv() == csv);
  for (std::size_t i = 0; i < back.attributes.size(); ++i) {
    std::size_t j = 0;
    while (m.attributes[j] != back.attributes[i]) ++j;
    CHECK(back.rank[i] == m.rank[j]);
    CHECK(back.overall_rank[i] == m.overall_rank[j]);
    for (std::size_t a = 0; a < 6; ++a) CHECK(std::fabs(back.weight[i][a] - m.weight[j][a]) <= 5e-6);
  }
  CHECK_THROWS_AS(parse_weight_report("x,y\n"), DataError);
}

TEST_CASE("planted dominant feature is the first report row") {
  SynthSpec spec = default_synth_spec(3000, 5);
  for (auto& [name, beta] : spec.coefficients) beta = 0.05;
  for (auto& [g, o] : spec.group_offsets) o = 0.0;
  spec.coefficients["smoking"] = 2.5;
  const ReportTable t = weight_report(weigh_all(generate(spec).table, 10, 10, 0));
  CHECK(t.rows.front().front() == "smoking");
  CHECK(t.rows.front().back() == "1");
}

TEST_CASE("eval report cells and the Average column") {
  const EvalReport r = fake_report({0.7292, 0.7125, 0.7335, 0.7257, 0.7154, 0.7156}, 0.0225);
  const std::string csv = eval_report(r).to_csv();
  const ParsedEvalReport p = parse_eval_report(csv);
  REQUIRE(p.columns.size() == 7);
  CHECK(p.columns.front() == "Rule Induction");
  CHECK(p.columns.back() == "Average");
  CHECK(p.metrics == std::vector<std::string>{"accuracy", "precision", "recall", "auc"});
  CHECK(p.cells[0][0].mean == 72.92);
  CHECK(p.cells[0][0].std == 2.25);
  for (std::size_t m = 0; m < 4; ++m) {
    double sum = 0;
    for (std::size_t c = 0; c < 6; ++c) sum += p.cells[m][c].mean;
    CHECK(std::fabs(sum / 6 - p.cells[m][6].mean) <= 0.01);
  }
  CHECK(csv.find("72.92 \xC2\xB1 2.25") != std::string::npos);
  CHECK_THROWS_AS(parse_eval_report("metric,a\naccuracy,12\n"), DataError);
}

TEST_CASE("delta report") {
  AblationReport a;
  a.feature = "ethnicity";
  a.without = fake_report({0.70, 0.70, 0.70, 0.70, 0.70, 0.70}, 0.01);
  a.with = fake_report({0.75, 0.75, 0.75, 0.75, 0.75, 0.75}, 0.01);
  a.delta = metric_delta(a.with, a.without);
  const ReportTable t = delta_report(a);
  CHECK(t.header == std::vector<std::string>{"metric", "without_ethnicity", "with_ethnicity", "delta"});
  CHECK(t.rows[0] == std::vector<std::string>{"accuracy", "70.00", "75.00", "5.00"});
  CHECK(t.rows[3][3] == "0.00");
}

TEST_CASE("group reports list skipped strata") {
  GroupRankings g;
  g.top["A"] = {"x", "y"};
  g.rows["A"] = 40;
  g.skipped.push_back({"B", 7, "fewer than 20 rows"});
  const ReportTable r = group_rankings_report(g, 3);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0] == std::vector<std::string>{"A", "40", "ranked", "", "x", "y", ""});
  CHECK(r.rows[1][2] == "skipped");
  CHECK(r.rows[1].size() == r.header.size());

  GroupWinners w;
  w.winners["A"] = GroupWinner{ClassifierKind::kGlm, {0.8, 0.75, 0.9, 0.86}, 40};
  w.skipped.push_back({"B", 7, "fewer than 20 rows"});
  const ReportTable b = group_best_report(w);
  CHECK(b.rows[0][4] == "glm");
  CHECK(b.rows[0][5] == "80.00");
  CHECK(b.rows[0][8] == "0.86");
  CHECK(b.rows[1][2] == "skipped");
}

TEST_CASE("markdown render") {
  ReportTable t{{"a", "b"}, {{"1", "x|y"}}};
  CHECK(t.to_markdown() == "| a | b |\n| --- | ---: |\n| 1 | x\\|y |\n");
  CHECK(t.to_csv() == "a,b\n1,x|y\n");
}

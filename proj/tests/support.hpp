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

// Table builders and reference implementations shared by the tests. The
// reference code deliberately avoids the library's own helpers: it works on
// plain strings and doubles and favours obviousness over speed.

#ifndef FEATRANK_TESTS_SUPPORT_HPP_
#define FEATRANK_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "featrank/table.hpp"

namespace featrank::testing {

struct Col {
  std::string name;
  std::vector<double> num;
  std::vector<std::string> cat;
  ColumnRole role = ColumnRole::kFeature;
};

inline Col numeric(std::string name, std::vector<double> values) {
  return Col{std::move(name), std::move(values), {}, ColumnRole::kFeature};
}
inline Col categorical(std::string name, std::vector<std::string> values,
                       ColumnRole role = ColumnRole::kFeature) {
  return Col{std::move(name), {}, std::move(values), role};
}

// Features in the given order followed by a label column "y" whose values
// are "yes" (1) and "no" (0).
inline Table make_table(const std::vector<Col>& features, const std::vector<int>& labels) {
  std::vector<ColumnSchema> schema;
  std::vector<Column> columns;
  for (const auto& f : features) {
    const bool is_num = f.cat.empty();
    schema.push_back({f.name, is_num ? ColumnKind::kNumeric : ColumnKind::kCategorical,
                      f.role, ""});
    Column c;
    if (is_num) c.numeric = f.num; else c.categorical = f.cat;
    columns.push_back(std::move(c));
  }
  schema.push_back({"y", ColumnKind::kCategorical, ColumnRole::kLabel, "yes"});
  Column y;
  for (int v : labels) y.categorical.push_back(v ? "yes" : "no");
  columns.push_back(std::move(y));
  return Table(std::move(schema), std::move(columns));
}

inline std::vector<std::string> to_strings(const std::vector<int>& v) {
  std::vector<std::string> out;
  for (int x : v) out.push_back(std::to_string(x));
  return out;
}

// ---- Contingency-based weights, straight from the definitions. ----

struct BruteWeights {
  double ig = 0, gini = 0, chi2 = 0, su = 0, oner = 0;
};

inline double brute_entropy(const std::vector<double>& counts) {
  double n = 0;
  for (double c : counts) n += c;
  double h = 0;
  for (double c : counts) {
    if (c > 0) h -= (c / n) * (std::log(c / n) / std::log(2.0));
  }
  return h;
}

inline BruteWeights brute_weights(const std::vector<std::string>& attr,
                                  const std::vector<int>& labels) {
  std::map<std::string, std::pair<double, double>> cells;  // value -> (neg, pos)
  double pos = 0, neg = 0;
  for (std::size_t i = 0; i < attr.size(); ++i) {
    auto& c = cells[attr[i]];
    if (labels[i]) { c.second += 1; pos += 1; } else { c.first += 1; neg += 1; }
  }
  const double n = pos + neg;
  BruteWeights w;
  const double hy = brute_entropy({neg, pos});
  double cond_h = 0, cond_g = 0;
  std::vector<double> marginal;
  double correct = 0;
  for (const auto& [v, c] : cells) {
    const double nv = c.first + c.second;
    marginal.push_back(nv);
    cond_h += nv / n * brute_entropy({c.first, c.second});
    const double pn = c.first / nv, pp = c.second / nv;
    cond_g += nv / n * (1 - pn * pn - pp * pp);
    const double e_neg = nv * neg / n, e_pos = nv * pos / n;
    if (e_neg > 0) w.chi2 += (c.first - e_neg) * (c.first - e_neg) / e_neg;
    if (e_pos > 0) w.chi2 += (c.second - e_pos) * (c.second - e_pos) / e_pos;
    // Majority per value; a tie falls back to the global majority, and a
    // global tie to the positive class.
    bool predict_pos;
    if (c.second != c.first) predict_pos = c.second > c.first;
    else predict_pos = pos >= neg;
    correct += predict_pos ? c.second : c.first;
  }
  w.ig = hy - cond_h;
  const double gn = neg / n, gp = pos / n;
  w.gini = (1 - gn * gn - gp * gp) - cond_g;
  const double hx = brute_entropy(marginal);
  w.su = hx == 0 ? 0 : 2 * w.ig / (hx + hy);
  w.oner = correct / n;
  return w;
}

// ---- ReliefF by exhaustive search. ----

// Columns are numeric (kind true) or categorical; distances use range
// normalisation over all rows. Nearest lists are ordered by (distance, row).
inline std::vector<double> brute_relief(const std::vector<std::vector<double>>& num_cols,
                                        const std::vector<std::vector<std::string>>& cat_cols,
                                        const std::vector<int>& labels, int k) {
  const std::size_t n = labels.size();
  const std::size_t pn = num_cols.size(), pc = cat_cols.size();
  std::vector<double> range(pn);
  for (std::size_t a = 0; a < pn; ++a) {
    const auto [lo, hi] = std::minmax_element(num_cols[a].begin(), num_cols[a].end());
    range[a] = *hi - *lo;
  }
  auto diff = [&](std::size_t a, std::size_t i, std::size_t j) {
    if (a < pn) return range[a] > 0 ? std::fabs(num_cols[a][i] - num_cols[a][j]) / range[a] : 0.0;
    return cat_cols[a - pn][i] == cat_cols[a - pn][j] ? 0.0 : 1.0;
  };
  std::vector<double> w(pn + pc, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<double, std::size_t>> hits, misses;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      double d = 0;
      for (std::size_t a = 0; a < pn + pc; ++a) d += diff(a, i, j);
      (labels[j] == labels[i] ? hits : misses).push_back({d, j});
    }
    std::sort(hits.begin(), hits.end());
    std::sort(misses.begin(), misses.end());
    for (int t = 0; t < k; ++t) {
      for (std::size_t a = 0; a < pn + pc; ++a) {
        w[a] += (diff(a, i, misses[t].second) - diff(a, i, hits[t].second)) /
                (static_cast<double>(n) * k);
      }
    }
  }
  return w;
}

// ---- AUC by counting every positive/negative pair. ----

inline double brute_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  double good = 0, pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!labels[i]) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j]) continue;
      pairs += 1;
      if (scores[i] > scores[j]) good += 1;
      else if (scores[i] == scores[j]) good += 0.5;
    }
  }
  return good / pairs;
}

}  // namespace featrank::testing

#endif  // FEATRANK_TESTS_SUPPORT_HPP_

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

// Sequential covering over discretized inputs.
//
// Candidate conditions are "x <= edge" / "x > edge" for the equal-frequency
// cut points of each numeric input and "indicator set" / "indicator clear"
// for one-hot inputs. A rule for a target class starts empty and greedily
// adds the condition with the best Laplace-corrected precision
// (hits + 1) / (covered + 2) until nothing improves it or coverage would drop
// below the minimum. Each round grows one rule per class and keeps the more
// precise one, provided its raw precision beats that class's training prior.
// A kept rule scores rows with the same Laplace estimate of its positive
// fraction. Covered rows are removed and the process repeats. Rows reaching
// the end of the list get the positive fraction of the training rows no
// rule covered (the training prior when the list is empty).

#include <algorithm>
#include <numeric>

#include "featrank/weighting.hpp"
#include "learners.hpp"

namespace featrank {

bool Rule::covers(const double* x) const {
  for (const auto& c : conditions) {
    const double v = x[c.feature];
    if (c.less_equal ? !(v <= c.threshold) : !(v > c.threshold)) return false;
  }
  return true;
}

namespace internal {
namespace {

bool satisfies(const RuleCondition& c, const double* x) {
  const double v = x[c.feature];
  return c.less_equal ? v <= c.threshold : v > c.threshold;
}

double laplace(std::size_t hits, std::size_t covered) {
  return (static_cast<double>(hits) + 1.0) / (static_cast<double>(covered) + 2.0);
}

struct Grown {
  Rule rule;
  std::size_t hits = 0;
  std::vector<std::size_t> covered;
  double quality = 0.0;
};

Grown grow_rule(const Matrix& x, std::span<const int> labels,
                const std::vector<std::size_t>& rows, int target,
                const std::vector<RuleCondition>& candidates,
                std::size_t min_coverage) {
  Grown g;
  g.covered = rows;
  for (std::size_t r : rows) g.hits += labels[r] == target;
  g.quality = laplace(g.hits, g.covered.size());

  std::vector<std::size_t> next;
  for (;;) {
    int best = -1;
    double best_quality = g.quality + 1e-12;
    std::size_t best_hits = 0, best_cover = 0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      std::size_t cover = 0, hits = 0;
      for (std::size_t r : g.covered) {
        if (satisfies(candidates[c], x.row(r))) {
          ++cover;
          hits += labels[r] == target;
        }
      }
      if (cover < min_coverage || cover == g.covered.size()) continue;
      const double q = laplace(hits, cover);
      if (q > best_quality || (q == best_quality && best >= 0 && cover > best_cover)) {
        best = static_cast<int>(c);
        best_quality = q;
        best_hits = hits;
        best_cover = cover;
      }
    }
    if (best < 0) break;
    const auto& cond = candidates[static_cast<std::size_t>(best)];
    next.clear();
    for (std::size_t r : g.covered) {
      if (satisfies(cond, x.row(r))) next.push_back(r);
    }
    g.covered.swap(next);
    g.hits = best_hits;
    g.quality = best_quality;
    g.rule.conditions.push_back(cond);
  }
  return g;
}

}  // namespace

RuleListParams fit_rule_list(const Matrix& inputs, std::span<const int> labels,
                             const FeatureEncoder& encoder,
                             const Params& params) {
  const int n_bins = static_cast<int>(params.at("n_bins"));
  const auto min_coverage = static_cast<std::size_t>(params.at("min_coverage"));
  const auto max_rules = static_cast<std::size_t>(params.at("max_rules"));
  const std::size_t n = inputs.rows;

  std::vector<RuleCondition> candidates;
  std::size_t col = 0;
  for (const auto& f : encoder.features()) {
    if (f.kind == ColumnKind::kNumeric) {
      std::vector<double> values(n);
      for (std::size_t i = 0; i < n; ++i) values[i] = inputs.at(i, col);
      for (double e : equal_frequency_bins(values, f.column, n_bins).edges) {
        candidates.push_back({static_cast<int>(col), true, e});
        candidates.push_back({static_cast<int>(col), false, e});
      }
      ++col;
    } else {
      for (std::size_t l = 0; l < f.levels.size(); ++l, ++col) {
        candidates.push_back({static_cast<int>(col), false, 0.5});
        candidates.push_back({static_cast<int>(col), true, 0.5});
      }
    }
  }

  RuleListParams model;
  const double positives = std::accumulate(labels.begin(), labels.end(), 0.0);
  const double prior_pos = positives / static_cast<double>(n);
  model.default_score = prior_pos;

  std::vector<std::size_t> remaining(n);
  std::iota(remaining.begin(), remaining.end(), std::size_t{0});
  while (model.rules.size() < max_rules && remaining.size() >= min_coverage) {
    Grown best;
    bool found = false;
    for (int target : {1, 0}) {
      Grown g = grow_rule(inputs, labels, remaining, target, candidates,
                          min_coverage);
      if (g.rule.conditions.empty()) continue;
      const double precision =
          static_cast<double>(g.hits) / static_cast<double>(g.covered.size());
      const double prior = target == 1 ? prior_pos : 1.0 - prior_pos;
      if (precision <= prior) continue;
      if (!found || g.quality > best.quality) {
        best = std::move(g);
        found = true;
      }
    }
    if (!found) break;
    std::size_t pos = 0;
    for (std::size_t r : best.covered) pos += static_cast<std::size_t>(labels[r]);
    best.rule.coverage = best.covered.size();
    best.rule.score = laplace(pos, best.covered.size());

    std::vector<std::size_t> rest;
    rest.reserve(remaining.size() - best.covered.size());
    std::set_difference(remaining.begin(), remaining.end(), best.covered.begin(),
                        best.covered.end(), std::back_inserter(rest));
    remaining.swap(rest);
    model.rules.push_back(std::move(best.rule));
  }
  if (!remaining.empty() && !model.rules.empty()) {
    double rest_pos = 0.0;
    for (std::size_t r : remaining) rest_pos += labels[r];
    model.default_score = rest_pos / static_cast<double>(remaining.size());
  }
  return model;
}

double predict_rule_list(const RuleListParams& model, const double* x) {
  for (const auto& rule : model.rules) {
    if (rule.covers(x)) return rule.score;
  }
  return model.default_score;
}

}  // namespace internal
}  // namespace featrank

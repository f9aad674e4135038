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

#include "featrank/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "featrank/errors.hpp"
#include "featrank/parallel.hpp"
#include "featrank/random.hpp"

namespace featrank {

Confusion confusion(std::span<const double> scores, std::span<const int> labels,
                    double threshold) {
  if (scores.size() != labels.size()) {
    throw ConfigError("scores and labels differ in length");
  }
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ConfigError("threshold must lie in [0, 1]");
  }
  Confusion c;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    if (labels[i]) {
      ++(predicted ? c.tp : c.fn);
    } else {
      ++(predicted ? c.fp : c.tn);
    }
  }
  return c;
}

double auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw ConfigError("scores and labels differ in length");
  }
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Sum of positive midranks (1-based), doubled to stay integral.
  double rank_sum_x2 = 0.0;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank_x2 = static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) {
      if (labels[order[t]]) {
        rank_sum_x2 += midrank_x2;
        ++pos;
      }
    }
    i = j;
  }
  const std::size_t neg = n - pos;
  if (pos == 0 || neg == 0) throw DataError("auc needs both classes");
  const double p = static_cast<double>(pos);
  const double u = 0.5 * rank_sum_x2 - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(neg));
}

Metrics compute_metrics(std::span<const double> scores,
                        std::span<const int> labels, double threshold) {
  const Confusion c = confusion(scores, labels, threshold);
  const double n = static_cast<double>(scores.size());
  Metrics m;
  m.accuracy = static_cast<double>(c.tp + c.tn) / n;
  m.precision = c.tp + c.fp > 0 ? static_cast<double>(c.tp) /
                                      static_cast<double>(c.tp + c.fp)
                                : 0.0;
  m.recall = c.tp + c.fn > 0 ? static_cast<double>(c.tp) /
                                   static_cast<double>(c.tp + c.fn)
                             : 0.0;
  m.auc = auc(scores, labels);
  return m;
}

namespace {

constexpr double Metrics::*kFields[] = {&Metrics::accuracy, &Metrics::precision,
                                        &Metrics::recall, &Metrics::auc};

}  // namespace

MetricSummary summarize(std::span<const Metrics> folds) {
  MetricSummary s;
  if (folds.empty()) return s;
  const double n = static_cast<double>(folds.size());
  for (auto field : kFields) {
    double sum = 0.0;
    for (const auto& m : folds) sum += m.*field;
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& m : folds) ss += (m.*field - mean) * (m.*field - mean);
    s.mean.*field = mean;
    s.std.*field = folds.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  }
  return s;
}

MetricSummary average_column(std::span<const MetricSummary> classifiers) {
  MetricSummary avg;
  if (classifiers.empty()) return avg;
  const double n = static_cast<double>(classifiers.size());
  for (auto field : kFields) {
    double mean = 0.0, sd = 0.0;
    for (const auto& c : classifiers) {
      mean += c.mean.*field;
      sd += c.std.*field;
    }
    avg.mean.*field = mean / n;
    avg.std.*field = sd / n;
  }
  return avg;
}

Metrics metric_delta(const EvalReport& with, const EvalReport& without) {
  Metrics d;
  for (auto field : kFields) {
    d.*field = with.average.mean.*field - without.average.mean.*field;
  }
  return d;
}

namespace {

struct FoldOutcome {
  Metrics metrics;
  LeakageAudit audit;
};

Table masked_table(const Table& table, const std::vector<std::string>& mask) {
  if (mask.empty()) throw ConfigError("feature mask is empty");
  return table.select_features(mask);
}

FoldOutcome run_fold(const Table& masked, const ClassifierSpec& spec,
                     const FoldPlan& plan, int fold,
                     const std::optional<SmoteConfig>& smote_config) {
  Split parts = split(masked, plan, fold);
  if (parts.test.rows() < 2) {
    throw DataError("fold " + std::to_string(fold) + " has fewer than 2 rows");
  }
  FoldOutcome out;
  Table train = std::move(parts.train);
  if (smote_config) {
    SmoteConfig cfg = *smote_config;
    cfg.seed = derive_seed(smote_config->seed, "fold",
                           static_cast<std::uint64_t>(fold));
    SmoteResult balanced = smote_with_origins(train, cfg);
    out.audit.synthetic_rows = balanced.origins.size();
    for (const auto& o : balanced.origins) {
      for (std::size_t local : {o.anchor, o.neighbor}) {
        ++out.audit.sources_checked;
        const std::size_t source = parts.train_rows.at(local);
        if (plan.assignment.at(source) == fold) ++out.audit.violations;
      }
    }
    train = std::move(balanced.table);
  }
  ClassifierSpec fold_spec = spec;
  fold_spec.seed = derive_seed(spec.seed, "fold", static_cast<std::uint64_t>(fold));
  const Model model = fit(fold_spec, train);
  const auto scores = predict(model, parts.test);
  const auto labels = parts.test.labels();
  out.metrics = compute_metrics(scores, labels, 0.5);
  return out;
}

CvResult collect(ClassifierKind kind, std::span<const FoldOutcome> outcomes) {
  CvResult r;
  r.kind = kind;
  for (const auto& o : outcomes) {
    r.folds.push_back(o.metrics);
    r.audit.synthetic_rows += o.audit.synthetic_rows;
    r.audit.sources_checked += o.audit.sources_checked;
    r.audit.violations += o.audit.violations;
  }
  r.summary = summarize(r.folds);
  return r;
}

}  // namespace

CvResult cross_validate(const Table& table, const ClassifierSpec& spec,
                        const FoldPlan& plan,
                        const std::optional<SmoteConfig>& smote_config,
                        const std::vector<std::string>& feature_mask) {
  const Table masked = masked_table(table, feature_mask);
  std::vector<FoldOutcome> outcomes;
  for (int f = 0; f < plan.k; ++f) {
    outcomes.push_back(run_fold(masked, spec, plan, f, smote_config));
  }
  return collect(spec.kind, outcomes);
}

EvalReport evaluate(const Table& table, const std::vector<ClassifierSpec>& specs,
                    const FoldPlan& plan,
                    const std::optional<SmoteConfig>& smote_config,
                    const std::vector<std::string>& feature_mask,
                    std::uint64_t seed, int threads) {
  if (specs.empty()) throw ConfigError("no classifiers selected");
  const Table masked = masked_table(table, feature_mask);
  const auto k = static_cast<std::size_t>(plan.k);
  std::vector<FoldOutcome> outcomes(specs.size() * k);
  parallel_for(outcomes.size(), threads, [&](std::size_t job) {
    outcomes[job] = run_fold(masked, specs[job / k], plan,
                             static_cast<int>(job % k), smote_config);
  });

  EvalReport report;
  std::vector<MetricSummary> summaries;
  for (std::size_t s = 0; s < specs.size(); ++s) {
    report.classifiers.push_back(collect(
        specs[s].kind, std::span<const FoldOutcome>(outcomes).subspan(s * k, k)));
    summaries.push_back(report.classifiers.back().summary);
  }
  report.average = average_column(summaries);
  report.config = EvalConfig{seed, plan.k, smote_config, feature_mask};
  return report;
}

AblationReport ablation(const Table& table, const std::string& feature,
                        const std::vector<ClassifierSpec>& specs,
                        const FoldPlan& plan,
                        const std::optional<SmoteConfig>& smote_config,
                        std::uint64_t seed, int threads) {
  const auto all = table.feature_names();
  if (std::find(all.begin(), all.end(), feature) == all.end()) {
    throw ConfigError("unknown feature '" + feature + "'");
  }
  std::vector<std::string> without;
  for (const auto& name : all) {
    if (name != feature) without.push_back(name);
  }
  AblationReport report;
  report.feature = feature;
  report.with = evaluate(table, specs, plan, smote_config, all, seed, threads);
  report.without =
      evaluate(table, specs, plan, smote_config, without, seed, threads);
  report.delta = metric_delta(report.with, report.without);
  return report;
}

GroupRankings per_group_rankings(const Table& table, int top_n,
                                 const WeighingOptions& options) {
  if (top_n < 1) throw ConfigError("top_n must be >= 1");
  const auto g = table.group_index();
  if (!g) throw DataError("table has no group column");
  const std::string group_column = table.column_schema(*g).name;
  GroupRankings out;
  for (const auto& value : group_values(table)) {
    const Table stratum = filter_by_group(table, value);
    if (stratum.rows() < kMinGroupRows) {
      out.skipped.push_back({value, stratum.rows(),
                             "fewer than " + std::to_string(kMinGroupRows) +
                                 " rows"});
      continue;
    }
    const Table features = stratum.drop_column(group_column);
    WeighingOptions opts = options;
    opts.seed = derive_seed(options.seed, "group:" + value);
    // Small strata cannot supply relief_k hits and misses; shrink k to fit.
    const std::size_t pos = stratum.positive_count();
    const std::size_t smaller = std::min(pos, stratum.rows() - pos);
    if (smaller < 2) {
      out.skipped.push_back({value, stratum.rows(), "a class has fewer than 2 rows"});
      continue;
    }
    opts.relief_k = std::min(opts.relief_k, static_cast<int>(smaller) - 1);
    WeightMatrix m;
    try {
      m = weigh_all(features, opts);
    } catch (const DataError& e) {
      out.skipped.push_back({value, stratum.rows(), e.what()});
      continue;
    }
    auto ranked = m.by_overall_rank();
    ranked.resize(std::min(ranked.size(), static_cast<std::size_t>(top_n)));
    out.top[value] = std::move(ranked);
    out.rows[value] = stratum.rows();
  }
  return out;
}

std::size_t select_best(std::span<const CvResult> results) {
  if (results.empty()) throw ConfigError("no results to select from");
  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i) {
    const auto& a = results[i].summary.mean;
    const auto& b = results[best].summary.mean;
    if (a.accuracy != b.accuracy) {
      if (a.accuracy > b.accuracy) best = i;
    } else if (a.auc != b.auc) {
      if (a.auc > b.auc) best = i;
    } else if (kind_id(results[i].kind) < kind_id(results[best].kind)) {
      best = i;
    }
  }
  return best;
}

GroupWinners best_classifier_per_group(
    const Table& table, const std::vector<ClassifierSpec>& specs, int k,
    std::uint64_t seed, const std::optional<SmoteConfig>& smote_config,
    int threads) {
  const auto g = table.group_index();
  if (!g) throw DataError("table has no group column");
  const std::size_t floor =
      std::max(kMinGroupRows, 2 * static_cast<std::size_t>(std::max(k, 0)));
  GroupWinners out;
  for (const auto& value : group_values(table)) {
    const Table stratum = filter_by_group(table, value);
    const std::size_t n = stratum.rows();
    const std::size_t pos = stratum.positive_count();
    if (n < floor) {
      out.skipped.push_back(
          {value, n, "fewer than " + std::to_string(floor) + " rows"});
      continue;
    }
    if (pos < static_cast<std::size_t>(k) || n - pos < static_cast<std::size_t>(k)) {
      out.skipped.push_back({value, n, "a class has fewer than k rows"});
      continue;
    }
    try {
      const FoldPlan plan =
          stratified_folds(stratum, k, derive_seed(seed, "group:" + value));
      const EvalReport report = evaluate(stratum, specs, plan, smote_config,
                                         stratum.feature_names(), seed, threads);
      const std::size_t best = select_best(report.classifiers);
      out.winners[value] = GroupWinner{report.classifiers[best].kind,
                                       report.classifiers[best].summary.mean, n};
    } catch (const DataError& e) {
      out.skipped.push_back({value, n, e.what()});
    }
  }
  return out;
}

}  // namespace featrank

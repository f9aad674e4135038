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

#ifndef FEATRANK_EVALUATION_HPP_
#define FEATRANK_EVALUATION_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "featrank/classifiers.hpp"
#include "featrank/dataio.hpp"
#include "featrank/smote.hpp"
#include "featrank/table.hpp"
#include "featrank/weighting.hpp"

namespace featrank {

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  bool operator==(const Confusion&) const = default;
};

// A row is predicted positive iff score >= threshold.
Confusion confusion(std::span<const double> scores, std::span<const int> labels,
                    double threshold);

// Mann-Whitney AUC: (concordant + ties / 2) / (positives * negatives),
// computed from midranks in O(n log n).
double auc(std::span<const double> scores, std::span<const int> labels);

// All fields in [0, 1]. Precision is 0 when nothing is predicted positive.
struct Metrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double auc = 0.0;
};

Metrics compute_metrics(std::span<const double> scores,
                        std::span<const int> labels, double threshold = 0.5);

// Mean and sample (n - 1) standard deviation per metric.
struct MetricSummary {
  Metrics mean;
  Metrics std;
};

MetricSummary summarize(std::span<const Metrics> folds);

// Counts of synthetic-row sources checked against the held-out fold.
struct LeakageAudit {
  std::size_t synthetic_rows = 0;
  std::size_t sources_checked = 0;
  std::size_t violations = 0;
};

struct CvResult {
  ClassifierKind kind = ClassifierKind::kDecisionTree;
  std::vector<Metrics> folds;
  MetricSummary summary;
  LeakageAudit audit;
};

// Per fold: keep the masked features, oversample the training split when a
// SMOTE config is given (the test split is never touched), fit, score the
// test split at threshold 0.5. SMOTE and classifier seeds are derived from
// the configured seeds and the fold index only.
CvResult cross_validate(const Table& table, const ClassifierSpec& spec,
                        const FoldPlan& plan,
                        const std::optional<SmoteConfig>& smote_config,
                        const std::vector<std::string>& feature_mask);

struct EvalConfig {
  std::uint64_t seed = 0;
  int folds = 0;
  std::optional<SmoteConfig> smote;
  std::vector<std::string> features;
};

struct EvalReport {
  std::vector<CvResult> classifiers;
  // Mean over classifiers of their mean and std per metric.
  MetricSummary average;
  EvalConfig config;
};

MetricSummary average_column(std::span<const MetricSummary> classifiers);

// cross_validate for every spec; (classifier, fold) jobs may run on several
// threads without changing the result.
EvalReport evaluate(const Table& table, const std::vector<ClassifierSpec>& specs,
                    const FoldPlan& plan,
                    const std::optional<SmoteConfig>& smote_config,
                    const std::vector<std::string>& feature_mask,
                    std::uint64_t seed = 0, int threads = 1);

struct AblationReport {
  std::string feature;
  EvalReport with;
  EvalReport without;
  // with.average.mean - without.average.mean
  Metrics delta;
};

Metrics metric_delta(const EvalReport& with, const EvalReport& without);

// Both arms share folds and seeds; only the feature mask differs.
AblationReport ablation(const Table& table, const std::string& feature,
                        const std::vector<ClassifierSpec>& specs,
                        const FoldPlan& plan,
                        const std::optional<SmoteConfig>& smote_config,
                        std::uint64_t seed = 0, int threads = 1);

struct SkippedGroup {
  std::string group;
  std::size_t rows = 0;
  std::string reason;
};

struct GroupRankings {
  // Group value -> top attributes, best first.
  std::map<std::string, std::vector<std::string>> top;
  std::map<std::string, std::size_t> rows;
  std::vector<SkippedGroup> skipped;
};

inline constexpr std::size_t kMinGroupRows = 20;

// For every group value with at least kMinGroupRows rows: weigh_all on the
// group's rows without the group column, keep the top_n by overall rank.
// relief_k is lowered to (smaller class size - 1) where a stratum is too
// small for it; strata with a class of fewer than 2 rows are skipped.
GroupRankings per_group_rankings(const Table& table, int top_n,
                                 const WeighingOptions& options);

struct GroupWinner {
  ClassifierKind kind = ClassifierKind::kGlm;
  Metrics metrics;
  std::size_t rows = 0;
};

struct GroupWinners {
  std::map<std::string, GroupWinner> winners;
  std::vector<SkippedGroup> skipped;
};

// Highest mean accuracy; ties go to higher AUC, then the smaller kind id.
std::size_t select_best(std::span<const CvResult> results);

// Per group: fresh stratified folds within the group, every spec evaluated
// with all features, winner by select_best. Groups smaller than
// max(kMinGroupRows, 2k) rows, or without k rows per class, are skipped.
GroupWinners best_classifier_per_group(
    const Table& table, const std::vector<ClassifierSpec>& specs, int k,
    std::uint64_t seed, const std::optional<SmoteConfig>& smote_config,
    int threads = 1);

}  // namespace featrank

#endif  // FEATRANK_EVALUATION_HPP_

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

#ifndef FEATRANK_WEIGHTING_HPP_
#define FEATRANK_WEIGHTING_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "featrank/table.hpp"

namespace featrank {

// Filter weighting algorithms, in report column order.
enum class WeightAlgorithm {
  kInformationGain,
  kGiniIndex,
  kRule,
  kUncertainty,
  kRelief,
  kChiSquared,
};

inline constexpr std::array<WeightAlgorithm, 6> kWeightAlgorithms = {
    WeightAlgorithm::kInformationGain, WeightAlgorithm::kGiniIndex,
    WeightAlgorithm::kRule,            WeightAlgorithm::kUncertainty,
    WeightAlgorithm::kRelief,          WeightAlgorithm::kChiSquared,
};

// Machine id, e.g. "information_gain".
std::string_view algorithm_id(WeightAlgorithm algorithm);
// Human-readable title, e.g. "Information Gain".
std::string_view algorithm_title(WeightAlgorithm algorithm);

// Cut points for one numeric column. A value v falls in bin
// #{edges e : e <= v}, so b edges define b + 1 bins.
struct BinEdges {
  std::string column;
  std::vector<double> edges;

  std::size_t bin_of(double value) const;
};

// Equal-frequency cut points: the sorted column is split into n_bins runs
// of (nearly) equal size, each boundary placed midway between the adjacent
// distinct values. Boundaries that would fall inside a run of ties are
// dropped, so constant columns get no edges.
BinEdges equal_frequency_bins(const Table& table, std::string_view column,
                              int n_bins);
BinEdges equal_frequency_bins(std::span<const double> values,
                              std::string column, int n_bins);

// Shannon entropy in bits of a count vector.
double entropy(std::span<const std::size_t> class_counts);

// Attribute value x label contingency counts; row v holds
// {negatives, positives} of the v-th distinct (discretized) value.
// Numeric attributes require bins; categorical attributes ignore them.
std::vector<std::array<std::size_t, 2>> contingency(
    const Table& table, std::string_view attribute,
    const std::optional<BinEdges>& bins = std::nullopt);

double weight_information_gain(const Table& table, std::string_view attribute,
                               const std::optional<BinEdges>& bins = std::nullopt);
double weight_gini_index(const Table& table, std::string_view attribute,
                         const std::optional<BinEdges>& bins = std::nullopt);
// Symmetrical uncertainty 2 IG / (H(attribute) + H(label)); 0 when
// H(attribute) = 0.
double weight_uncertainty(const Table& table, std::string_view attribute,
                          const std::optional<BinEdges>& bins = std::nullopt);
// Raw Pearson statistic of the contingency table.
double weight_chi_squared(const Table& table, std::string_view attribute,
                          const std::optional<BinEdges>& bins = std::nullopt);
// Training accuracy of a one-attribute rule (OneR).
double weight_rule(const Table& table, std::string_view attribute,
                   const std::optional<BinEdges>& bins = std::nullopt);

// The same statistics computed straight from a contingency table.
double information_gain(std::span<const std::array<std::size_t, 2>> counts);
double gini_reduction(std::span<const std::array<std::size_t, 2>> counts);
double symmetrical_uncertainty(
    std::span<const std::array<std::size_t, 2>> counts);
double chi_squared(std::span<const std::array<std::size_t, 2>> counts);
double one_rule_accuracy(std::span<const std::array<std::size_t, 2>> counts);

// ReliefF over every non-label column.
//
// For each anchor instance the k nearest hits (same class) and k nearest
// misses (other class) are found under the sum of per-attribute
// differences: |a - b| / range for numerics (min-max over the table) and
// 0/1 mismatch for categoricals. Distance ties go to the lower row index.
// W[a] accumulates diff over misses minus diff over hits, divided by
// (anchors * k), so W[a] lies in [-1, 1]. All rows serve as anchors unless
// max_anchors > 0, in which case that many distinct anchors are drawn with
// the seed.
std::map<std::string, double> weight_relief(const Table& table, int k_neighbors,
                                            std::uint64_t seed,
                                            std::size_t max_anchors = 0);

// Rank 1 is the largest weight; exact ties go to the smaller name.
std::map<std::string, int> rank_attributes(
    const std::map<std::string, double>& weights);

struct RankAggregate {
  std::map<std::string, double> mean_rank;
  std::map<std::string, int> overall_rank;
};

// ranks[i] holds the per-algorithm ranks of attributes[i]. Overall rank
// orders attributes by ascending mean rank, ties to the smaller name.
RankAggregate aggregate_ranks(const std::vector<std::string>& attributes,
                              const std::vector<std::vector<int>>& ranks);

struct WeightMatrix {
  // Schema order.
  std::vector<std::string> attributes;
  std::vector<WeightAlgorithm> algorithms;
  // [attribute][algorithm]
  std::vector<std::vector<double>> weight;
  std::vector<std::vector<int>> rank;
  std::vector<double> mean_rank;
  std::vector<int> overall_rank;

  // Attribute names ordered by overall rank.
  std::vector<std::string> by_overall_rank() const;
};

struct WeighingOptions {
  int n_bins = 10;
  int relief_k = 10;
  std::uint64_t seed = 0;
  int threads = 1;
};

// Runs all six weighters over every non-label column, ranks each algorithm's
// weights and aggregates them.
WeightMatrix weigh_all(const Table& table, const WeighingOptions& options);
inline WeightMatrix weigh_all(const Table& table, int n_bins, int relief_k,
                              std::uint64_t seed) {
  return weigh_all(table, WeighingOptions{n_bins, relief_k, seed, 1});
}

}  // namespace featrank

#endif  // FEATRANK_WEIGHTING_HPP_

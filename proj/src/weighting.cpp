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

#include "featrank/weighting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "featrank/errors.hpp"
#include "featrank/parallel.hpp"
#include "featrank/random.hpp"

namespace featrank {

std::string_view algorithm_id(WeightAlgorithm algorithm) {
  switch (algorithm) {
    case WeightAlgorithm::kInformationGain:
      return "information_gain";
    case WeightAlgorithm::kGiniIndex:
      return "gini_index";
    case WeightAlgorithm::kRule:
      return "rule";
    case WeightAlgorithm::kUncertainty:
      return "uncertainty";
    case WeightAlgorithm::kRelief:
      return "relief";
    case WeightAlgorithm::kChiSquared:
      return "chi_squared";
  }
  return "";
}

std::string_view algorithm_title(WeightAlgorithm algorithm) {
  switch (algorithm) {
    case WeightAlgorithm::kInformationGain:
      return "Information Gain";
    case WeightAlgorithm::kGiniIndex:
      return "Gini Index";
    case WeightAlgorithm::kRule:
      return "Rule";
    case WeightAlgorithm::kUncertainty:
      return "Uncertainty";
    case WeightAlgorithm::kRelief:
      return "Relief";
    case WeightAlgorithm::kChiSquared:
      return "Chi-Squared Statistics";
  }
  return "";
}

std::size_t BinEdges::bin_of(double value) const {
  return static_cast<std::size_t>(
      std::upper_bound(edges.begin(), edges.end(), value) - edges.begin());
}

BinEdges equal_frequency_bins(std::span<const double> values,
                              std::string column, int n_bins) {
  if (n_bins < 1) throw ConfigError("bin count must be >= 1");
  BinEdges out{std::move(column), {}};
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  if (n == 0) return out;
  const std::size_t bins = static_cast<std::size_t>(n_bins);
  for (std::size_t b = 1; b < bins; ++b) {
    std::size_t j = (b * n + bins / 2) / bins;
    if (j == 0 || j >= n) continue;
    if (sorted[j - 1] == sorted[j]) {
      // Inside a run of ties: move to the nearer end of the run.
      std::size_t lo = j, hi = j;
      while (lo > 0 && sorted[lo - 1] == sorted[j]) --lo;
      while (hi < n && sorted[hi] == sorted[j]) ++hi;
      j = (j - lo <= hi - j) ? lo : hi;
      if (j == 0 || j >= n) continue;
    }
    const double edge = sorted[j - 1] + 0.5 * (sorted[j] - sorted[j - 1]);
    if (out.edges.empty() || edge > out.edges.back()) out.edges.push_back(edge);
  }
  return out;
}

BinEdges equal_frequency_bins(const Table& table, std::string_view column,
                              int n_bins) {
  const std::size_t j = table.index_of(column);
  if (table.column_schema(j).kind != ColumnKind::kNumeric) {
    throw DataError("cannot bin categorical column '" + std::string(column) +
                    "'");
  }
  return equal_frequency_bins(table.column(j).numeric, std::string(column),
                              n_bins);
}

double entropy(std::span<const std::size_t> class_counts) {
  const double total = static_cast<double>(
      std::accumulate(class_counts.begin(), class_counts.end(), std::size_t{0}));
  if (total <= 0.0) throw ComputeError("entropy of all-zero counts");
  double h = 0.0;
  for (std::size_t c : class_counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  }
  return h;
}

namespace {

using Counts = std::span<const std::array<std::size_t, 2>>;

std::size_t attribute_column(const Table& table, std::string_view attribute) {
  const std::size_t j = table.index_of(attribute);
  if (j == table.label_index()) {
    throw DataError("cannot weight the label column '" +
                    std::string(attribute) + "'");
  }
  return j;
}

std::array<std::size_t, 2> label_totals(Counts counts) {
  std::array<std::size_t, 2> t{0, 0};
  for (const auto& row : counts) {
    t[0] += row[0];
    t[1] += row[1];
  }
  return t;
}

double gini_impurity(std::size_t neg, std::size_t pos) {
  const double n = static_cast<double>(neg + pos);
  const double p0 = static_cast<double>(neg) / n;
  const double p1 = static_cast<double>(pos) / n;
  return 1.0 - p0 * p0 - p1 * p1;
}

double attribute_entropy(Counts counts) {
  std::vector<std::size_t> sizes;
  sizes.reserve(counts.size());
  for (const auto& row : counts) sizes.push_back(row[0] + row[1]);
  return entropy(sizes);
}

std::size_t total_of(Counts counts) {
  const auto t = label_totals(counts);
  const std::size_t n = t[0] + t[1];
  if (n == 0) throw DataError("cannot weight an empty table");
  return n;
}

}  // namespace

std::vector<std::array<std::size_t, 2>> contingency(
    const Table& table, std::string_view attribute,
    const std::optional<BinEdges>& bins) {
  const std::size_t j = attribute_column(table, attribute);
  const auto& schema = table.column_schema(j);
  std::map<std::size_t, std::array<std::size_t, 2>> by_bin;
  std::map<std::string_view, std::array<std::size_t, 2>> by_level;
  if (schema.kind == ColumnKind::kNumeric) {
    if (!bins) {
      throw ConfigError("numeric attribute '" + schema.name +
                        "' needs bin edges");
    }
    for (std::size_t i = 0; i < table.rows(); ++i) {
      ++by_bin[bins->bin_of(table.numeric(i, j))][table.is_positive(i) ? 1 : 0];
    }
  } else {
    for (std::size_t i = 0; i < table.rows(); ++i) {
      ++by_level[table.categorical(i, j)][table.is_positive(i) ? 1 : 0];
    }
  }
  std::vector<std::array<std::size_t, 2>> out;
  for (const auto& [bin, c] : by_bin) out.push_back(c);
  for (const auto& [level, c] : by_level) out.push_back(c);
  return out;
}

double information_gain(Counts counts) {
  const double n = static_cast<double>(total_of(counts));
  const auto t = label_totals(counts);
  const double h_label = entropy(t);
  double conditional = 0.0;
  for (const auto& row : counts) {
    const std::size_t nv = row[0] + row[1];
    if (nv == 0) continue;
    conditional += static_cast<double>(nv) / n * entropy(row);
  }
  return std::max(0.0, h_label - conditional);
}

double gini_reduction(Counts counts) {
  const double n = static_cast<double>(total_of(counts));
  const auto t = label_totals(counts);
  double conditional = 0.0;
  for (const auto& row : counts) {
    const std::size_t nv = row[0] + row[1];
    if (nv == 0) continue;
    conditional += static_cast<double>(nv) / n * gini_impurity(row[0], row[1]);
  }
  return std::max(0.0, gini_impurity(t[0], t[1]) - conditional);
}

double symmetrical_uncertainty(Counts counts) {
  const double h_attr = attribute_entropy(counts);
  if (h_attr <= 0.0) return 0.0;
  const double h_label = entropy(label_totals(counts));
  const double su = 2.0 * information_gain(counts) / (h_attr + h_label);
  return std::clamp(su, 0.0, 1.0);
}

double chi_squared(Counts counts) {
  const double n = static_cast<double>(total_of(counts));
  const auto t = label_totals(counts);
  double chi2 = 0.0;
  for (const auto& row : counts) {
    const double row_total = static_cast<double>(row[0] + row[1]);
    for (int c = 0; c < 2; ++c) {
      const double expected = row_total * static_cast<double>(t[c]) / n;
      if (expected <= 0.0) continue;
      const double d = static_cast<double>(row[c]) - expected;
      chi2 += d * d / expected;
    }
  }
  return chi2;
}

double one_rule_accuracy(Counts counts) {
  const double n = static_cast<double>(total_of(counts));
  const auto t = label_totals(counts);
  const int global = t[1] >= t[0] ? 1 : 0;
  std::size_t correct = 0;
  for (const auto& row : counts) {
    int predicted = global;
    if (row[1] > row[0]) predicted = 1;
    if (row[0] > row[1]) predicted = 0;
    correct += row[predicted];
  }
  return static_cast<double>(correct) / n;
}

double weight_information_gain(const Table& table, std::string_view attribute,
                               const std::optional<BinEdges>& bins) {
  return information_gain(contingency(table, attribute, bins));
}

double weight_gini_index(const Table& table, std::string_view attribute,
                         const std::optional<BinEdges>& bins) {
  return gini_reduction(contingency(table, attribute, bins));
}

double weight_uncertainty(const Table& table, std::string_view attribute,
                          const std::optional<BinEdges>& bins) {
  return symmetrical_uncertainty(contingency(table, attribute, bins));
}

double weight_chi_squared(const Table& table, std::string_view attribute,
                          const std::optional<BinEdges>& bins) {
  return chi_squared(contingency(table, attribute, bins));
}

double weight_rule(const Table& table, std::string_view attribute,
                   const std::optional<BinEdges>& bins) {
  return one_rule_accuracy(contingency(table, attribute, bins));
}

std::map<std::string, double> weight_relief(const Table& table, int k_neighbors,
                                            std::uint64_t seed,
                                            std::size_t max_anchors) {
  if (k_neighbors < 1) throw ConfigError("relief k must be >= 1");
  const std::size_t n = table.rows();
  const std::size_t k = static_cast<std::size_t>(k_neighbors);
  const std::size_t pos = table.positive_count();
  if (pos < k + 1 || n - pos < k + 1) {
    throw DataError("relief needs at least k+1 = " + std::to_string(k + 1) +
                    " rows per class");
  }

  const auto features = table.feature_indices();
  const std::size_t p = features.size();
  // Row-major attribute values: numerics scaled to [0, 1], categoricals as
  // integer codes.
  std::vector<double> values(n * p);
  std::vector<bool> numeric(p);
  for (std::size_t a = 0; a < p; ++a) {
    const std::size_t j = features[a];
    numeric[a] = table.column_schema(j).kind == ColumnKind::kNumeric;
    if (numeric[a]) {
      const auto& col = table.column(j).numeric;
      const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
      const double range = *hi - *lo;
      for (std::size_t i = 0; i < n; ++i) {
        values[i * p + a] = range > 0.0 ? (col[i] - *lo) / range : 0.0;
      }
    } else {
      const auto levels = table.levels(j);
      for (std::size_t i = 0; i < n; ++i) {
        const auto it = std::lower_bound(levels.begin(), levels.end(),
                                         table.categorical(i, j));
        values[i * p + a] = static_cast<double>(it - levels.begin());
      }
    }
  }
  auto diff = [&](std::size_t a, std::size_t x, std::size_t y) {
    const double u = values[x * p + a];
    const double v = values[y * p + a];
    if (numeric[a]) return std::abs(u - v);
    return u == v ? 0.0 : 1.0;
  };

  std::vector<std::size_t> anchors(n);
  std::iota(anchors.begin(), anchors.end(), std::size_t{0});
  if (max_anchors > 0 && max_anchors < n) {
    Rng rng(derive_seed(seed, "relief"));
    rng.shuffle(std::span<std::size_t>(anchors));
    anchors.resize(max_anchors);
    std::sort(anchors.begin(), anchors.end());
  }
  const double scale = 1.0 / (static_cast<double>(anchors.size()) *
                              static_cast<double>(k));

  std::vector<double> weight(p, 0.0);
  std::vector<std::pair<double, std::size_t>> hits, misses;
  hits.reserve(n);
  misses.reserve(n);
  for (std::size_t i : anchors) {
    hits.clear();
    misses.clear();
    for (std::size_t r = 0; r < n; ++r) {
      if (r == i) continue;
      double d = 0.0;
      for (std::size_t a = 0; a < p; ++a) d += diff(a, i, r);
      (table.is_positive(r) == table.is_positive(i) ? hits : misses)
          .emplace_back(d, r);
    }
    std::partial_sort(hits.begin(), hits.begin() + static_cast<long>(k),
                      hits.end());
    std::partial_sort(misses.begin(), misses.begin() + static_cast<long>(k),
                      misses.end());
    for (std::size_t a = 0; a < p; ++a) {
      double delta = 0.0;
      for (std::size_t t = 0; t < k; ++t) {
        delta += diff(a, i, misses[t].second) - diff(a, i, hits[t].second);
      }
      weight[a] += delta * scale;
    }
  }

  std::map<std::string, double> out;
  for (std::size_t a = 0; a < p; ++a) {
    out[table.column_schema(features[a]).name] = weight[a];
  }
  return out;
}

std::map<std::string, int> rank_attributes(
    const std::map<std::string, double>& weights) {
  if (weights.empty()) throw ConfigError("cannot rank an empty weight map");
  std::vector<std::pair<std::string, double>> order(weights.begin(),
                                                    weights.end());
  for (const auto& [name, w] : order) {
    if (std::isnan(w)) throw ComputeError("weight of '" + name + "' is NaN");
  }
  // The map is already name-sorted, so a stable sort keeps name order on ties.
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::map<std::string, int> ranks;
  for (std::size_t i = 0; i < order.size(); ++i) {
    ranks[order[i].first] = static_cast<int>(i + 1);
  }
  return ranks;
}

RankAggregate aggregate_ranks(const std::vector<std::string>& attributes,
                              const std::vector<std::vector<int>>& ranks) {
  if (attributes.empty() || attributes.size() != ranks.size()) {
    throw ConfigError("rank matrix must have one row per attribute");
  }
  const std::size_t width = ranks.front().size();
  if (width == 0) throw ConfigError("rank matrix has no algorithms");
  for (const auto& row : ranks) {
    if (row.size() != width) throw ConfigError("ragged rank matrix");
  }
  RankAggregate out;
  std::vector<std::pair<double, std::string>> order;
  for (std::size_t i = 0; i < attributes.size(); ++i) {
    const double sum = std::accumulate(ranks[i].begin(), ranks[i].end(), 0.0);
    const double mean = sum / static_cast<double>(width);
    out.mean_rank[attributes[i]] = mean;
    order.emplace_back(mean, attributes[i]);
  }
  std::sort(order.begin(), order.end());
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.overall_rank[order[i].second] = static_cast<int>(i + 1);
  }
  return out;
}

std::vector<std::string> WeightMatrix::by_overall_rank() const {
  std::vector<std::string> out(attributes.size());
  for (std::size_t i = 0; i < attributes.size(); ++i) {
    out[static_cast<std::size_t>(overall_rank[i] - 1)] = attributes[i];
  }
  return out;
}

WeightMatrix weigh_all(const Table& table, const WeighingOptions& options) {
  WeightMatrix m;
  m.attributes = table.feature_names();
  if (m.attributes.empty()) throw DataError("table has no feature columns");
  m.algorithms.assign(kWeightAlgorithms.begin(), kWeightAlgorithms.end());
  const std::size_t p = m.attributes.size();
  m.weight.assign(p, std::vector<double>(m.algorithms.size(), 0.0));

  parallel_for(p, options.threads, [&](std::size_t i) {
    const auto& name = m.attributes[i];
    std::optional<BinEdges> bins;
    if (table.column_schema(table.index_of(name)).kind == ColumnKind::kNumeric) {
      bins = equal_frequency_bins(table, name, options.n_bins);
    }
    const auto counts = contingency(table, name, bins);
    for (std::size_t a = 0; a < m.algorithms.size(); ++a) {
      double w = 0.0;
      switch (m.algorithms[a]) {
        case WeightAlgorithm::kInformationGain:
          w = information_gain(counts);
          break;
        case WeightAlgorithm::kGiniIndex:
          w = gini_reduction(counts);
          break;
        case WeightAlgorithm::kRule:
          w = one_rule_accuracy(counts);
          break;
        case WeightAlgorithm::kUncertainty:
          w = symmetrical_uncertainty(counts);
          break;
        case WeightAlgorithm::kChiSquared:
          w = chi_squared(counts);
          break;
        case WeightAlgorithm::kRelief:
          continue;
      }
      m.weight[i][a] = w;
    }
  });
  const auto relief = weight_relief(table, options.relief_k,
                                    derive_seed(options.seed, "relief"));
  const auto relief_col = static_cast<std::size_t>(
      std::find(m.algorithms.begin(), m.algorithms.end(),
                WeightAlgorithm::kRelief) -
      m.algorithms.begin());
  for (std::size_t i = 0; i < p; ++i) {
    m.weight[i][relief_col] = relief.at(m.attributes[i]);
  }

  m.rank.assign(p, std::vector<int>(m.algorithms.size(), 0));
  for (std::size_t a = 0; a < m.algorithms.size(); ++a) {
    std::map<std::string, double> column;
    for (std::size_t i = 0; i < p; ++i) column[m.attributes[i]] = m.weight[i][a];
    const auto ranks = rank_attributes(column);
    for (std::size_t i = 0; i < p; ++i) m.rank[i][a] = ranks.at(m.attributes[i]);
  }
  const auto agg = aggregate_ranks(m.attributes, m.rank);
  for (const auto& name : m.attributes) {
    m.mean_rank.push_back(agg.mean_rank.at(name));
    m.overall_rank.push_back(agg.overall_rank.at(name));
  }
  return m;
}

}  // namespace featrank

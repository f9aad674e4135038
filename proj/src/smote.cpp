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

#include "featrank/smote.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "featrank/errors.hpp"
#include "featrank/random.hpp"

namespace featrank {

void SmoteConfig::validate() const {
  if (k_neighbors < 1) throw ConfigError("smote k must be >= 1");
  if (!(target_ratio > 0.0 && target_ratio <= 1.0)) {
    throw ConfigError("smote target ratio must be in (0, 1]");
  }
}

int minority_class(const Table& table) {
  const std::size_t pos = table.positive_count();
  return pos < table.rows() - pos ? 1 : 0;
}

namespace {

// Distances between rows under the SMOTE metric.
class RowDistance {
 public:
  explicit RowDistance(const Table& table) : table_(table) {
    for (std::size_t j : table.feature_indices()) {
      if (table.column_schema(j).kind == ColumnKind::kNumeric) {
        const auto& col = table.column(j).numeric;
        const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
        numeric_.emplace_back(j, *hi - *lo);
      } else {
        categorical_.push_back(j);
      }
    }
  }

  double operator()(std::size_t a, std::size_t b) const {
    double d = 0.0;
    for (const auto& [j, range] : numeric_) {
      if (range > 0.0) {
        d += std::abs(table_.numeric(a, j) - table_.numeric(b, j)) / range;
      }
    }
    for (std::size_t j : categorical_) {
      if (table_.categorical(a, j) != table_.categorical(b, j)) d += 1.0;
    }
    return d;
  }

 private:
  const Table& table_;
  std::vector<std::pair<std::size_t, double>> numeric_;
  std::vector<std::size_t> categorical_;
};

std::vector<std::size_t> rows_of_class(const Table& table, int cls) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    if (static_cast<int>(table.is_positive(i)) == cls) rows.push_back(i);
  }
  return rows;
}

std::vector<std::size_t> nearest(const RowDistance& distance,
                                 const std::vector<std::size_t>& candidates,
                                 std::size_t row, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(candidates.size());
  for (std::size_t r : candidates) {
    if (r != row) scored.emplace_back(distance(row, r), r);
  }
  std::partial_sort(scored.begin(), scored.begin() + static_cast<long>(k),
                    scored.end());
  std::vector<std::size_t> out(k);
  for (std::size_t t = 0; t < k; ++t) out[t] = scored[t].second;
  return out;
}

}  // namespace

std::vector<std::size_t> minority_neighbors(const Table& table, std::size_t row,
                                            int k) {
  if (row >= table.rows()) throw ConfigError("row index out of range");
  const int cls = minority_class(table);
  if (static_cast<int>(table.is_positive(row)) != cls) {
    throw DataError("row " + std::to_string(row) +
                    " is not in the minority class");
  }
  const auto minority = rows_of_class(table, cls);
  if (k < 1 || static_cast<std::size_t>(k) >= minority.size()) {
    throw DataError("minority class has " + std::to_string(minority.size()) +
                    " rows, too few for k=" + std::to_string(k));
  }
  return nearest(RowDistance(table), minority, row,
                 static_cast<std::size_t>(k));
}

SmoteResult smote_with_origins(const Table& table, const SmoteConfig& config) {
  config.validate();
  const std::size_t pos = table.positive_count();
  if (pos == 0 || pos == table.rows()) {
    throw DataError("smote needs both classes");
  }
  const int cls = minority_class(table);
  const auto minority = rows_of_class(table, cls);
  const std::size_t majority = table.rows() - minority.size();
  const std::size_t k = static_cast<std::size_t>(config.k_neighbors);
  if (k >= minority.size()) {
    throw DataError("minority class has " + std::to_string(minority.size()) +
                    " rows, too few for k=" + std::to_string(k));
  }
  const auto target = static_cast<std::size_t>(
      std::ceil(config.target_ratio * static_cast<double>(majority) - 1e-9));
  if (minority.size() >= target) return SmoteResult{table, {}};
  const std::size_t to_make = target - minority.size();

  Rng rng(derive_seed(config.seed, "smote"));
  std::vector<std::size_t> anchor_order = minority;
  rng.shuffle(std::span<std::size_t>(anchor_order));

  const RowDistance distance(table);
  std::unordered_map<std::size_t, std::vector<std::size_t>> neighbor_cache;
  auto neighbors_of = [&](std::size_t row) -> const std::vector<std::size_t>& {
    auto it = neighbor_cache.find(row);
    if (it == neighbor_cache.end()) {
      it = neighbor_cache.emplace(row, nearest(distance, minority, row, k)).first;
    }
    return it->second;
  };

  std::vector<Column> cols(table.cols());
  std::vector<SyntheticOrigin> origins;
  origins.reserve(to_make);
  for (std::size_t s = 0; s < to_make; ++s) {
    const std::size_t anchor = anchor_order[s % anchor_order.size()];
    const auto& neighbors = neighbors_of(anchor);
    const std::size_t neighbor = neighbors[rng.index(k)];
    const double u = rng.uniform();
    for (std::size_t j = 0; j < table.cols(); ++j) {
      if (table.column_schema(j).kind == ColumnKind::kNumeric) {
        const double a = table.numeric(anchor, j);
        const double b = table.numeric(neighbor, j);
        const double v = std::clamp(a + u * (b - a), std::min(a, b),
                                    std::max(a, b));
        cols[j].numeric.push_back(j == table.label_index() ? a : v);
      } else if (j == table.label_index()) {
        cols[j].categorical.push_back(table.categorical(anchor, j));
      } else {
        std::map<std::string_view, std::size_t> votes;
        for (std::size_t r : neighbors) ++votes[table.categorical(r, j)];
        std::size_t best = 0, best_count = 0;
        std::string_view winner;
        for (const auto& [value, count] : votes) {
          if (count > best) {
            best = count;
            best_count = 1;
            winner = value;
          } else if (count == best) {
            ++best_count;
          }
        }
        cols[j].categorical.emplace_back(
            best_count == 1 ? std::string(winner)
                            : table.categorical(anchor, j));
      }
    }
    origins.push_back({anchor, neighbor});
  }
  Table synthetic(table.schema(), std::move(cols), table.ingestion_log());
  return SmoteResult{table.append(synthetic), std::move(origins)};
}

Table smote(const Table& table, const SmoteConfig& config) {
  return smote_with_origins(table, config).table;
}

}  // namespace featrank

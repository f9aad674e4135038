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

#ifndef FEATRANK_SMOTE_HPP_
#define FEATRANK_SMOTE_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "featrank/table.hpp"

namespace featrank {

struct SmoteConfig {
  int k_neighbors = 5;
  // Desired minority / majority count ratio, in (0, 1].
  double target_ratio = 1.0;
  std::uint64_t seed = 0;

  // Throws ConfigError on out-of-range values.
  void validate() const;
};

// Source rows (indices into the input table) of one synthetic row.
struct SyntheticOrigin {
  std::size_t anchor = 0;
  std::size_t neighbor = 0;
};

struct SmoteResult {
  // Input rows first and unchanged, synthetic rows after them.
  Table table;
  // origins[s] describes row (input rows + s) of `table`.
  std::vector<SyntheticOrigin> origins;
};

// Label value (1 positive, 0 negative) of the smaller class; ties pick the
// negative class.
int minority_class(const Table& table);

// The k minority rows nearest to `row` (which must be a minority row),
// nearest first. Distance is the sum over non-label columns of
// |a - b| / range for numerics (range over the whole table) and 0/1
// mismatch for categoricals. Ties go to the lower row index; the row itself
// is excluded.
std::vector<std::size_t> minority_neighbors(const Table& table, std::size_t row,
                                            int k);

// Oversamples the minority class until it holds
// ceil(target_ratio * majority) rows. Anchors are visited round-robin in a
// seeded shuffled order; each synthetic row interpolates numerics towards a
// uniformly chosen neighbor and takes categoricals by majority vote among
// the anchor's k neighbors (ties keep the anchor's value).
SmoteResult smote_with_origins(const Table& table, const SmoteConfig& config);
Table smote(const Table& table, const SmoteConfig& config);

}  // namespace featrank

#endif  // FEATRANK_SMOTE_HPP_

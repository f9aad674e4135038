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

#ifndef FEATRANK_DATAIO_HPP_
#define FEATRANK_DATAIO_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "featrank/table.hpp"

namespace featrank {

// RFC 4180 record splitting: comma separator, optional double quotes with
// "" escapes, CRLF or LF line endings. Returns one vector of fields per
// record; blank trailing lines are dropped.
std::vector<std::vector<std::string>> parse_csv_records(std::string_view text);
// Quotes a field only when it contains a comma, quote, CR or LF.
std::string csv_escape(std::string_view field);

// Schema documents: {"columns": [{"name", "kind", "role", "positive_label"}]}.
std::vector<ColumnSchema> parse_schema_json(std::string_view text);
std::vector<ColumnSchema> load_schema(const std::filesystem::path& path);
std::string schema_to_json(const std::vector<ColumnSchema>& schema);

// Parses CSV text against a schema. The header must contain the schema's
// names as a set, in any order. Blank cells are imputed (numeric: median of
// the observed values; categorical: mode, ties to the smallest value) and
// counted in the table's ingestion log. The label column may not have
// blanks and must hold exactly two distinct values.
Table read_csv(std::string_view text, const std::vector<ColumnSchema>& schema);
Table load_csv(const std::filesystem::path& path,
               const std::vector<ColumnSchema>& schema);

void write_csv(const Table& table, std::ostream& out);
void save_csv(const Table& table, const std::filesystem::path& path);

struct FoldPlan {
  int k = 0;
  // assignment[row] = fold id in [0, k).
  std::vector<int> assignment;

  std::vector<std::size_t> test_rows(int fold) const;
  std::vector<std::size_t> train_rows(int fold) const;
  bool operator==(const FoldPlan&) const = default;
};

// Shuffles row indices of each class with the seed and deals them
// round-robin into folds; negatives continue the deal where positives
// stopped so fold sizes differ by at most one as well.
FoldPlan stratified_folds(const Table& table, int k, std::uint64_t seed);

struct Split {
  Table train;
  Table test;
  // Row indices into the source table.
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
};

Split split(const Table& table, const FoldPlan& plan, int fold);

Table filter_by_group(const Table& table, std::string_view group_value);
// Distinct values of the group column (sorted).
std::vector<std::string> group_values(const Table& table);

}  // namespace featrank

#endif  // FEATRANK_DATAIO_HPP_

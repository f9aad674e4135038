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

#ifndef FEATRANK_TABLE_HPP_
#define FEATRANK_TABLE_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace featrank {

enum class ColumnKind { kNumeric, kCategorical };
enum class ColumnRole { kFeature, kLabel, kGroup };

std::string_view to_string(ColumnKind kind);
std::string_view to_string(ColumnRole role);
ColumnKind parse_column_kind(std::string_view text);
ColumnRole parse_column_role(std::string_view text);

struct ColumnSchema {
  std::string name;
  ColumnKind kind = ColumnKind::kNumeric;
  ColumnRole role = ColumnRole::kFeature;
  // Required iff role == kLabel.
  std::string positive_label;

  bool operator==(const ColumnSchema&) const = default;
};

// Storage for one column. Exactly one of the two vectors is populated,
// according to the column kind.
struct Column {
  std::vector<double> numeric;
  std::vector<std::string> categorical;

  bool operator==(const Column&) const = default;
};

// Per-column count of cells filled in during ingestion.
struct IngestionLog {
  std::map<std::string, std::size_t> imputed;

  std::size_t total() const;
};

// Immutable, column-major typed dataset with one binary label column.
//
// Construction validates the schema (unique non-empty names, exactly one
// label column with a positive label, at most one group column), shape
// (n >= 1, every column holds n cells of its declared kind) and cell
// contents (finite numerics, at most two distinct label values). Subsets
// produced by row selection may contain a single class; ingestion and
// generation additionally require both classes.
class Table {
 public:
  Table(std::vector<ColumnSchema> schema, std::vector<Column> columns,
        IngestionLog log = {});

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return schema_.size(); }

  const std::vector<ColumnSchema>& schema() const { return schema_; }
  const ColumnSchema& column_schema(std::size_t col) const {
    return schema_[col];
  }
  const Column& column(std::size_t col) const { return columns_[col]; }
  const IngestionLog& ingestion_log() const { return log_; }

  std::optional<std::size_t> find(std::string_view name) const;
  // Throws DataError for unknown names.
  std::size_t index_of(std::string_view name) const;

  std::size_t label_index() const { return label_; }
  std::optional<std::size_t> group_index() const { return group_; }
  const ColumnSchema& label_schema() const { return schema_[label_]; }
  // Every column except the label, in schema order. A group column counts
  // as a feature.
  std::vector<std::size_t> feature_indices() const;
  std::vector<std::string> feature_names() const;

  bool is_positive(std::size_t row) const { return positive_[row] != 0; }
  std::size_t positive_count() const;
  // 1 for the positive class, 0 otherwise.
  std::vector<int> labels() const;

  // Cell rendered as text (numerics use shortest round-trip form).
  std::string cell_text(std::size_t row, std::size_t col) const;
  const std::string& categorical(std::size_t row, std::size_t col) const {
    return columns_[col].categorical[row];
  }
  double numeric(std::size_t row, std::size_t col) const {
    return columns_[col].numeric[row];
  }
  // Sorted distinct values of a categorical column.
  std::vector<std::string> levels(std::size_t col) const;

  // Rows in the given order (duplicates allowed).
  Table select_rows(std::span<const std::size_t> rows) const;
  // Keeps the label column plus the named columns, in schema order.
  Table select_features(std::span<const std::string> keep) const;
  Table drop_column(std::string_view name) const;
  // Appends rows of `other`, which must share this table's schema.
  Table append(const Table& other) const;

  bool operator==(const Table& other) const {
    return schema_ == other.schema_ && columns_ == other.columns_;
  }

 private:
  std::vector<ColumnSchema> schema_;
  std::vector<Column> columns_;
  IngestionLog log_;
  std::size_t rows_ = 0;
  std::size_t label_ = 0;
  std::optional<std::size_t> group_;
  std::vector<std::uint8_t> positive_;
};

// Distinct label values observed in a table (sorted).
std::vector<std::string> label_values(const Table& table);

}  // namespace featrank

#endif  // FEATRANK_TABLE_HPP_

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

#include "featrank/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "featrank/errors.hpp"

namespace featrank {

std::string_view to_string(ColumnKind kind) {
  return kind == ColumnKind::kNumeric ? "numeric" : "categorical";
}

std::string_view to_string(ColumnRole role) {
  switch (role) {
    case ColumnRole::kFeature:
      return "feature";
    case ColumnRole::kLabel:
      return "label";
    case ColumnRole::kGroup:
      return "group";
  }
  return "feature";
}

ColumnKind parse_column_kind(std::string_view text) {
  if (text == "numeric") return ColumnKind::kNumeric;
  if (text == "categorical") return ColumnKind::kCategorical;
  throw ConfigError("unknown column kind '" + std::string(text) + "'");
}

ColumnRole parse_column_role(std::string_view text) {
  if (text == "feature") return ColumnRole::kFeature;
  if (text == "label") return ColumnRole::kLabel;
  if (text == "group") return ColumnRole::kGroup;
  throw ConfigError("unknown column role '" + std::string(text) + "'");
}

std::size_t IngestionLog::total() const {
  std::size_t sum = 0;
  for (const auto& [name, count] : imputed) sum += count;
  return sum;
}

namespace {

std::string format_number(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

}  // namespace

Table::Table(std::vector<ColumnSchema> schema, std::vector<Column> columns,
             IngestionLog log)
    : schema_(std::move(schema)), columns_(std::move(columns)),
      log_(std::move(log)) {
  if (schema_.empty()) throw DataError("table has no columns");
  if (columns_.size() != schema_.size()) {
    throw DataError("column count does not match schema");
  }
  std::set<std::string> names;
  std::optional<std::size_t> label;
  for (std::size_t j = 0; j < schema_.size(); ++j) {
    const auto& col = schema_[j];
    if (col.name.empty()) throw DataError("column name must be non-empty");
    if (!names.insert(col.name).second) {
      throw DataError("duplicate column name '" + col.name + "'");
    }
    if (col.role == ColumnRole::kLabel) {
      if (label) throw DataError("more than one label column");
      if (col.positive_label.empty()) {
        throw DataError("label column '" + col.name +
                        "' needs a positive_label");
      }
      label = j;
    } else if (col.role == ColumnRole::kGroup) {
      if (group_) throw DataError("more than one group column");
      if (col.kind != ColumnKind::kCategorical) {
        throw DataError("group column '" + col.name + "' must be categorical");
      }
      group_ = j;
    }
  }
  if (!label) throw DataError("schema has no label column");
  label_ = *label;

  const auto size_of = [&](std::size_t j) {
    return schema_[j].kind == ColumnKind::kNumeric
               ? columns_[j].numeric.size()
               : columns_[j].categorical.size();
  };
  rows_ = size_of(0);
  if (rows_ == 0) throw DataError("table has no rows");
  for (std::size_t j = 0; j < schema_.size(); ++j) {
    const auto& c = columns_[j];
    const bool numeric = schema_[j].kind == ColumnKind::kNumeric;
    if (size_of(j) != rows_ ||
        (numeric ? !c.categorical.empty() : !c.numeric.empty())) {
      throw DataError("column '" + schema_[j].name +
                      "' does not match the table shape or its kind");
    }
    if (numeric) {
      for (double v : c.numeric) {
        if (!std::isfinite(v)) {
          throw DataError("non-finite value in column '" + schema_[j].name +
                          "'");
        }
      }
    }
  }

  const auto& ls = schema_[label_];
  positive_.resize(rows_);
  if (ls.kind == ColumnKind::kNumeric) {
    double pos = 0.0;
    auto res = std::from_chars(ls.positive_label.data(),
                               ls.positive_label.data() +
                                   ls.positive_label.size(),
                               pos);
    if (res.ec != std::errc() ||
        res.ptr != ls.positive_label.data() + ls.positive_label.size()) {
      throw DataError("numeric label needs a numeric positive_label");
    }
    std::set<double> seen;
    for (std::size_t i = 0; i < rows_; ++i) {
      const double v = columns_[label_].numeric[i];
      seen.insert(v);
      positive_[i] = v == pos;
    }
    if (seen.size() > 2) throw DataError("label non-binary");
  } else {
    std::set<std::string_view> seen;
    for (std::size_t i = 0; i < rows_; ++i) {
      const auto& v = columns_[label_].categorical[i];
      seen.insert(v);
      positive_[i] = v == ls.positive_label;
    }
    if (seen.size() > 2) throw DataError("label non-binary");
  }
}

std::optional<std::size_t> Table::find(std::string_view name) const {
  for (std::size_t j = 0; j < schema_.size(); ++j) {
    if (schema_[j].name == name) return j;
  }
  return std::nullopt;
}

std::size_t Table::index_of(std::string_view name) const {
  if (auto j = find(name)) return *j;
  throw DataError("unknown column '" + std::string(name) + "'");
}

std::vector<std::size_t> Table::feature_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < schema_.size(); ++j) {
    if (j != label_) out.push_back(j);
  }
  return out;
}

std::vector<std::string> Table::feature_names() const {
  std::vector<std::string> out;
  for (std::size_t j : feature_indices()) out.push_back(schema_[j].name);
  return out;
}

std::size_t Table::positive_count() const {
  return static_cast<std::size_t>(
      std::count(positive_.begin(), positive_.end(), std::uint8_t{1}));
}

std::vector<int> Table::labels() const {
  return std::vector<int>(positive_.begin(), positive_.end());
}

std::string Table::cell_text(std::size_t row, std::size_t col) const {
  if (schema_[col].kind == ColumnKind::kNumeric) {
    return format_number(columns_[col].numeric[row]);
  }
  return columns_[col].categorical[row];
}

std::vector<std::string> Table::levels(std::size_t col) const {
  std::set<std::string> distinct(columns_[col].categorical.begin(),
                                 columns_[col].categorical.end());
  return {distinct.begin(), distinct.end()};
}

Table Table::select_rows(std::span<const std::size_t> rows) const {
  std::vector<Column> cols(columns_.size());
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    if (schema_[j].kind == ColumnKind::kNumeric) {
      cols[j].numeric.reserve(rows.size());
      for (std::size_t r : rows) cols[j].numeric.push_back(columns_[j].numeric.at(r));
    } else {
      cols[j].categorical.reserve(rows.size());
      for (std::size_t r : rows) {
        cols[j].categorical.push_back(columns_[j].categorical.at(r));
      }
    }
  }
  return Table(schema_, std::move(cols), log_);
}

Table Table::select_features(std::span<const std::string> keep) const {
  for (const auto& name : keep) {
    auto j = find(name);
    if (!j || *j == label_) {
      throw DataError("'" + name + "' is not a feature column");
    }
  }
  std::vector<ColumnSchema> schema;
  std::vector<Column> cols;
  for (std::size_t j = 0; j < schema_.size(); ++j) {
    const bool kept =
        j == label_ ||
        std::find(keep.begin(), keep.end(), schema_[j].name) != keep.end();
    if (!kept) continue;
    schema.push_back(schema_[j]);
    cols.push_back(columns_[j]);
  }
  return Table(std::move(schema), std::move(cols), log_);
}

Table Table::drop_column(std::string_view name) const {
  const std::size_t drop = index_of(name);
  if (drop == label_) throw DataError("cannot drop the label column");
  std::vector<ColumnSchema> schema;
  std::vector<Column> cols;
  for (std::size_t j = 0; j < schema_.size(); ++j) {
    if (j == drop) continue;
    schema.push_back(schema_[j]);
    cols.push_back(columns_[j]);
  }
  return Table(std::move(schema), std::move(cols), log_);
}

Table Table::append(const Table& other) const {
  if (other.schema_ != schema_) {
    throw DataError("cannot append rows with a different schema");
  }
  std::vector<Column> cols = columns_;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    auto& dst = cols[j];
    const auto& src = other.columns_[j];
    dst.numeric.insert(dst.numeric.end(), src.numeric.begin(),
                       src.numeric.end());
    dst.categorical.insert(dst.categorical.end(), src.categorical.begin(),
                           src.categorical.end());
  }
  return Table(schema_, std::move(cols), log_);
}

std::vector<std::string> label_values(const Table& table) {
  const std::size_t j = table.label_index();
  std::set<std::string> distinct;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    distinct.insert(table.cell_text(i, j));
  }
  return {distinct.begin(), distinct.end()};
}

}  // namespace featrank

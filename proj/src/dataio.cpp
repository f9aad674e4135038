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

#include "featrank/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "featrank/errors.hpp"
#include "featrank/random.hpp"

namespace featrank {

std::vector<std::vector<std::string>> parse_csv_records(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t i = 0;

  auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
    const bool blank = record.size() == 1 && record[0].empty();
    if (!blank) records.push_back(std::move(record));
    record.clear();
  };

  // Skip a UTF-8 byte order mark.
  if (text.substr(0, 3) == "\xEF\xBB\xBF") i = 3;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started || !field.empty()) {
          throw DataError("stray quote inside an unquoted CSV field");
        }
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        end_record();
        break;
      case '\n':
        end_record();
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (in_quotes) throw DataError("unterminated quoted CSV field");
  if (field_started || !field.empty() || !record.empty()) end_record();
  return records;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::vector<ColumnSchema> parse_schema_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid schema JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("columns") ||
      !doc["columns"].is_array()) {
    throw ConfigError("schema JSON needs a \"columns\" array");
  }
  std::vector<ColumnSchema> schema;
  for (const auto& c : doc["columns"]) {
    try {
      ColumnSchema col;
      col.name = c.at("name").get<std::string>();
      col.kind = parse_column_kind(c.at("kind").get<std::string>());
      col.role = parse_column_role(c.value("role", std::string("feature")));
      col.positive_label = c.value("positive_label", std::string());
      if (col.role == ColumnRole::kLabel && col.positive_label.empty()) {
        throw ConfigError("label column '" + col.name +
                          "' needs positive_label");
      }
      schema.push_back(std::move(col));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("invalid schema column: ") + e.what());
    }
  }
  return schema;
}

std::vector<ColumnSchema> load_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open schema file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_schema_json(ss.str());
}

std::string schema_to_json(const std::vector<ColumnSchema>& schema) {
  nlohmann::ordered_json doc;
  doc["columns"] = nlohmann::ordered_json::array();
  for (const auto& col : schema) {
    nlohmann::ordered_json c;
    c["name"] = col.name;
    c["kind"] = std::string(to_string(col.kind));
    c["role"] = std::string(to_string(col.role));
    if (col.role == ColumnRole::kLabel) c["positive_label"] = col.positive_label;
    doc["columns"].push_back(std::move(c));
  }
  return doc.dump(2) + "\n";
}

namespace {

double parse_double(const std::string& text, const std::string& column,
                    std::size_t line) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  // from_chars rejects a leading '+', which spreadsheets emit.
  if (begin != end && *begin == '+') ++begin;
  auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) {
    throw DataError("unparseable numeric cell '" + text + "' in column '" +
                    column + "' at line " + std::to_string(line));
  }
  return v;
}

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2]
                    : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

Table read_csv(std::string_view text, const std::vector<ColumnSchema>& schema) {
  auto records = parse_csv_records(text);
  if (records.empty()) throw DataError("empty file");
  const auto& header = records.front();

  std::map<std::string, std::size_t> position;
  for (std::size_t f = 0; f < header.size(); ++f) {
    if (!position.emplace(header[f], f).second) {
      throw DataError("duplicate column '" + header[f] + "' in header");
    }
  }
  std::set<std::string> known;
  for (const auto& col : schema) known.insert(col.name);
  for (const auto& name : header) {
    if (!known.count(name)) throw DataError("unknown column '" + name + "'");
  }
  for (const auto& col : schema) {
    if (!position.count(col.name)) {
      throw DataError("column '" + col.name + "' missing from header");
    }
  }
  if (records.size() < 2) throw DataError("empty file");

  const std::size_t n = records.size() - 1;
  std::vector<Column> cols(schema.size());
  std::vector<std::vector<std::size_t>> missing(schema.size());
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != header.size()) {
      throw DataError("line " + std::to_string(r + 1) + " has " +
                      std::to_string(rec.size()) + " fields, expected " +
                      std::to_string(header.size()));
    }
    for (std::size_t j = 0; j < schema.size(); ++j) {
      const auto& cell = rec[position[schema[j].name]];
      const bool blank = cell.empty();
      if (blank) {
        if (schema[j].role == ColumnRole::kLabel) {
          throw DataError("missing label at line " + std::to_string(r + 1));
        }
        missing[j].push_back(r - 1);
      }
      if (schema[j].kind == ColumnKind::kNumeric) {
        cols[j].numeric.push_back(
            blank ? 0.0 : parse_double(cell, schema[j].name, r + 1));
      } else {
        cols[j].categorical.push_back(cell);
      }
    }
  }

  IngestionLog log;
  for (std::size_t j = 0; j < schema.size(); ++j) {
    if (missing[j].empty()) continue;
    if (missing[j].size() == n) {
      throw DataError("column '" + schema[j].name + "' has no values");
    }
    std::vector<bool> is_missing(n, false);
    for (std::size_t r : missing[j]) is_missing[r] = true;
    if (schema[j].kind == ColumnKind::kNumeric) {
      std::vector<double> observed;
      for (std::size_t r = 0; r < n; ++r) {
        if (!is_missing[r]) observed.push_back(cols[j].numeric[r]);
      }
      const double fill = median_of(std::move(observed));
      for (std::size_t r : missing[j]) cols[j].numeric[r] = fill;
    } else {
      std::map<std::string, std::size_t> counts;
      for (std::size_t r = 0; r < n; ++r) {
        if (!is_missing[r]) ++counts[cols[j].categorical[r]];
      }
      // std::map iterates in ascending order, so the first maximum wins ties.
      auto best = counts.begin();
      for (auto it = counts.begin(); it != counts.end(); ++it) {
        if (it->second > best->second) best = it;
      }
      for (std::size_t r : missing[j]) cols[j].categorical[r] = best->first;
    }
    log.imputed[schema[j].name] = missing[j].size();
  }

  Table table(schema, std::move(cols), std::move(log));
  const auto values = label_values(table);
  if (values.size() != 2) {
    throw DataError("label non-binary: column '" + table.label_schema().name +
                    "' has " + std::to_string(values.size()) +
                    " distinct values");
  }
  if (table.positive_count() == 0) {
    throw DataError("positive_label '" + table.label_schema().positive_label +
                    "' never occurs");
  }
  return table;
}

Table load_csv(const std::filesystem::path& path,
               const std::vector<ColumnSchema>& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return read_csv(ss.str(), schema);
}

void write_csv(const Table& table, std::ostream& out) {
  for (std::size_t j = 0; j < table.cols(); ++j) {
    if (j) out << ',';
    out << csv_escape(table.column_schema(j).name);
  }
  out << '\n';
  for (std::size_t i = 0; i < table.rows(); ++i) {
    for (std::size_t j = 0; j < table.cols(); ++j) {
      if (j) out << ',';
      out << csv_escape(table.cell_text(i, j));
    }
    out << '\n';
  }
}

void save_csv(const Table& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  write_csv(table, out);
}

std::vector<std::size_t> FoldPlan::test_rows(int fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] == fold) rows.push_back(i);
  }
  return rows;
}

std::vector<std::size_t> FoldPlan::train_rows(int fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] != fold) rows.push_back(i);
  }
  return rows;
}

FoldPlan stratified_folds(const Table& table, int k, std::uint64_t seed) {
  const std::size_t n = table.rows();
  if (k < 2 || static_cast<std::size_t>(k) > n) {
    throw ConfigError("fold count " + std::to_string(k) +
                      " out of range [2, " + std::to_string(n) + "]");
  }
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < n; ++i) {
    (table.is_positive(i) ? pos : neg).push_back(i);
  }
  if (pos.size() < static_cast<std::size_t>(k) ||
      neg.size() < static_cast<std::size_t>(k)) {
    throw DataError("a class has fewer than k=" + std::to_string(k) +
                    " members");
  }
  Rng rng(derive_seed(seed, "folds"));
  rng.shuffle(std::span<std::size_t>(pos));
  rng.shuffle(std::span<std::size_t>(neg));

  FoldPlan plan;
  plan.k = k;
  plan.assignment.assign(n, 0);
  std::size_t deal = 0;
  for (const auto* cls : {&pos, &neg}) {
    for (std::size_t row : *cls) {
      plan.assignment[row] = static_cast<int>(deal % static_cast<std::size_t>(k));
      ++deal;
    }
  }
  return plan;
}

Split split(const Table& table, const FoldPlan& plan, int fold) {
  if (fold < 0 || fold >= plan.k) {
    throw ConfigError("fold index " + std::to_string(fold) + " out of range");
  }
  if (plan.assignment.size() != table.rows()) {
    throw ConfigError("fold plan does not match the table");
  }
  auto test_rows = plan.test_rows(fold);
  auto train_rows = plan.train_rows(fold);
  if (test_rows.empty() || train_rows.empty()) {
    throw DataError("fold " + std::to_string(fold) + " is empty");
  }
  Table train = table.select_rows(train_rows);
  Table test = table.select_rows(test_rows);
  return Split{std::move(train), std::move(test), std::move(train_rows),
               std::move(test_rows)};
}

Table filter_by_group(const Table& table, std::string_view group_value) {
  const auto g = table.group_index();
  if (!g) throw DataError("table has no group column");
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    if (table.categorical(i, *g) == group_value) rows.push_back(i);
  }
  if (rows.empty()) {
    throw DataError("group value '" + std::string(group_value) +
                    "' does not occur");
  }
  return table.select_rows(rows);
}

std::vector<std::string> group_values(const Table& table) {
  const auto g = table.group_index();
  if (!g) throw DataError("table has no group column");
  return table.levels(*g);
}

}  // namespace featrank

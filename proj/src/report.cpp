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

#include "featrank/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include "featrank/dataio.hpp"
#include "featrank/errors.hpp"

namespace featrank {

namespace {

constexpr std::string_view kPlusMinus = " \xC2\xB1 ";

const std::array<std::string_view, 4> kMetricNames = {"accuracy", "precision",
                                                      "recall", "auc"};

double metric_at(const Metrics& m, std::size_t i) {
  switch (i) {
    case 0: return m.accuracy;
    case 1: return m.precision;
    case 2: return m.recall;
    default: return m.auc;
  }
}

// Accuracy, precision and recall print as percentages.
double display(const Metrics& m, std::size_t i) {
  return i < 3 ? 100.0 * metric_at(m, i) : metric_at(m, i);
}

std::string cell(const MetricSummary& s, std::size_t i) {
  return format_fixed(display(s.mean, i), 2) + std::string(kPlusMinus) +
         format_fixed(display(s.std, i), 2);
}

double parse_number(std::string_view text, std::string_view what) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw DataError("malformed " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

std::string md_cell(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string format_fixed(double value, int decimals) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", decimals, value);
  std::string text(buffer);
  if (text.front() == '-' &&
      text.find_first_not_of("-0.") == std::string::npos) {
    text.erase(0, 1);
  }
  return text;
}

std::string ReportTable::to_csv() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(fields[i]);
    }
    out += '\n';
  };
  line(header);
  for (const auto& row : rows) line(row);
  return out;
}

std::string ReportTable::to_markdown() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& fields) {
    out += '|';
    for (const auto& f : fields) out += ' ' + md_cell(f) + " |";
    out += '\n';
  };
  line(header);
  out += '|';
  for (std::size_t i = 0; i < header.size(); ++i) out += i ? " ---: |" : " --- |";
  out += '\n';
  for (const auto& row : rows) line(row);
  return out;
}

ReportTable weight_report(const WeightMatrix& matrix) {
  ReportTable table;
  table.header.push_back("attribute");
  for (auto algorithm : matrix.algorithms) {
    const std::string id(algorithm_id(algorithm));
    table.header.push_back(id + "_rank");
    table.header.push_back(id + "_weight");
  }
  table.header.push_back("mean_rank");
  table.header.push_back("overall_rank");

  std::vector<std::size_t> order(matrix.attributes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return matrix.overall_rank[a] < matrix.overall_rank[b];
  });
  for (std::size_t i : order) {
    std::vector<std::string> row{matrix.attributes[i]};
    for (std::size_t a = 0; a < matrix.algorithms.size(); ++a) {
      row.push_back(std::to_string(matrix.rank[i][a]));
      row.push_back(format_fixed(matrix.weight[i][a], 5));
    }
    row.push_back(format_fixed(matrix.mean_rank[i], 2));
    row.push_back(std::to_string(matrix.overall_rank[i]));
    table.rows.push_back(std::move(row));
  }
  return table;
}

WeightMatrix parse_weight_report(std::string_view csv) {
  const auto records = parse_csv_records(csv);
  if (records.empty()) throw DataError("empty weight report");
  const auto& header = records.front();
  if (header.size() < 3 || header.size() % 2 != 1 || header.front() != "attribute" ||
      header[header.size() - 2] != "mean_rank" || header.back() != "overall_rank") {
    throw DataError("weight report header does not match the column contract");
  }
  WeightMatrix matrix;
  for (std::size_t c = 1; c + 2 < header.size(); c += 2) {
    const std::string& name = header[c];
    const auto found = std::find_if(
        kWeightAlgorithms.begin(), kWeightAlgorithms.end(), [&](WeightAlgorithm a) {
          const std::string id(algorithm_id(a));
          return name == id + "_rank" && header[c + 1] == id + "_weight";
        });
    if (found == kWeightAlgorithms.end()) {
      throw DataError("unknown weight report column '" + name + "'");
    }
    matrix.algorithms.push_back(*found);
  }
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != header.size()) {
      throw DataError("weight report row " + std::to_string(r + 1) +
                      " has the wrong field count");
    }
    matrix.attributes.push_back(rec[0]);
    std::vector<double> weights;
    std::vector<int> ranks;
    for (std::size_t c = 1; c + 2 < rec.size(); c += 2) {
      ranks.push_back(static_cast<int>(parse_number(rec[c], "rank")));
      weights.push_back(parse_number(rec[c + 1], "weight"));
    }
    matrix.weight.push_back(std::move(weights));
    matrix.rank.push_back(std::move(ranks));
    matrix.mean_rank.push_back(parse_number(rec[rec.size() - 2], "mean rank"));
    matrix.overall_rank.push_back(static_cast<int>(parse_number(rec.back(), "rank")));
  }
  return matrix;
}

ReportTable eval_report(const EvalReport& report) {
  ReportTable table;
  table.header.push_back("metric");
  for (const auto& cv : report.classifiers) {
    table.header.emplace_back(kind_title(cv.kind));
  }
  table.header.push_back("Average");
  for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
    std::vector<std::string> row{std::string(kMetricNames[m])};
    for (const auto& cv : report.classifiers) row.push_back(cell(cv.summary, m));
    row.push_back(cell(report.average, m));
    table.rows.push_back(std::move(row));
  }
  return table;
}

ParsedEvalReport parse_eval_report(std::string_view csv) {
  const auto records = parse_csv_records(csv);
  if (records.empty() || records.front().empty() || records.front().front() != "metric") {
    throw DataError("evaluation report header does not match the column contract");
  }
  ParsedEvalReport parsed;
  parsed.columns.assign(records.front().begin() + 1, records.front().end());
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != records.front().size()) {
      throw DataError("evaluation report row has the wrong field count");
    }
    parsed.metrics.push_back(rec[0]);
    std::vector<ParsedCell> cells;
    for (std::size_t c = 1; c < rec.size(); ++c) {
      const std::string_view text = rec[c];
      const auto sep = text.find(kPlusMinus);
      if (sep == std::string_view::npos) {
        throw DataError("evaluation cell '" + rec[c] + "' is not 'mean \xC2\xB1 std'");
      }
      cells.push_back({parse_number(text.substr(0, sep), "mean"),
                       parse_number(text.substr(sep + kPlusMinus.size()), "std")});
    }
    parsed.cells.push_back(std::move(cells));
  }
  return parsed;
}

ReportTable delta_report(const AblationReport& report) {
  ReportTable table;
  table.header = {"metric", "without_" + report.feature, "with_" + report.feature,
                  "delta"};
  for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
    table.rows.push_back({std::string(kMetricNames[m]),
                          format_fixed(display(report.without.average.mean, m), 2),
                          format_fixed(display(report.with.average.mean, m), 2),
                          format_fixed(display(report.delta, m), 2)});
  }
  return table;
}

ReportTable group_rankings_report(const GroupRankings& rankings, int top_n) {
  ReportTable table;
  table.header = {"group", "rows", "status", "reason"};
  for (int i = 1; i <= top_n; ++i) table.header.push_back("rank_" + std::to_string(i));

  std::map<std::string, std::vector<std::string>> rows;
  for (const auto& [group, top] : rankings.top) {
    std::vector<std::string> row{group, std::to_string(rankings.rows.at(group)),
                                 "ranked", ""};
    for (int i = 0; i < top_n; ++i) {
      row.push_back(i < static_cast<int>(top.size()) ? top[i] : "");
    }
    rows[group] = std::move(row);
  }
  for (const auto& s : rankings.skipped) {
    std::vector<std::string> row{s.group, std::to_string(s.rows), "skipped", s.reason};
    row.resize(table.header.size());
    rows[s.group] = std::move(row);
  }
  for (auto& [group, row] : rows) table.rows.push_back(std::move(row));
  return table;
}

ReportTable group_best_report(const GroupWinners& winners) {
  ReportTable table;
  table.header = {"group", "rows",      "status", "reason", "classifier",
                  "accuracy", "precision", "recall", "auc"};
  std::map<std::string, std::vector<std::string>> rows;
  for (const auto& [group, w] : winners.winners) {
    rows[group] = {group,
                   std::to_string(w.rows),
                   "ranked",
                   "",
                   std::string(kind_id(w.kind)),
                   format_fixed(100.0 * w.metrics.accuracy, 2),
                   format_fixed(100.0 * w.metrics.precision, 2),
                   format_fixed(100.0 * w.metrics.recall, 2),
                   format_fixed(w.metrics.auc, 2)};
  }
  for (const auto& s : winners.skipped) {
    std::vector<std::string> row{s.group, std::to_string(s.rows), "skipped", s.reason};
    row.resize(table.header.size());
    rows[s.group] = std::move(row);
  }
  for (auto& [group, row] : rows) table.rows.push_back(std::move(row));
  return table;
}

}  // namespace featrank

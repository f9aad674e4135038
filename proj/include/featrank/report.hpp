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

#ifndef FEATRANK_REPORT_HPP_
#define FEATRANK_REPORT_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "featrank/evaluation.hpp"
#include "featrank/weighting.hpp"

namespace featrank {

// A rectangular block of already formatted cells.
struct ReportTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;
  std::string to_markdown() const;
};

// Fixed-point text; never prints a negative zero.
std::string format_fixed(double value, int decimals);

// Columns: attribute, then <algorithm>_rank and <algorithm>_weight for each
// algorithm, then mean_rank and overall_rank. Rows by overall rank. Weights
// carry 5 decimals, mean ranks 2.
ReportTable weight_report(const WeightMatrix& matrix);
// Inverse of weight_report(...).to_csv(), up to the printed precision. Rows
// come back in schema order only if they were written that way; the result
// is in file order. Throws DataError on a malformed file.
WeightMatrix parse_weight_report(std::string_view csv);

// Rows: accuracy, precision, recall, auc. Columns: one per classifier in
// report order, then Average. Cells "mean ± std"; accuracy, precision and
// recall in percent, everything with 2 decimals.
ReportTable eval_report(const EvalReport& report);

struct ParsedCell {
  double mean = 0.0;
  double std = 0.0;
};
struct ParsedEvalReport {
  std::vector<std::string> columns;  // classifier titles then "Average"
  std::vector<std::string> metrics;
  std::vector<std::vector<ParsedCell>> cells;  // [metric][column]
};
ParsedEvalReport parse_eval_report(std::string_view csv);

// One row per metric: without, with, and their difference (same units as
// eval_report).
ReportTable delta_report(const AblationReport& report);

// One row per group value: rows, status (ranked | skipped), reason, and the
// top_n attributes best first.
ReportTable group_rankings_report(const GroupRankings& rankings, int top_n);
// One row per group value: rows, status, reason, winning classifier and its
// mean metrics.
ReportTable group_best_report(const GroupWinners& winners);

}  // namespace featrank

#endif  // FEATRANK_REPORT_HPP_

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

// featrank: feature weighting, ablation and per-group analysis of tabular
// binary classification data.
//
// Exit codes: 0 success, 1 configuration error, 2 data error, 3 compute
// error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "featrank/classifiers.hpp"
#include "featrank/dataio.hpp"
#include "featrank/errors.hpp"
#include "featrank/evaluation.hpp"
#include "featrank/random.hpp"
#include "featrank/report.hpp"
#include "featrank/smote.hpp"
#include "featrank/synth.hpp"
#include "featrank/weighting.hpp"

namespace fs = std::filesystem;
using namespace featrank;

namespace {

struct RunConfig {
  std::string data;
  std::string schema;
  std::string out = ".";
  std::uint64_t seed = 0;
  int folds = 10;
  int bins = 10;
  int relief_k = 10;
  int smote_k = 5;
  double smote_ratio = 1.0;
  bool no_smote = false;
  std::string feature;
  std::string classifiers = "all";
  std::string format = "csv";
  std::string save_model;
  int threads = 1;
  int top = 5;
  // synth
  std::string spec;
  std::string preset = "default";
  std::size_t rows = 0;
  double effect = 1.5;
};

// Collects every output so nothing is written until the run succeeded.
class Outputs {
 public:
  void add(const fs::path& path, std::string content) {
    files_.emplace_back(path, std::move(content));
  }
  void add_report(const fs::path& dir, const std::string& stem,
                  const ReportTable& table, const std::string& format) {
    add(dir / (stem + ".csv"), table.to_csv());
    if (format == "md") add(dir / (stem + ".md"), table.to_markdown());
  }
  void write_all() const {
    for (const auto& [path, content] : files_) {
      if (path.has_parent_path()) fs::create_directories(path.parent_path());
      std::ofstream out(path, std::ios::binary);
      out << content;
      if (!out) throw DataError("cannot write '" + path.string() + "'");
    }
  }

 private:
  std::vector<std::pair<fs::path, std::string>> files_;
};

Table load_input(const RunConfig& cfg) {
  if (cfg.data.empty() || cfg.schema.empty()) {
    throw ConfigError("--data and --schema are required");
  }
  return load_csv(cfg.data, load_schema(cfg.schema));
}

void check_common(const RunConfig& cfg) {
  if (cfg.folds < 2) throw ConfigError("--folds must be >= 2");
  if (cfg.bins < 2) throw ConfigError("--bins must be >= 2");
  if (cfg.relief_k < 1) throw ConfigError("--relief-k must be >= 1");
  if (cfg.threads < 1) throw ConfigError("--threads must be >= 1");
  if (cfg.format != "csv" && cfg.format != "md") {
    throw ConfigError("--format must be csv or md");
  }
}

std::vector<ClassifierSpec> selected_specs(const RunConfig& cfg) {
  const std::uint64_t seed = derive_seed(cfg.seed, "classifier");
  if (cfg.classifiers == "all") return all_specs(seed);
  std::vector<ClassifierSpec> specs;
  std::stringstream list(cfg.classifiers);
  std::string id;
  while (std::getline(list, id, ',')) {
    if (id.empty()) continue;
    const ClassifierKind kind = parse_kind(id);
    for (const auto& s : specs) {
      if (s.kind == kind) throw ConfigError("classifier '" + id + "' listed twice");
    }
    specs.push_back(make_spec(kind, seed));
  }
  if (specs.empty()) throw ConfigError("--classifiers selects nothing");
  return specs;
}

std::optional<SmoteConfig> smote_config(const RunConfig& cfg) {
  if (cfg.no_smote) return std::nullopt;
  SmoteConfig smote{cfg.smote_k, cfg.smote_ratio, derive_seed(cfg.seed, "smote")};
  smote.validate();
  return smote;
}

WeighingOptions weighing_options(const RunConfig& cfg) {
  return WeighingOptions{cfg.bins, cfg.relief_k, derive_seed(cfg.seed, "weigh"),
                         cfg.threads};
}

void run_weigh(const RunConfig& cfg, const Table& table, Outputs& out) {
  const WeightMatrix matrix = weigh_all(table, weighing_options(cfg));
  out.add_report(cfg.out, "weights", weight_report(matrix), cfg.format);
  std::cout << "weighed " << matrix.attributes.size() << " attributes; top: "
            << matrix.by_overall_rank().front() << "\n";
}

void run_ablate(const RunConfig& cfg, const Table& table, Outputs& out) {
  std::string feature = cfg.feature;
  if (feature.empty()) {
    const auto g = table.group_index();
    if (!g) throw ConfigError("--feature is required when the schema has no group column");
    feature = table.column_schema(*g).name;
  }
  const auto specs = selected_specs(cfg);
  const FoldPlan plan = stratified_folds(table, cfg.folds, derive_seed(cfg.seed, "folds"));
  const AblationReport report = ablation(table, feature, specs, plan,
                                         smote_config(cfg), cfg.seed, cfg.threads);
  out.add_report(cfg.out, "eval_without", eval_report(report.without), cfg.format);
  out.add_report(cfg.out, "eval_with", eval_report(report.with), cfg.format);
  out.add_report(cfg.out, "delta", delta_report(report), cfg.format);
  std::cout << "ablation of '" << feature << "': delta accuracy "
            << format_fixed(100.0 * report.delta.accuracy, 2) << ", delta AUC "
            << format_fixed(report.delta.auc, 2) << "\n";

  if (!cfg.save_model.empty()) {
    for (const auto& spec : specs) {
      const Model model = fit(spec, table);
      out.add(fs::path(cfg.save_model) / ("model_" + std::string(kind_id(spec.kind)) + ".json"),
              model_to_json(model));
    }
  }
}

void run_groups(const RunConfig& cfg, const Table& table, Outputs& out) {
  if (!table.group_index()) throw DataError("table has no group column");
  const GroupRankings rankings = per_group_rankings(table, cfg.top, weighing_options(cfg));
  const GroupWinners winners =
      best_classifier_per_group(table, selected_specs(cfg), cfg.folds,
                                derive_seed(cfg.seed, "groups"), smote_config(cfg),
                                cfg.threads);
  out.add_report(cfg.out, "group_rankings", group_rankings_report(rankings, cfg.top),
                 cfg.format);
  out.add_report(cfg.out, "group_best", group_best_report(winners), cfg.format);
  std::cout << "groups ranked: " << rankings.top.size() << ", skipped: "
            << rankings.skipped.size() << "\n";
}

SynthSpec synth_spec(const RunConfig& cfg, const CLI::App& sub) {
  SynthSpec spec;
  if (!cfg.spec.empty()) {
    std::ifstream in(cfg.spec, std::ios::binary);
    if (!in) throw ConfigError("cannot read spec '" + cfg.spec + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    spec = spec_from_json(buffer.str());
  } else if (cfg.preset == "default") {
    spec = default_synth_spec();
  } else if (cfg.preset == "planted") {
    spec = planted_ablation_spec(cfg.effect);
  } else if (cfg.preset == "null") {
    spec = null_synth_spec();
  } else if (cfg.preset == "separable") {
    spec = separable_synth_spec();
  } else {
    throw ConfigError("unknown --preset '" + cfg.preset + "'");
  }
  if (sub.count("--rows")) spec.n_rows = cfg.rows;
  if (sub.count("--seed") || cfg.spec.empty()) spec.seed = cfg.seed;
  spec.validate();
  return spec;
}

void run_synth(const RunConfig& cfg, const CLI::App& sub, Outputs& out) {
  const SynthSpec spec = synth_spec(cfg, sub);
  const Cohort cohort = generate(spec);
  std::ostringstream csv;
  write_csv(cohort.table, csv);
  const fs::path dir(cfg.out);
  out.add(dir / "cohort.csv", csv.str());
  out.add(dir / "schema.json", schema_to_json(cohort.table.schema()));
  out.add(dir / "spec.json", spec_to_json(spec));
  out.add(dir / "truth.json", truth_to_json(spec, cohort.truth));
  std::cout << "rows: " << cohort.table.rows()
            << "\nprevalence: " << format_fixed(cohort.truth.realized_prevalence, 4)
            << "\n";
  for (const auto& [group, count] : cohort.truth.group_counts) {
    std::cout << group << ": " << count << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feature weighting, ablation and per-group analysis"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "Output directory")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "Global seed")->capture_default_str();
    sub->add_option("--format", cfg.format, "csv, or md for an extra Markdown render")
        ->capture_default_str();
    sub->add_option("--threads", cfg.threads, "Worker threads")->capture_default_str();
  };
  auto add_data = [&](CLI::App* sub) {
    sub->add_option("--data", cfg.data, "Input CSV")->required();
    sub->add_option("--schema", cfg.schema, "Schema JSON")->required();
    sub->add_option("--bins", cfg.bins, "Equal-frequency bins for numeric attributes")
        ->capture_default_str();
    sub->add_option("--relief-k", cfg.relief_k, "ReliefF neighbours")->capture_default_str();
  };
  auto add_eval = [&](CLI::App* sub) {
    sub->add_option("--folds", cfg.folds, "Cross-validation folds")->capture_default_str();
    sub->add_option("--smote-k", cfg.smote_k, "SMOTE neighbours")->capture_default_str();
    sub->add_option("--smote-ratio", cfg.smote_ratio, "SMOTE minority/majority target")
        ->capture_default_str();
    sub->add_flag("--no-smote", cfg.no_smote, "Train without oversampling");
    sub->add_option("--classifiers", cfg.classifiers, "'all' or a comma list of ids")
        ->capture_default_str();
  };

  auto* weigh = app.add_subcommand("weigh", "Rank attributes with six weighters");
  add_common(weigh);
  add_data(weigh);

  auto* ablate = app.add_subcommand("ablate", "Cross-validate with and without a feature");
  add_common(ablate);
  add_data(ablate);
  add_eval(ablate);
  ablate->add_option("--feature", cfg.feature, "Feature to ablate (default: group column)");
  ablate->add_option("--save-model", cfg.save_model,
                     "Directory for models fitted on the full data");

  auto* groups = app.add_subcommand("groups", "Per-group rankings and best classifier");
  add_common(groups);
  add_data(groups);
  add_eval(groups);
  groups->add_option("--top", cfg.top, "Attributes listed per group")->capture_default_str();

  auto* report = app.add_subcommand("report", "weigh, ablate and groups in one run");
  add_common(report);
  add_data(report);
  add_eval(report);
  report->add_option("--feature", cfg.feature, "Feature to ablate (default: group column)");
  report->add_option("--save-model", cfg.save_model,
                     "Directory for models fitted on the full data");
  report->add_option("--top", cfg.top, "Attributes listed per group")->capture_default_str();

  auto* synth = app.add_subcommand("synth", "Generate a synthetic cohort");
  add_common(synth);
  synth->add_option("--spec", cfg.spec, "Synthetic spec JSON");
  synth->add_option("--preset", cfg.preset, "default, planted, null or separable")
      ->capture_default_str();
  synth->add_option("--rows", cfg.rows, "Row count override");
  synth->add_option("--effect", cfg.effect, "Group effect for the planted preset")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ErrorKind::kConfig);
  }

  try {
    check_common(cfg);
    Outputs out;
    if (synth->parsed()) {
      run_synth(cfg, *synth, out);
    } else {
      const Table table = load_input(cfg);
      if (weigh->parsed() || report->parsed()) run_weigh(cfg, table, out);
      if (ablate->parsed() || report->parsed()) run_ablate(cfg, table, out);
      if (groups->parsed() || report->parsed()) run_groups(cfg, table, out);
    }
    out.write_all();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::kCompute);
  }
  return 0;
}

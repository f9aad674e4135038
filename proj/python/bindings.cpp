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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "featrank/classifiers.hpp"
#include "featrank/dataio.hpp"
#include "featrank/errors.hpp"
#include "featrank/evaluation.hpp"
#include "featrank/random.hpp"
#include "featrank/report.hpp"
#include "featrank/smote.hpp"
#include "featrank/synth.hpp"
#include "featrank/weighting.hpp"

namespace py = pybind11;
using namespace featrank;

namespace {

py::dict metrics_dict(const Metrics& m) {
  py::dict d;
  d["accuracy"] = m.accuracy;
  d["precision"] = m.precision;
  d["recall"] = m.recall;
  d["auc"] = m.auc;
  return d;
}

py::dict eval_dict(const EvalReport& r) {
  py::dict classifiers;
  for (const auto& cv : r.classifiers) {
    py::dict c;
    c["mean"] = metrics_dict(cv.summary.mean);
    c["std"] = metrics_dict(cv.summary.std);
    c["leakage_violations"] = cv.audit.violations;
    classifiers[py::str(std::string(kind_id(cv.kind)))] = c;
  }
  py::dict d;
  d["classifiers"] = classifiers;
  d["average"] = metrics_dict(r.average.mean);
  d["average_std"] = metrics_dict(r.average.std);
  return d;
}

std::vector<ClassifierSpec> specs_for(const std::vector<std::string>& ids, std::uint64_t seed) {
  const std::uint64_t s = derive_seed(seed, "classifier");
  if (ids.empty()) return all_specs(s);
  std::vector<ClassifierSpec> specs;
  for (const auto& id : ids) specs.push_back(make_spec(parse_kind(id), s));
  return specs;
}

std::optional<SmoteConfig> smote_for(bool enabled, int k, double ratio, std::uint64_t seed) {
  if (!enabled) return std::nullopt;
  SmoteConfig c{k, ratio, derive_seed(seed, "smote")};
  c.validate();
  return c;
}

SynthSpec preset_spec(const std::string& preset, std::size_t rows, std::uint64_t seed,
                      double effect) {
  if (preset == "default") return default_synth_spec(rows, seed);
  if (preset == "planted") return planted_ablation_spec(effect, rows, seed);
  if (preset == "null") return null_synth_spec(rows, seed);
  if (preset == "separable") return separable_synth_spec(rows, seed);
  throw ConfigError("unknown preset '" + preset + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "featrank native core";

  auto base = py::register_exception<Error>(m, "FeatrankError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DataError>(m, "DataError", base.ptr());
  py::register_exception<ComputeError>(m, "ComputeError", base.ptr());

  py::class_<Table>(m, "Table")
      .def_static(
          "from_csv",
          [](const std::string& csv, const std::string& schema_json) {
            return read_csv(csv, parse_schema_json(schema_json));
          },
          py::arg("csv"), py::arg("schema_json"))
      .def_static(
          "load",
          [](const std::string& csv_path, const std::string& schema_path) {
            return load_csv(csv_path, load_schema(schema_path));
          },
          py::arg("csv_path"), py::arg("schema_path"))
      .def_property_readonly("rows", &Table::rows)
      .def_property_readonly("cols", &Table::cols)
      .def_property_readonly("feature_names", &Table::feature_names)
      .def_property_readonly("labels", &Table::labels)
      .def("positive_count", &Table::positive_count)
      .def("schema_json", [](const Table& t) { return schema_to_json(t.schema()); })
      .def("to_csv",
           [](const Table& t) {
             std::ostringstream out;
             write_csv(t, out);
             return out.str();
           })
      .def("drop_column", &Table::drop_column, py::arg("name"))
      .def("__len__", &Table::rows)
      .def("__eq__", [](const Table& a, const Table& b) { return a == b; });

  m.def(
      "synth",
      [](const std::string& preset, std::size_t rows, std::uint64_t seed, double effect) {
        const SynthSpec spec = preset_spec(preset, rows, seed, effect);
        Cohort c = generate(spec);
        return py::make_tuple(std::move(c.table), truth_to_json(spec, c.truth));
      },
      py::arg("preset") = "default", py::arg("rows") = 1000, py::arg("seed") = 0,
      py::arg("effect") = 1.5,
      "Generates a cohort; returns (table, truth_json).");
  m.def(
      "synth_from_json",
      [](const std::string& spec_json) {
        const SynthSpec spec = spec_from_json(spec_json);
        Cohort c = generate(spec);
        return py::make_tuple(std::move(c.table), truth_to_json(spec, c.truth));
      },
      py::arg("spec_json"));

  m.def(
      "weigh",
      [](const Table& t, int bins, int relief_k, std::uint64_t seed, int threads) {
        WeightMatrix w;
        {
          py::gil_scoped_release release;
          w = weigh_all(t, WeighingOptions{bins, relief_k, derive_seed(seed, "weigh"), threads});
        }
        py::list algorithms;
        for (auto a : w.algorithms) algorithms.append(std::string(algorithm_id(a)));
        py::dict d;
        d["attributes"] = w.attributes;
        d["algorithms"] = algorithms;
        d["weights"] = w.weight;
        d["ranks"] = w.rank;
        d["mean_rank"] = w.mean_rank;
        d["overall_rank"] = w.overall_rank;
        d["order"] = w.by_overall_rank();
        d["csv"] = weight_report(w).to_csv();
        return d;
      },
      py::arg("table"), py::arg("bins") = 10, py::arg("relief_k") = 10, py::arg("seed") = 0,
      py::arg("threads") = 1);

  m.def(
      "aggregate_ranks",
      [](const std::vector<std::string>& attributes, const std::vector<std::vector<int>>& ranks) {
        const RankAggregate a = aggregate_ranks(attributes, ranks);
        return py::make_tuple(a.mean_rank, a.overall_rank);
      },
      py::arg("attributes"), py::arg("ranks"), "Returns (mean_rank, overall_rank) dicts.");

  m.def(
      "auc",
      [](const std::vector<double>& scores, const std::vector<int>& labels) {
        return auc(scores, labels);
      },
      py::arg("scores"), py::arg("labels"));
  m.def(
      "chi_squared",
      [](const std::vector<std::array<std::size_t, 2>>& counts) { return chi_squared(counts); },
      py::arg("counts"));

  m.def(
      "smote",
      [](const Table& t, int k, double ratio, std::uint64_t seed) {
        return smote(t, SmoteConfig{k, ratio, seed});
      },
      py::arg("table"), py::arg("k") = 5, py::arg("ratio") = 1.0, py::arg("seed") = 0);

  m.def(
      "ablate",
      [](const Table& t, const std::string& feature, int folds, std::uint64_t seed,
         const std::vector<std::string>& classifiers, bool use_smote, int smote_k,
         double smote_ratio, int threads) {
        const auto specs = specs_for(classifiers, seed);
        const auto sm = smote_for(use_smote, smote_k, smote_ratio, seed);
        const FoldPlan plan = stratified_folds(t, folds, derive_seed(seed, "folds"));
        AblationReport r;
        {
          py::gil_scoped_release release;
          r = ablation(t, feature, specs, plan, sm, seed, threads);
        }
        py::dict d;
        d["feature"] = r.feature;
        d["with"] = eval_dict(r.with);
        d["without"] = eval_dict(r.without);
        d["delta"] = metrics_dict(r.delta);
        return d;
      },
      py::arg("table"), py::arg("feature"), py::arg("folds") = 10, py::arg("seed") = 0,
      py::arg("classifiers") = std::vector<std::string>{}, py::arg("smote") = true,
      py::arg("smote_k") = 5, py::arg("smote_ratio") = 1.0, py::arg("threads") = 1);

  m.def("classifier_ids", [] {
    std::vector<std::string> ids;
    for (auto k : kClassifierKinds) ids.emplace_back(kind_id(k));
    return ids;
  });
}

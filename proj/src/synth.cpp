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

#include "featrank/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

#include "featrank/errors.hpp"
#include "featrank/random.hpp"

namespace featrank {

using json = nlohmann::ordered_json;

void SynthSpec::validate() const {
  if (n_rows < 100) throw ConfigError("synthetic cohorts need n_rows >= 100");
  if (!(prevalence > 0.0 && prevalence < 1.0)) {
    throw ConfigError("prevalence must lie in (0, 1)");
  }
  if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) {
    throw ConfigError("noise_sd must be a finite value >= 0");
  }
  std::set<std::string> names{label_column};
  if (positive_label.empty() || negative_label.empty() ||
      positive_label == negative_label) {
    throw ConfigError("label values must be distinct and non-empty");
  }
  if (!group_distribution.empty()) {
    if (!names.insert(group_column).second) {
      throw ConfigError("group column name clashes with another column");
    }
    double total = 0.0;
    std::set<std::string> groups;
    for (const auto& [g, p] : group_distribution) {
      if (!(p >= 0.0)) throw ConfigError("group probabilities must be >= 0");
      if (g.empty() || !groups.insert(g).second) {
        throw ConfigError("group names must be unique and non-empty");
      }
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw ConfigError("group probabilities must sum to 1");
    }
  }
  if (features.empty()) throw ConfigError("synthetic spec has no features");
  for (const auto& f : features) {
    if (f.name.empty() || !names.insert(f.name).second) {
      throw ConfigError("feature names must be unique and non-empty");
    }
    if (f.kind == ColumnKind::kNumeric) {
      if (!(f.sd > 0.0) || !std::isfinite(f.mean)) {
        throw ConfigError("numeric feature '" + f.name + "' needs sd > 0");
      }
    } else {
      if (f.levels.empty() || f.levels.size() != f.probabilities.size()) {
        throw ConfigError("categorical feature '" + f.name +
                          "' needs one probability per level");
      }
      const double total =
          std::accumulate(f.probabilities.begin(), f.probabilities.end(), 0.0);
      if (std::abs(total - 1.0) > 1e-9 ||
          std::any_of(f.probabilities.begin(), f.probabilities.end(),
                      [](double p) { return !(p >= 0.0); })) {
        throw ConfigError("level probabilities of '" + f.name +
                          "' must be >= 0 and sum to 1");
      }
    }
  }
  auto known = [&](const std::string& name) {
    return std::any_of(features.begin(), features.end(),
                       [&](const FeatureDef& f) { return f.name == name; });
  };
  for (const auto& [name, beta] : coefficients) {
    if (!known(name)) throw ConfigError("coefficient for unknown feature '" + name + "'");
    if (!std::isfinite(beta)) throw ConfigError("coefficients must be finite");
  }
  std::set<std::string> groups;
  for (const auto& [g, p] : group_distribution) groups.insert(g);
  for (const auto& [g, betas] : group_coefficients) {
    if (!groups.count(g)) throw ConfigError("coefficients for unknown group '" + g + "'");
    for (const auto& [name, beta] : betas) {
      if (!known(name)) throw ConfigError("coefficient for unknown feature '" + name + "'");
      if (!std::isfinite(beta)) throw ConfigError("coefficients must be finite");
    }
  }
  for (const auto& [g, offset] : group_offsets) {
    if (!groups.count(g)) throw ConfigError("offset for unknown group '" + g + "'");
    if (!std::isfinite(offset)) throw ConfigError("offsets must be finite");
  }
}

std::vector<std::pair<std::string, double>> default_group_distribution() {
  // Reference cohort shares in percent; they sum to 96.25 and are rescaled.
  const std::vector<std::pair<std::string, double>> percent = {
      {"Fars", 50.0},     {"Azari", 12.75},    {"Kurd", 10.0},
      {"Gilak", 6.0},     {"Lor", 3.5},        {"Arab", 3.5},
      {"Bakhtiari", 3.5}, {"Qashqaei", 3.5},   {"Balouch", 3.5},
  };
  double total = 0.0;
  for (const auto& [g, p] : percent) total += p;
  std::vector<std::pair<std::string, double>> out;
  for (const auto& [g, p] : percent) out.emplace_back(g, p / total);
  return out;
}

namespace {

FeatureDef numeric_feature(std::string name, double mean, double sd) {
  return FeatureDef{std::move(name), ColumnKind::kNumeric, mean, sd, {}, {}};
}

FeatureDef binary_feature(std::string name, std::string off, std::string on,
                          double p_on) {
  return FeatureDef{std::move(name), ColumnKind::kCategorical, 0.0, 1.0,
                    {std::move(off), std::move(on)}, {1.0 - p_on, p_on}};
}

}  // namespace

SynthSpec default_synth_spec(std::size_t n_rows, std::uint64_t seed) {
  SynthSpec spec;
  spec.n_rows = n_rows;
  spec.seed = seed;
  spec.group_distribution = default_group_distribution();
  spec.features = {
      numeric_feature("WC", 96.0, 12.0),
      numeric_feature("age", 48.0, 6.0),
      numeric_feature("BMI", 27.5, 4.5),
      binary_feature("DM", "no", "yes", 0.3),
      binary_feature("gender", "female", "male", 0.55),
      binary_feature("HBP", "no", "yes", 0.4),
      numeric_feature("LDL", 110.0, 35.0),
      binary_feature("smoking", "no", "yes", 0.3),
  };
  spec.coefficients = {{"gender", 1.0}, {"age", 0.6},  {"WC", 0.35},
                       {"smoking", 0.45}, {"DM", 0.4}, {"BMI", 0.1},
                       {"HBP", 0.1},    {"LDL", 0.02}};
  for (std::size_t g = 0; g < spec.group_distribution.size(); ++g) {
    spec.group_offsets[spec.group_distribution[g].first] = g % 2 == 0 ? 0.5 : -0.5;
  }
  spec.prevalence = 0.64;
  return spec;
}

SynthSpec planted_ablation_spec(double effect, std::size_t n_rows,
                                std::uint64_t seed) {
  if (!(effect >= 0.0) || !std::isfinite(effect)) {
    throw ConfigError("planted effect must be >= 0");
  }
  SynthSpec spec = default_synth_spec(n_rows, seed);
  for (std::size_t g = 0; g < spec.group_distribution.size(); ++g) {
    spec.group_offsets[spec.group_distribution[g].first] =
        g % 2 == 0 ? effect : -effect;
  }
  return spec;
}

SynthSpec null_synth_spec(std::size_t n_rows, std::uint64_t seed) {
  SynthSpec spec = default_synth_spec(n_rows, seed);
  for (auto& [name, beta] : spec.coefficients) beta = 0.0;
  for (auto& [g, offset] : spec.group_offsets) offset = 0.0;
  return spec;
}

SynthSpec separable_synth_spec(std::size_t n_rows, std::uint64_t seed) {
  SynthSpec spec = default_synth_spec(n_rows, seed);
  spec.coefficients = {{"age", 3.0}, {"WC", 2.5}, {"gender", 2.0},
                       {"smoking", 1.5}};
  for (auto& [g, offset] : spec.group_offsets) offset = 0.0;
  spec.prevalence = 0.5;
  return spec;
}

namespace {

std::size_t draw_category(Rng& rng, const std::vector<double>& probabilities) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    cumulative += probabilities[i];
    if (u < cumulative) return i;
  }
  // Rounding left a sliver above the last cumulative value.
  for (std::size_t i = probabilities.size(); i-- > 0;) {
    if (probabilities[i] > 0.0) return i;
  }
  return 0;
}

double round2(double v) { return std::round(v * 100.0) / 100.0; }

double logistic(double z) {
  return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

}  // namespace

Cohort generate(const SynthSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n_rows;
  const bool grouped = !spec.group_distribution.empty();
  Rng rng(derive_seed(spec.seed, "synth"));

  std::vector<double> group_probs;
  for (const auto& [g, p] : spec.group_distribution) group_probs.push_back(p);

  const std::size_t p = spec.features.size();
  std::vector<Column> cols(p + (grouped ? 1 : 0) + 1);
  std::vector<double> score(n, 0.0), uniforms(n);
  GroundTruth truth;
  for (const auto& [g, prob] : spec.group_distribution) truth.group_counts[g] = 0;

  for (std::size_t i = 0; i < n; ++i) {
    std::string group;
    if (grouped) {
      group = spec.group_distribution[draw_category(rng, group_probs)].first;
      ++truth.group_counts[group];
      cols[p].categorical.push_back(group);
      if (auto it = spec.group_offsets.find(group); it != spec.group_offsets.end()) {
        score[i] += it->second;
      }
    }
    const auto overrides = spec.group_coefficients.find(group);
    for (std::size_t f = 0; f < p; ++f) {
      const auto& def = spec.features[f];
      double x = 0.0;
      if (def.kind == ColumnKind::kNumeric) {
        const double v = round2(def.mean + def.sd * rng.normal());
        cols[f].numeric.push_back(v);
        x = (v - def.mean) / def.sd;
      } else {
        const std::size_t level = draw_category(rng, def.probabilities);
        cols[f].categorical.push_back(def.levels[level]);
        x = static_cast<double>(level);
      }
      double beta = 0.0;
      if (auto it = spec.coefficients.find(def.name); it != spec.coefficients.end()) {
        beta = it->second;
      }
      if (overrides != spec.group_coefficients.end()) {
        if (auto it = overrides->second.find(def.name); it != overrides->second.end()) {
          beta = it->second;
        }
      }
      score[i] += beta * x;
    }
    if (spec.noise_sd > 0.0) score[i] += spec.noise_sd * rng.normal();
    uniforms[i] = rng.uniform();
  }

  // Realized prevalence is monotone in the intercept for fixed uniforms.
  auto realized = [&](double intercept) {
    std::size_t positives = 0;
    for (std::size_t i = 0; i < n; ++i) {
      positives += uniforms[i] < logistic(intercept + score[i]);
    }
    return static_cast<double>(positives) / static_cast<double>(n);
  };
  double lo = -60.0, hi = 60.0;
  for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (realized(mid) < spec.prevalence ? lo : hi) = mid;
  }
  const double intercept =
      std::abs(realized(lo) - spec.prevalence) < std::abs(realized(hi) - spec.prevalence)
          ? lo
          : hi;
  truth.intercept = intercept;

  auto& label = cols.back().categorical;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool positive = uniforms[i] < logistic(intercept + score[i]);
    positives += positive;
    label.push_back(positive ? spec.positive_label : spec.negative_label);
  }
  truth.realized_prevalence = static_cast<double>(positives) / static_cast<double>(n);
  if (positives == 0 || positives == n) {
    throw ComputeError("generated cohort has a single class");
  }

  std::vector<ColumnSchema> schema;
  for (const auto& def : spec.features) {
    schema.push_back({def.name, def.kind, ColumnRole::kFeature, ""});
  }
  if (grouped) {
    schema.push_back(
        {spec.group_column, ColumnKind::kCategorical, ColumnRole::kGroup, ""});
  }
  schema.push_back({spec.label_column, ColumnKind::kCategorical,
                    ColumnRole::kLabel, spec.positive_label});
  return Cohort{Table(std::move(schema), std::move(cols)), std::move(truth)};
}

std::string spec_to_json(const SynthSpec& spec) {
  json doc;
  doc["n_rows"] = spec.n_rows;
  doc["seed"] = spec.seed;
  doc["prevalence"] = spec.prevalence;
  doc["noise_sd"] = spec.noise_sd;
  doc["label_column"] = spec.label_column;
  doc["positive_label"] = spec.positive_label;
  doc["negative_label"] = spec.negative_label;
  doc["group_column"] = spec.group_column;
  doc["group_distribution"] = json::array();
  for (const auto& [g, p] : spec.group_distribution) {
    doc["group_distribution"].push_back({{"group", g}, {"probability", p}});
  }
  doc["features"] = json::array();
  for (const auto& f : spec.features) {
    json j;
    j["name"] = f.name;
    j["kind"] = std::string(to_string(f.kind));
    if (f.kind == ColumnKind::kNumeric) {
      j["mean"] = f.mean;
      j["sd"] = f.sd;
    } else {
      j["levels"] = f.levels;
      j["probabilities"] = f.probabilities;
    }
    doc["features"].push_back(std::move(j));
  }
  doc["coefficients"] = spec.coefficients;
  doc["group_coefficients"] = spec.group_coefficients;
  doc["group_offsets"] = spec.group_offsets;
  return doc.dump(2) + "\n";
}

SynthSpec spec_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    SynthSpec spec = default_synth_spec();
    spec.n_rows = doc.value("n_rows", spec.n_rows);
    spec.seed = doc.value("seed", spec.seed);
    spec.prevalence = doc.value("prevalence", spec.prevalence);
    spec.noise_sd = doc.value("noise_sd", spec.noise_sd);
    spec.label_column = doc.value("label_column", spec.label_column);
    spec.positive_label = doc.value("positive_label", spec.positive_label);
    spec.negative_label = doc.value("negative_label", spec.negative_label);
    spec.group_column = doc.value("group_column", spec.group_column);
    if (doc.contains("group_distribution")) {
      spec.group_distribution.clear();
      for (const auto& g : doc.at("group_distribution")) {
        spec.group_distribution.emplace_back(g.at("group").get<std::string>(),
                                             g.at("probability").get<double>());
      }
      spec.group_offsets.clear();
      spec.group_coefficients.clear();
    }
    if (doc.contains("features")) {
      spec.features.clear();
      spec.coefficients.clear();
      for (const auto& j : doc.at("features")) {
        FeatureDef f;
        f.name = j.at("name").get<std::string>();
        f.kind = parse_column_kind(j.at("kind").get<std::string>());
        if (f.kind == ColumnKind::kNumeric) {
          f.mean = j.at("mean").get<double>();
          f.sd = j.at("sd").get<double>();
        } else {
          f.levels = j.at("levels").get<std::vector<std::string>>();
          f.probabilities = j.at("probabilities").get<std::vector<double>>();
        }
        spec.features.push_back(std::move(f));
      }
    }
    if (doc.contains("coefficients")) {
      spec.coefficients = doc.at("coefficients").get<std::map<std::string, double>>();
    }
    if (doc.contains("group_coefficients")) {
      spec.group_coefficients =
          doc.at("group_coefficients")
              .get<std::map<std::string, std::map<std::string, double>>>();
    }
    if (doc.contains("group_offsets")) {
      spec.group_offsets = doc.at("group_offsets").get<std::map<std::string, double>>();
    }
    spec.validate();
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid synthetic spec JSON: ") + e.what());
  }
}

std::string truth_to_json(const SynthSpec& spec, const GroundTruth& truth) {
  json doc;
  doc["intercept"] = truth.intercept;
  doc["target_prevalence"] = spec.prevalence;
  doc["realized_prevalence"] = truth.realized_prevalence;
  doc["coefficients"] = spec.coefficients;
  doc["group_coefficients"] = spec.group_coefficients;
  doc["group_offsets"] = spec.group_offsets;
  doc["group_counts"] = truth.group_counts;
  doc["noise_sd"] = spec.noise_sd;
  doc["seed"] = spec.seed;
  return doc.dump(2) + "\n";
}

}  // namespace featrank

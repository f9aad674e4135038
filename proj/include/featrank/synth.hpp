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

#ifndef FEATRANK_SYNTH_HPP_
#define FEATRANK_SYNTH_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "featrank/table.hpp"

namespace featrank {

struct FeatureDef {
  std::string name;
  ColumnKind kind = ColumnKind::kNumeric;
  // Numeric marginal: Normal(mean, sd).
  double mean = 0.0;
  double sd = 1.0;
  // Categorical marginal. A level contributes its index to the linear score,
  // so for two levels the coefficient applies to the second one.
  std::vector<std::string> levels;
  std::vector<double> probabilities;
};

// Logistic generative model for a cohort:
//   logit P(label) = intercept + offset[group] + sum_f beta_g[f] * x_f + noise
// where x_f is the z-score of a numeric feature or the level index of a
// categorical one, beta_g = coefficients overridden by group_coefficients[g],
// and the intercept is solved so the realized prevalence matches the target.
struct SynthSpec {
  std::size_t n_rows = 1000;
  std::string group_column = "ethnicity";
  std::vector<std::pair<std::string, double>> group_distribution;
  std::vector<FeatureDef> features;
  std::map<std::string, double> coefficients;
  std::map<std::string, std::map<std::string, double>> group_coefficients;
  std::map<std::string, double> group_offsets;
  double noise_sd = 0.0;
  double prevalence = 0.64;
  std::string label_column = "CAD";
  std::string positive_label = "yes";
  std::string negative_label = "no";
  std::uint64_t seed = 0;

  // Throws ConfigError.
  void validate() const;
};

// Group shares of the reference cohort, rescaled to sum to one.
std::vector<std::pair<std::string, double>> default_group_distribution();
// Nine-attribute cohort (WC, age, BMI, DM, gender, HBP, LDL, smoking plus the
// ethnicity group) with moderate planted effects.
SynthSpec default_synth_spec(std::size_t n_rows = 1000, std::uint64_t seed = 0);
// Default features; group g shifts the log-odds by +effect (even positions in
// the group distribution) or -effect (odd positions). effect = 0 gives a
// group that carries no information. Throws ConfigError for effect < 0.
SynthSpec planted_ablation_spec(double effect, std::size_t n_rows = 5000,
                                std::uint64_t seed = 0);
// Every coefficient and offset zero: the label is independent of all
// attributes.
SynthSpec null_synth_spec(std::size_t n_rows = 5000, std::uint64_t seed = 0);
// Strong, noise-free effects on age, WC, gender and smoking.
SynthSpec separable_synth_spec(std::size_t n_rows = 2000, std::uint64_t seed = 0);

struct GroundTruth {
  double intercept = 0.0;
  double realized_prevalence = 0.0;
  std::map<std::string, std::size_t> group_counts;
};

struct Cohort {
  Table table;
  GroundTruth truth;
};

Cohort generate(const SynthSpec& spec);

std::string spec_to_json(const SynthSpec& spec);
SynthSpec spec_from_json(std::string_view text);
// Coefficients, offsets, intercept and realized statistics.
std::string truth_to_json(const SynthSpec& spec, const GroundTruth& truth);

}  // namespace featrank

#endif  // FEATRANK_SYNTH_HPP_

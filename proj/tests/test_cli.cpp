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

#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "featrank/dataio.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(FEATRANK_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t line_count(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("featrank_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("synth writes cohort, schema and truth deterministically") {
  const fs::path dir = scratch("synth");
  REQUIRE(run("synth --rows 1000 --seed 4 --out " + (dir / "a").string()) == 0);
  REQUIRE(run("synth --rows 1000 --seed 4 --out " + (dir / "b").string()) == 0);
  const std::string a = slurp(dir / "a" / "cohort.csv");
  CHECK(line_count(a) == 1001);
  CHECK(a == slurp(dir / "b" / "cohort.csv"));
  CHECK(fs::exists(dir / "a" / "schema.json"));
  CHECK(fs::exists(dir / "a" / "truth.json"));
  // The emitted spec regenerates the same cohort.
  REQUIRE(run("synth --spec " + (dir / "a" / "spec.json").string() + " --out " +
              (dir / "c").string()) == 0);
  CHECK(slurp(dir / "c" / "cohort.csv") == a);
}

TEST_CASE("weigh emits a nine-row report with the documented header") {
  const fs::path dir = scratch("weigh");
  REQUIRE(run("synth --seed 2 --out " + dir.string()) == 0);
  REQUIRE(run("weigh --data " + (dir / "cohort.csv").string() + " --schema " +
              (dir / "schema.json").string() + " --out " + (dir / "r").string() +
              " --format md") == 0);
  const std::string csv = slurp(dir / "r" / "weights.csv");
  CHECK(line_count(csv) == 10);
  CHECK(csv.rfind("attribute,information_gain_rank,information_gain_weight,", 0) == 0);
  CHECK(fs::exists(dir / "r" / "weights.md"));
}

TEST_CASE("groups writes ranking and winner tables") {
  const fs::path dir = scratch("groups");
  REQUIRE(run("synth --rows 600 --seed 3 --out " + dir.string()) == 0);
  REQUIRE(run("groups --data " + (dir / "cohort.csv").string() + " --schema " +
              (dir / "schema.json").string() + " --out " + (dir / "r").string() +
              " --folds 3 --classifiers glm,decision_tree") == 0);
  const std::string ranks = slurp(dir / "r" / "group_rankings.csv");
  CHECK(line_count(ranks) == 10);
  CHECK(ranks.find("skipped") != std::string::npos);
  CHECK(line_count(slurp(dir / "r" / "group_best.csv")) == 10);
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch("codes");
  REQUIRE(run("synth --rows 200 --out " + dir.string()) == 0);
  const std::string schema = (dir / "schema.json").string();
  CHECK(run("weigh --schema " + schema) == 1);
  CHECK(run("ablate --data " + (dir / "cohort.csv").string() + " --schema " + schema +
            " --folds 1") == 1);
  CHECK(run("ablate --data " + (dir / "cohort.csv").string() + " --schema " + schema +
            " --classifiers svm") == 1);
  std::ofstream(dir / "bad.csv") << "WC,age,BMI,DM,gender,HBP,LDL,smoking,ethnicity,CAD\n"
                                 << "1,2,3,no,male,no,4,no,Fars,yes\n"
                                 << "1,2,3,no,male,no,4,no,Fars,no\n"
                                 << "1,2,3,no,male,no,4,no,Fars,maybe\n";
  CHECK(run("weigh --data " + (dir / "bad.csv").string() + " --schema " + schema +
            " --out " + (dir / "x").string()) == 2);
  CHECK_FALSE(fs::exists(dir / "x"));
}

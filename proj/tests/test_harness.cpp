// Copyright 2026 The ztqmc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "ztqmc/error.hpp"
#include "ztqmc/harness.hpp"

using namespace ztqmc;

namespace {

ExperimentConfig small_anneal() {
  ExperimentConfig c;
  c.mode = RunMode::anneal;
  c.n = 8;
  c.plackets = 40;
  c.omega_in = 2.0;
  c.steps = 2000;
  c.instances = 4;
  c.repetitions = 2;
  c.seed_base = 2026;
  return c;
}

std::string summary_text(const EnsembleSummary& s) {
  std::ostringstream os;
  write_summary_csv(s, os);
  return os.str();
}

}  // namespace

TEST_CASE("config JSON parsing") {
  const auto j = nlohmann::json::parse(R"({
    "mode": "preanneal", "n": 12, "L": 240, "T": 50000, "omega_in": 2.0,
    "omega_target": 0.5, "prefix_steps": 50000, "instances": 20,
    "seed_base": 9, "short_window": 100, "long_window": 1000, "threads": 2
  })");
  const auto c = config_from_json(j);
  CHECK(c.mode == RunMode::preanneal);
  CHECK(c.n == 12);
  CHECK(c.resolved_plackets() == 240);
  CHECK(c.omega_target == 0.5);
  CHECK(c.windows.short_window == 100);
  CHECK(config_from_json(to_json(c)).steps == c.steps);

  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"bogus": 1})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"mode": "static", "omega_target": 0})")),
                  ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"mode": "warp"})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"n": "ten"})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"mode": "preanneal", "omega_in": 0.1, "omega_target": 0.5})")),
                  ConfigError);
  CHECK(config_from_json(nlohmann::json::object()).resolved_plackets() == 200);
}

TEST_CASE("seed derivation is stable and distinct") {
  CHECK(cell_seed(1, 0, 0) != cell_seed(1, 0, 1));
  CHECK(cell_seed(1, 0, 0) != cell_seed(1, 1, 0));
  CHECK(cell_seed(1, 0, 0) != cell_seed(2, 0, 0));
  CHECK(instance_seed(1, 0) != cell_seed(1, 0, 0));
  CHECK(instance_seed(7, 3) == mix_seed(7, 4, 0));
}

TEST_CASE("ensemble_run is deterministic and thread-count independent") {
  auto config = small_anneal();
  const auto serial = summary_text(ensemble_run(config));
  CHECK(serial == summary_text(ensemble_run(config)));
  config.threads = 3;
  CHECK(serial == summary_text(ensemble_run(config)));

  std::istringstream lines(serial);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "instance_seed,rep,final_energy,oracle_energy,success,mean_density,stderr");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == 8);
}

TEST_CASE("ensemble success implies exact oracle energy") {
  const auto summary = ensemble_run(small_anneal());
  for (const auto& c : summary.cells) {
    REQUIRE(c.ok());
    REQUIRE(c.oracle_energy);
    CHECK(c.final_energy >= *c.oracle_energy);
    if (*c.success()) CHECK(c.final_energy == *c.oracle_energy);
  }
  CHECK(summary.success_rate());
  CHECK(summary.cells[0].instance == 0);
  CHECK(summary.cells[1].rep == 1);
}

TEST_CASE("ensemble errors") {
  auto config = small_anneal();
  config.instances = 0;
  CHECK_THROWS_AS(ensemble_run(config), ConfigError);
  config = small_anneal();
  config.mode = RunMode::compare;
  config.omega_target = 0.5;
  CHECK_THROWS_AS(ensemble_run(config), ConfigError);
}

TEST_CASE("static ensemble attaches the eigen oracle") {
  ExperimentConfig c;
  c.mode = RunMode::static_field;
  c.n = 6;
  c.plackets = 60;
  c.omega_target = 1.0;
  c.steps = 2000;
  c.burn_in = 500;
  c.instances = 2;
  const auto s = ensemble_run(c);
  for (const auto& cell : s.cells) CHECK(cell.eigen_density.has_value());
  CHECK(s.mean_abs_eigen_error().has_value());
}

TEST_CASE("trajectory CSV") {
  std::ostringstream os;
  write_trajectory_csv({{500, 1.5, -0.5, 0.25}}, os);
  CHECK(os.str() == "step,omega,energy_density,accept_rate\n500,1.5,-0.5,0.25\n");
}

TEST_CASE("parallel_for visits every index once") {
  std::vector<int> hits(100, 0);
  parallel_for(100, 4, [&](int i) { ++hits[static_cast<std::size_t>(i)]; });
  for (int h : hits) CHECK(h == 1);
}

TEST_CASE("shipped presets parse and validate") {
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(ZTQMC_PRESET_DIR)) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    const auto c = load_config(entry.path());
    CHECK_NOTHROW(validate_config(c));
    CHECK(c.instances > 0);
    ++count;
  }
  CHECK(count >= 4);
}

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

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ztqmc/anneal.hpp"
#include "ztqmc/instance.hpp"

namespace ztqmc {

enum class RunMode { anneal, static_field, preanneal, compare };

RunMode parse_mode(const std::string& s);
std::string to_string(RunMode m);

/// Everything needed to reproduce a run or an ensemble; all seeds explicit.
struct ExperimentConfig {
  RunMode mode = RunMode::anneal;
  /// Instance file; when absent instances are generated from n and the seeds.
  std::optional<std::filesystem::path> instance_path;
  int n = 10;
  /// Instance seed for single runs.
  std::uint64_t seed = 1;
  /// 0 means the default, 20 plackets per spin.
  int plackets = 0;
  double omega_in = 2.0;
  /// Annealing: schedule length. Static modes: measured steps.
  std::int64_t steps = 200000;
  double cutoff_fraction = 0.95;
  /// Static field, or the target of a pre-annealed run.
  double omega_target = 1.0;
  std::int64_t burn_in = 10000;
  std::int64_t prefix_steps = 10000;
  WindowSizes windows;
  int instances = 1;
  std::uint64_t seed_base = 1;
  int repetitions = 1;
  std::filesystem::path out_dir = ".";
  int threads = 1;
  /// Exhaustive ground states are attached for N up to this size.
  int oracle_cap = 24;
  /// Ensemble sweeps: one summary per value.
  std::vector<std::int64_t> steps_sweep;
  std::vector<double> omega_sweep;

  int resolved_plackets() const { return plackets > 0 ? plackets : default_plackets(n); }
};

/// Unknown keys and inconsistent values raise ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& c);
ExperimentConfig load_config(const std::filesystem::path& path);
void validate_config(const ExperimentConfig& c);

/// Seed of the i-th generated instance of an ensemble.
std::uint64_t instance_seed(std::uint64_t seed_base, int instance);
/// Run seed of one (instance, repetition) cell.
std::uint64_t cell_seed(std::uint64_t seed_base, int instance, int rep);

struct EnsembleCell {
  int instance = 0;
  int rep = 0;
  std::uint64_t instance_seed = 0;
  std::int64_t final_energy = 0;
  std::optional<std::int64_t> oracle_energy;
  /// Mean density over the measured steps and its standard error.
  double mean_density = 0.0;
  double standard_error = 0.0;
  /// Power-iteration classical expectation (density) for static modes.
  std::optional<double> eigen_density;
  std::string error;

  bool ok() const { return error.empty(); }
  std::optional<bool> success() const {
    if (!ok() || !oracle_energy) return std::nullopt;
    return final_energy == *oracle_energy;
  }
};

struct EnsembleSummary {
  int n = 0;
  RunMode mode = RunMode::anneal;
  std::vector<EnsembleCell> cells;

  /// Fraction of cells (with an oracle) that reached the ground state.
  std::optional<double> success_rate() const;
  double mean_final_density() const;
  /// Mean |mean_density - eigen_density| over cells with an eigen oracle.
  std::optional<double> mean_abs_eigen_error() const;
};

/// Runs every (instance, repetition) cell of the config in a work pool of
/// config.threads workers. Output order is config order; a cell that throws
/// records its error and the rest continue. Throws ConfigError for an empty
/// ensemble or for mode compare, which the CLI expands into a static and a
/// pre-annealed ensemble.
EnsembleSummary ensemble_run(const ExperimentConfig& config);

/// Run a single cell's Monte Carlo for the config's mode.
RunReport run_cell(const ExperimentConfig& config, const SpinGlassInstance& inst,
                   std::uint64_t seed);

/// Header: instance_seed,rep,final_energy,oracle_energy,success,mean_density,stderr
void write_summary_csv(const EnsembleSummary& s, std::ostream& out);
/// Header: step,omega,energy_density,accept_rate
void write_trajectory_csv(const std::vector<TrajectoryRow>& rows, std::ostream& out);

nlohmann::json report_to_json(const RunReport& r, const SpinGlassInstance& inst);

/// Work pool: calls job(i) for every i in [0, count) on `threads` workers.
void parallel_for(int count, int threads, const std::function<void(int)>& job);

}  // namespace ztqmc

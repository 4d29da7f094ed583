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
#include <functional>
#include <vector>

#include "ztqmc/chain.hpp"
#include "ztqmc/instance.hpp"

namespace ztqmc {

/// Linear ramp of the transverse field from omega_in at t = 0 down to zero at
/// t = cutoff_fraction * total_steps, held at zero afterwards.
struct AnnealSchedule {
  double omega_in = 1.0;
  std::int64_t total_steps = 0;
  double cutoff_fraction = 0.95;
};

/// Throws ConfigError for a malformed schedule and IndexOutOfRange for t
/// outside [0, total_steps].
double omega_at(const AnnealSchedule& s, std::int64_t t);

/// Ramp used before static sampling: omega goes linearly from omega_in at
/// t = 0 to the target at t = steps.
struct PrefixRamp {
  double omega_in = 1.0;
  std::int64_t steps = 0;
};

/// Averaging windows for the emitted trajectories, in Monte Carlo steps.
struct WindowSizes {
  std::int64_t short_window = 500;
  std::int64_t long_window = 10000;
};

/// One row of the trajectory stream.
struct TrajectoryRow {
  /// Steps completed at the end of the window.
  std::int64_t step = 0;
  /// Mean field over the window.
  double omega = 0.0;
  double energy_density = 0.0;
  double accept_rate = 0.0;
};

struct RunReport {
  std::vector<TrajectoryRow> short_trajectory;
  std::vector<TrajectoryRow> long_trajectory;
  /// Lowest-energy placket of the final chain.
  SpinConfiguration final_configuration;
  std::int64_t final_raw_energy = 0;
  StepStats stats;
  double wall_seconds = 0.0;
  /// Mean of the per-step chain energy density over the measured steps, with
  /// its batch-means standard error. Static modes measure after burn-in or
  /// the ramp; annealing measures its zero-field tail.
  double sampled_mean_density = 0.0;
  double sampled_stderr = 0.0;
  std::int64_t measured_steps = 0;
};

/// Default ring length, 20 plackets per spin.
constexpr int default_plackets(int n) { return 20 * n; }

/// Quantum annealing to omega = 0. The field is updated once per step,
/// before the step's L visits.
RunReport run_annealed(const SpinGlassInstance& inst, int plackets,
                       const AnnealSchedule& schedule, std::uint64_t seed,
                       const WindowSizes& windows = {});

/// Fixed-field sampling: burn_in unmeasured steps, then `steps` measured.
RunReport run_static(const SpinGlassInstance& inst, int plackets, double omega,
                     std::int64_t steps, std::int64_t burn_in,
                     std::uint64_t seed, const WindowSizes& windows = {});

/// Ramp from prefix.omega_in to omega_target over prefix.steps, then hold the
/// target for `steps` measured steps. With prefix.omega_in == omega_target
/// this is the same process as run_static with burn_in = prefix.steps.
RunReport run_preannealed_static(const SpinGlassInstance& inst, int plackets,
                                 double omega_target, const PrefixRamp& prefix,
                                 std::int64_t steps, std::uint64_t seed,
                                 const WindowSizes& windows = {});

/// Generic driver behind the three modes. `omega_of(t)` gives the field for
/// step t; steps with t >= measure_from enter the sampled mean.
RunReport run_schedule(const SpinGlassInstance& inst, int plackets,
                       const std::function<double(std::int64_t)>& omega_of,
                       std::int64_t total_steps, std::int64_t measure_from,
                       std::uint64_t seed, const WindowSizes& windows);

/// Initial placket configuration for a run: uniform random bits from the run
/// generator, redrawn while C - E would vanish (a zero-weight uniform ring).
SpinConfiguration initial_configuration(const SpinGlassInstance& inst, Rng& rng);

/// Batch-means estimate of the mean and its standard error.
struct MeanEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};
MeanEstimate batch_means(const std::vector<double>& series, int batches = 50);

}  // namespace ztqmc

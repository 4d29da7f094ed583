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

#include "ztqmc/anneal.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "ztqmc/error.hpp"

namespace ztqmc {

double omega_at(const AnnealSchedule& s, std::int64_t t) {
  if (!(s.omega_in > 0.0) || s.total_steps <= 0 ||
      !(s.cutoff_fraction > 0.0 && s.cutoff_fraction <= 1.0)) {
    throw ConfigError("schedule needs omega_in > 0, total_steps > 0, "
                      "cutoff_fraction in (0, 1]");
  }
  if (t < 0 || t > s.total_steps) {
    throw IndexOutOfRange("step " + std::to_string(t) + " outside schedule");
  }
  const double ramp = s.cutoff_fraction * static_cast<double>(s.total_steps);
  return std::max(0.0, s.omega_in * (1.0 - static_cast<double>(t) / ramp));
}

SpinConfiguration initial_configuration(const SpinGlassInstance& inst, Rng& rng) {
  const int n = inst.size();
  for (;;) {
    const std::uint64_t bits = rng.next() & spin_mask(n);
    if (inst.energy(bits) < inst.pair_count()) return {n, bits};
  }
}

MeanEstimate batch_means(const std::vector<double>& series, int batches) {
  MeanEstimate est;
  if (series.empty()) return est;
  est.mean = std::accumulate(series.begin(), series.end(), 0.0) /
             static_cast<double>(series.size());
  const auto b = static_cast<std::size_t>(
      std::min<std::size_t>(static_cast<std::size_t>(batches), series.size()));
  if (b < 2) return est;
  const std::size_t width = series.size() / b;
  std::vector<double> means;
  means.reserve(b);
  for (std::size_t k = 0; k < b; ++k) {
    const auto first = series.begin() + static_cast<std::ptrdiff_t>(k * width);
    means.push_back(std::accumulate(first, first + static_cast<std::ptrdiff_t>(width), 0.0) /
                    static_cast<double>(width));
  }
  const double m = std::accumulate(means.begin(), means.end(), 0.0) /
                   static_cast<double>(b);
  double ss = 0.0;
  for (const double x : means) ss += (x - m) * (x - m);
  est.standard_error = std::sqrt(ss / static_cast<double>(b - 1) / static_cast<double>(b));
  return est;
}

namespace {

class WindowAccumulator {
 public:
  explicit WindowAccumulator(std::int64_t width) : width_(width) {}

  void add(std::int64_t step_done, double omega, double density,
           const StepStats& s, std::vector<TrajectoryRow>& out) {
    if (width_ <= 0) return;
    omega_ += omega;
    density_ += density;
    proposed_ += s.proposed;
    accepted_ += s.accepted;
    last_step_ = step_done;
    if (++count_ == width_) flush(out);
  }

  void flush(std::vector<TrajectoryRow>& out) {
    if (count_ == 0) return;
    const auto c = static_cast<double>(count_);
    out.push_back({last_step_, omega_ / c, density_ / c,
                   proposed_ > 0 ? static_cast<double>(accepted_) /
                                       static_cast<double>(proposed_)
                                 : 0.0});
    omega_ = density_ = 0.0;
    proposed_ = accepted_ = count_ = 0;
  }

 private:
  std::int64_t width_;
  double omega_ = 0.0;
  double density_ = 0.0;
  std::int64_t proposed_ = 0;
  std::int64_t accepted_ = 0;
  std::int64_t count_ = 0;
  std::int64_t last_step_ = 0;
};

}  // namespace

RunReport run_schedule(const SpinGlassInstance& inst, int plackets,
                       const std::function<double(std::int64_t)>& omega_of,
                       std::int64_t total_steps, std::int64_t measure_from,
                       std::uint64_t seed, const WindowSizes& windows) {
  if (plackets < 2) throw InvalidSize("a placket chain needs at least 2 plackets");
  if (total_steps < 0) throw ConfigError("negative step count");
  const auto start = std::chrono::steady_clock::now();

  Rng rng(seed);
  PlacketChain chain(inst, initial_configuration(inst, rng), plackets);
  TransferOperator op(inst, omega_of(0));

  RunReport report;
  WindowAccumulator short_acc(windows.short_window);
  WindowAccumulator long_acc(windows.long_window);
  std::vector<double> sampled;
  if (total_steps > measure_from) {
    sampled.reserve(static_cast<std::size_t>(total_steps - measure_from));
  }

  for (std::int64_t t = 0; t < total_steps; ++t) {
    const double omega = omega_of(t);
    if (omega != op.omega()) op = op.with_omega(omega);
    const StepStats s = mc_step(chain, op, rng);
    report.stats += s;
    const double density = measure(chain, t, omega).mean_intensive_energy;
    if (t >= measure_from) sampled.push_back(density);
    short_acc.add(t + 1, omega, density, s, report.short_trajectory);
    long_acc.add(t + 1, omega, density, s, report.long_trajectory);
  }
  short_acc.flush(report.short_trajectory);
  long_acc.flush(report.long_trajectory);

  const int best = chain.lowest_placket();
  report.final_configuration = chain.placket(best);
  report.final_raw_energy = chain.energy(best);
  const MeanEstimate est = batch_means(sampled);
  report.sampled_mean_density = est.mean;
  report.sampled_stderr = est.standard_error;
  report.measured_steps = static_cast<std::int64_t>(sampled.size());
  report.wall_seconds = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
  return report;
}

RunReport run_annealed(const SpinGlassInstance& inst, int plackets,
                       const AnnealSchedule& schedule, std::uint64_t seed,
                       const WindowSizes& windows) {
  omega_at(schedule, 0);  // validates the schedule
  // The zero-field tail is what gets averaged into sampled_mean_density.
  const auto tail = static_cast<std::int64_t>(std::ceil(
      schedule.cutoff_fraction * static_cast<double>(schedule.total_steps)));
  return run_schedule(
      inst, plackets, [&](std::int64_t t) { return omega_at(schedule, t); },
      schedule.total_steps, std::min(tail, schedule.total_steps - 1), seed,
      windows);
}

RunReport run_static(const SpinGlassInstance& inst, int plackets, double omega,
                     std::int64_t steps, std::int64_t burn_in,
                     std::uint64_t seed, const WindowSizes& windows) {
  if (!(omega > 0.0)) throw ConfigError("static sampling needs omega > 0");
  if (steps < 0 || burn_in < 0) throw ConfigError("negative step count");
  return run_schedule(
      inst, plackets, [omega](std::int64_t) { return omega; }, burn_in + steps,
      burn_in, seed, windows);
}

RunReport run_preannealed_static(const SpinGlassInstance& inst, int plackets,
                                 double omega_target, const PrefixRamp& prefix,
                                 std::int64_t steps, std::uint64_t seed,
                                 const WindowSizes& windows) {
  if (!(omega_target > 0.0)) throw ConfigError("pre-annealing needs omega_target > 0");
  if (!(prefix.omega_in >= omega_target)) {
    throw ConfigError("ramp must start at or above the target field");
  }
  if (steps < 0 || prefix.steps < 0) throw ConfigError("negative step count");
  const double span = prefix.omega_in - omega_target;
  const auto ramp = static_cast<double>(prefix.steps);
  return run_schedule(
      inst, plackets,
      [=](std::int64_t t) {
        if (t >= prefix.steps) return omega_target;
        return prefix.omega_in - span * (static_cast<double>(t) / ramp);
      },
      prefix.steps + steps, prefix.steps, seed, windows);
}

}  // namespace ztqmc

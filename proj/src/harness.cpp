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

#include "ztqmc/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <thread>

#include "ztqmc/error.hpp"
#include "ztqmc/oracle.hpp"
#include "ztqmc/rng.hpp"
#include "ztqmc/transfer.hpp"

namespace ztqmc {

RunMode parse_mode(const std::string& s) {
  if (s == "anneal") return RunMode::anneal;
  if (s == "static") return RunMode::static_field;
  if (s == "preanneal") return RunMode::preanneal;
  if (s == "compare") return RunMode::compare;
  throw ConfigError("unknown mode '" + s + "'");
}

std::string to_string(RunMode m) {
  switch (m) {
    case RunMode::anneal: return "anneal";
    case RunMode::static_field: return "static";
    case RunMode::preanneal: return "preanneal";
    case RunMode::compare: return "compare";
  }
  return "?";
}

namespace {

template <typename T>
void read(const nlohmann::json& j, const char* key, T& dst) {
  if (j.contains(key)) dst = j.at(key).get<T>();
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& j) {
  static const std::set<std::string> known = {
      "mode",       "instance",   "n",           "seed",         "L",
      "omega_in",   "T",          "cutoff_fraction", "omega_target", "burn_in",
      "prefix_steps", "short_window", "long_window", "instances",  "seed_base",
      "repetitions", "out",       "threads",     "oracle_cap",   "steps_sweep",
      "omega_sweep"};
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  ExperimentConfig c;
  try {
    if (j.contains("mode")) c.mode = parse_mode(j.at("mode").get<std::string>());
    if (j.contains("instance")) c.instance_path = j.at("instance").get<std::string>();
    read(j, "n", c.n);
    read(j, "seed", c.seed);
    read(j, "L", c.plackets);
    read(j, "omega_in", c.omega_in);
    read(j, "T", c.steps);
    read(j, "cutoff_fraction", c.cutoff_fraction);
    read(j, "omega_target", c.omega_target);
    read(j, "burn_in", c.burn_in);
    read(j, "prefix_steps", c.prefix_steps);
    read(j, "short_window", c.windows.short_window);
    read(j, "long_window", c.windows.long_window);
    read(j, "instances", c.instances);
    read(j, "seed_base", c.seed_base);
    read(j, "repetitions", c.repetitions);
    if (j.contains("out")) c.out_dir = j.at("out").get<std::string>();
    read(j, "threads", c.threads);
    read(j, "oracle_cap", c.oracle_cap);
    read(j, "steps_sweep", c.steps_sweep);
    read(j, "omega_sweep", c.omega_sweep);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  validate_config(c);
  return c;
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j = {{"mode", to_string(c.mode)},
                      {"n", c.n},
                      {"seed", c.seed},
                      {"L", c.plackets},
                      {"omega_in", c.omega_in},
                      {"T", c.steps},
                      {"cutoff_fraction", c.cutoff_fraction},
                      {"omega_target", c.omega_target},
                      {"burn_in", c.burn_in},
                      {"prefix_steps", c.prefix_steps},
                      {"short_window", c.windows.short_window},
                      {"long_window", c.windows.long_window},
                      {"instances", c.instances},
                      {"seed_base", c.seed_base},
                      {"repetitions", c.repetitions},
                      {"out", c.out_dir.string()},
                      {"threads", c.threads},
                      {"oracle_cap", c.oracle_cap},
                      {"steps_sweep", c.steps_sweep},
                      {"omega_sweep", c.omega_sweep}};
  if (c.instance_path) j["instance"] = c.instance_path->string();
  return j;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  try {
    return config_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("cannot parse " + path.string() + ": " + e.what());
  }
}

void validate_config(const ExperimentConfig& c) {
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw ConfigError(msg);
  };
  require(c.instance_path || (c.n >= 2 && c.n <= kMaxSpins), "n must be in [2, 64]");
  require(c.plackets == 0 || c.plackets >= 2, "L must be at least 2");
  require(c.steps >= 1, "T must be positive");
  require(c.burn_in >= 0 && c.prefix_steps >= 0, "burn_in and prefix_steps must be non-negative");
  require(c.cutoff_fraction > 0.0 && c.cutoff_fraction <= 1.0, "cutoff_fraction must be in (0, 1]");
  require(c.instances >= 0 && c.repetitions >= 0, "instances and repetitions must be non-negative");
  require(c.threads >= 1, "threads must be at least 1");
  require(c.windows.short_window >= 0 && c.windows.long_window >= 0, "window sizes must be non-negative");
  if (c.mode == RunMode::anneal || c.mode == RunMode::preanneal || c.mode == RunMode::compare) {
    require(c.omega_in > 0.0, "omega_in must be positive");
  }
  if (c.mode != RunMode::anneal) {
    require(c.omega_target > 0.0, "static sampling requires omega_target > 0");
    for (double w : c.omega_sweep) require(w > 0.0, "omega_sweep values must be positive");
  }
  if (c.mode == RunMode::preanneal || c.mode == RunMode::compare) {
    require(c.omega_in >= c.omega_target, "omega_in must not be below omega_target");
    for (double w : c.omega_sweep) require(c.omega_in >= w, "omega_in must not be below swept omega");
  }
  for (auto t : c.steps_sweep) require(t >= 1, "steps_sweep values must be positive");
}

std::uint64_t instance_seed(std::uint64_t seed_base, int instance) {
  return mix_seed(seed_base, static_cast<std::uint64_t>(instance) + 1, 0);
}

std::uint64_t cell_seed(std::uint64_t seed_base, int instance, int rep) {
  return mix_seed(seed_base, static_cast<std::uint64_t>(instance) + 1,
                  static_cast<std::uint64_t>(rep) + 1);
}

void parallel_for(int count, int threads, const std::function<void(int)>& job) {
  if (count <= 0) return;
  const int workers = std::clamp(threads, 1, count);
  if (workers == 1) {
    for (int i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) job(i);
    });
  }
}

RunReport run_cell(const ExperimentConfig& config, const SpinGlassInstance& inst,
                   std::uint64_t seed) {
  const int plackets = config.plackets > 0 ? config.plackets : default_plackets(inst.size());
  switch (config.mode) {
    case RunMode::anneal:
      return run_annealed(inst, plackets,
                          {config.omega_in, config.steps, config.cutoff_fraction},
                          seed, config.windows);
    case RunMode::static_field:
      return run_static(inst, plackets, config.omega_target, config.steps,
                        config.burn_in, seed, config.windows);
    case RunMode::preanneal:
      return run_preannealed_static(inst, plackets, config.omega_target,
                                    {config.omega_in, config.prefix_steps},
                                    config.steps, seed, config.windows);
    case RunMode::compare:
      break;
  }
  throw ConfigError("compare mode expands into separate ensembles");
}

EnsembleSummary ensemble_run(const ExperimentConfig& config) {
  validate_config(config);
  if (config.mode == RunMode::compare) {
    throw ConfigError("compare mode expands into separate ensembles");
  }
  std::vector<SpinGlassInstance> instances;
  if (config.instance_path) {
    instances.push_back(load_instance(*config.instance_path));
  } else {
    for (int i = 0; i < config.instances; ++i) {
      instances.push_back(random_instance(config.n, instance_seed(config.seed_base, i)));
    }
  }
  const int cells = static_cast<int>(instances.size()) * config.repetitions;
  if (cells == 0) throw ConfigError("empty ensemble");

  // Oracles are per instance and shared by its repetitions.
  const int n = instances.front().size();
  std::vector<std::optional<std::int64_t>> ground(instances.size());
  std::vector<std::optional<double>> eigen(instances.size());
  const bool want_eigen = config.mode != RunMode::anneal && n <= kEigenMaxSpins;
  parallel_for(static_cast<int>(instances.size()), config.threads, [&](int i) {
    const auto& inst = instances[static_cast<std::size_t>(i)];
    if (inst.size() <= std::min(config.oracle_cap, kGroundStateMaxSpins)) {
      ground[static_cast<std::size_t>(i)] = exhaustive_ground_state(inst).energy;
    }
    if (want_eigen && inst.size() <= config.oracle_cap) {
      try {
        const auto res = dominant_eigenpair(TransferOperator(inst, config.omega_target));
        eigen[static_cast<std::size_t>(i)] = intensive_energy(res.classical_expectation, inst.size());
      } catch (const Error&) {
        // Left empty; the cell still runs.
      }
    }
  });

  EnsembleSummary summary;
  summary.n = n;
  summary.mode = config.mode;
  summary.cells.resize(static_cast<std::size_t>(cells));
  parallel_for(cells, config.threads, [&](int c) {
    const int i = c / config.repetitions;
    const int rep = c % config.repetitions;
    const auto& inst = instances[static_cast<std::size_t>(i)];
    EnsembleCell& cell = summary.cells[static_cast<std::size_t>(c)];
    cell.instance = i;
    cell.rep = rep;
    cell.instance_seed = inst.seed();
    cell.oracle_energy = ground[static_cast<std::size_t>(i)];
    cell.eigen_density = eigen[static_cast<std::size_t>(i)];
    try {
      const RunReport r = run_cell(config, inst, cell_seed(config.seed_base, i, rep));
      cell.final_energy = r.final_raw_energy;
      cell.mean_density = r.sampled_mean_density;
      cell.standard_error = r.sampled_stderr;
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  });
  return summary;
}

std::optional<double> EnsembleSummary::success_rate() const {
  int hits = 0, total = 0;
  for (const auto& c : cells) {
    if (const auto s = c.success()) {
      ++total;
      hits += *s ? 1 : 0;
    }
  }
  if (total == 0) return std::nullopt;
  return static_cast<double>(hits) / total;
}

double EnsembleSummary::mean_final_density() const {
  double sum = 0.0;
  int count = 0;
  for (const auto& c : cells) {
    if (!c.ok()) continue;
    sum += intensive_energy(static_cast<double>(c.final_energy), n);
    ++count;
  }
  return count > 0 ? sum / count : 0.0;
}

std::optional<double> EnsembleSummary::mean_abs_eigen_error() const {
  double sum = 0.0;
  int count = 0;
  for (const auto& c : cells) {
    if (!c.ok() || !c.eigen_density) continue;
    sum += std::abs(c.mean_density - *c.eigen_density);
    ++count;
  }
  if (count == 0) return std::nullopt;
  return sum / count;
}

namespace {

std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace

void write_summary_csv(const EnsembleSummary& s, std::ostream& out) {
  out << "instance_seed,rep,final_energy,oracle_energy,success,mean_density,stderr\n";
  for (const auto& c : s.cells) {
    out << c.instance_seed << ',' << c.rep << ',';
    if (c.ok()) out << c.final_energy;
    out << ',';
    if (c.oracle_energy) out << *c.oracle_energy;
    out << ',';
    if (const auto ok = c.success()) out << (*ok ? 1 : 0);
    out << ',';
    if (c.ok()) out << fmt_double(c.mean_density) << ',' << fmt_double(c.standard_error);
    else out << ',';
    out << '\n';
  }
}

void write_trajectory_csv(const std::vector<TrajectoryRow>& rows, std::ostream& out) {
  out << "step,omega,energy_density,accept_rate\n";
  for (const auto& r : rows) {
    out << r.step << ',' << fmt_double(r.omega) << ',' << fmt_double(r.energy_density)
        << ',' << fmt_double(r.accept_rate) << '\n';
  }
}

nlohmann::json report_to_json(const RunReport& r, const SpinGlassInstance& inst) {
  return {{"final_configuration", r.final_configuration.to_string()},
          {"final_raw_energy", r.final_raw_energy},
          {"final_density", intensive_energy(static_cast<double>(r.final_raw_energy), inst.size())},
          {"proposed", r.stats.proposed},
          {"allowed", r.stats.allowed},
          {"accepted", r.stats.accepted},
          {"sampled_mean_density", r.sampled_mean_density},
          {"sampled_stderr", r.sampled_stderr},
          {"measured_steps", r.measured_steps},
          {"wall_seconds", r.wall_seconds}};
}

}  // namespace ztqmc

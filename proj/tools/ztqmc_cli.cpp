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

// Command-line front end: instance generation, landscape analysis, single
// runs, spectral oracle, ensembles and the acceptance suite.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <json.hpp>

#include "ztqmc/error.hpp"
#include "ztqmc/harness.hpp"
#include "ztqmc/oracle.hpp"
#include "ztqmc/transfer.hpp"
#include "ztqmc/validation.hpp"

namespace fs = std::filesystem;
using namespace ztqmc;

namespace {

struct Overrides {
  std::string config;
  std::string out;
  std::string instance;
  std::string mode;
  std::optional<int> threads, n, plackets;
  std::optional<std::uint64_t> seed, seed_base;
  std::optional<double> omega_in, omega;
  std::optional<std::int64_t> steps, burn_in, prefix_steps;
  std::optional<int> instances, repetitions;
};

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config, "JSON experiment config");
  app->add_option("--out", o.out, "output directory");
  app->add_option("--threads", o.threads, "worker threads");
}

void add_instance(CLI::App* app, Overrides& o) {
  app->add_option("--instance", o.instance, "instance JSON file");
  app->add_option("--n", o.n, "number of spins for a generated instance");
  app->add_option("--seed", o.seed, "seed of a generated instance");
}

void add_run(CLI::App* app, Overrides& o) {
  app->add_option("--plackets", o.plackets, "ring length L (default 20 N)");
  app->add_option("--omega-in", o.omega_in, "initial transverse field");
  app->add_option("--omega", o.omega, "static or target transverse field");
  app->add_option("--steps", o.steps, "annealing length, or measured steps for static modes");
  app->add_option("--burn-in", o.burn_in, "unmeasured static steps");
  app->add_option("--prefix-steps", o.prefix_steps, "length of the pre-annealing ramp");
}

ExperimentConfig resolve(const Overrides& o, std::optional<RunMode> forced) {
  ExperimentConfig c = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
  if (forced) c.mode = *forced;
  if (!o.mode.empty()) c.mode = parse_mode(o.mode);
  if (!o.out.empty()) c.out_dir = o.out;
  if (!o.instance.empty()) c.instance_path = fs::path(o.instance);
  if (o.threads) c.threads = *o.threads;
  if (o.n) c.n = *o.n;
  if (o.seed) c.seed = *o.seed;
  if (o.seed_base) c.seed_base = *o.seed_base;
  if (o.plackets) c.plackets = *o.plackets;
  if (o.omega_in) c.omega_in = *o.omega_in;
  if (o.omega) c.omega_target = *o.omega;
  if (o.steps) c.steps = *o.steps;
  if (o.burn_in) c.burn_in = *o.burn_in;
  if (o.prefix_steps) c.prefix_steps = *o.prefix_steps;
  if (o.instances) c.instances = *o.instances;
  if (o.repetitions) c.repetitions = *o.repetitions;
  validate_config(c);
  return c;
}

SpinGlassInstance single_instance(const ExperimentConfig& c) {
  if (c.instance_path) return load_instance(*c.instance_path);
  return random_instance(c.n, c.seed);
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream f(dir / name);
  if (!f) throw Error("cannot write " + (dir / name).string());
  return f;
}

void write_json(const fs::path& dir, const std::string& name, const nlohmann::json& j) {
  auto f = open_out(dir, name);
  f << j.dump(2) << "\n";
}

int cmd_gen(const ExperimentConfig& c) {
  const auto inst = random_instance(c.n, c.seed);
  fs::create_directories(c.out_dir);
  const auto path = c.out_dir / "instance.json";
  save_instance(inst, path);
  std::cout << path.string() << "\n";
  return 0;
}

int cmd_landscape(const ExperimentConfig& c, int starts, std::int64_t moves) {
  const auto inst = single_instance(c);
  const auto gs = exhaustive_ground_state(inst, kGroundStateMaxSpins, c.threads);
  const auto dos = density_of_states(inst);
  {
    auto f = open_out(c.out_dir, "dos.csv");
    f << "energy,count\n";
    for (const auto& [e, k] : dos.histogram) f << e << "," << k << "\n";
  }
  const auto path = flip_path_profile(inst);
  {
    auto f = open_out(c.out_dir, "flip_path.csv");
    f << "flip_index,energy\n";
    for (std::size_t k = 0; k < path.size(); ++k) f << k << "," << path[k] << "\n";
  }
  int hits = 0;
  {
    auto f = open_out(c.out_dir, "greedy.csv");
    f << "start,moves_used,final_energy,local_minimum,ground_state\n";
    Rng rng(mix_seed(inst.seed(), 0x9eedULL, 0));
    for (int s = 0; s < starts; ++s) {
      const SpinConfiguration start(inst.size(), rng.next() & spin_mask(inst.size()));
      const auto g = greedy_downhill(inst, start, moves, rng.next());
      const bool hit = g.final_energy == gs.energy;
      hits += hit ? 1 : 0;
      f << s << "," << g.moves_used << "," << g.final_energy << "," << (g.local_minimum ? 1 : 0)
        << "," << (hit ? 1 : 0) << "\n";
    }
  }
  write_json(c.out_dir, "landscape.json",
             {{"n", inst.size()},
              {"seed", inst.seed()},
              {"ground_energy", gs.energy},
              {"ground_density", intensive_energy(static_cast<double>(gs.energy), inst.size())},
              {"degeneracy", gs.degeneracy},
              {"peak_count", dos.peak_count()},
              {"greedy_starts", starts},
              {"greedy_hits", hits}});
  std::cout << "E0 " << gs.energy << " degeneracy " << gs.degeneracy << " greedy hits "
            << hits << "/" << starts << "\n";
  return 0;
}

int cmd_run(const ExperimentConfig& c) {
  const auto inst = single_instance(c);
  const auto report = run_cell(c, inst, mix_seed(inst.seed(), c.seed_base, 0));
  auto j = report_to_json(report, inst);
  j["mode"] = to_string(c.mode);
  j["config"] = to_json(c);
  write_json(c.out_dir, "report.json", j);
  {
    auto f = open_out(c.out_dir, "trajectory_short.csv");
    write_trajectory_csv(report.short_trajectory, f);
  }
  {
    auto f = open_out(c.out_dir, "trajectory_long.csv");
    write_trajectory_csv(report.long_trajectory, f);
  }
  std::cout << "final energy " << report.final_raw_energy << " (density "
            << intensive_energy(static_cast<double>(report.final_raw_energy), inst.size())
            << "), sampled mean density " << report.sampled_mean_density << " +- "
            << report.sampled_stderr << "\n";
  return 0;
}

int cmd_eigen(const ExperimentConfig& c) {
  const auto inst = single_instance(c);
  const TransferOperator op(inst, c.omega_target);
  const auto res = dominant_eigenpair(op);
  nlohmann::json j = {{"n", inst.size()},
                      {"seed", inst.seed()},
                      {"omega", c.omega_target},
                      {"theta1", res.theta1},
                      {"ground_energy", res.ground_energy(op.shift())},
                      {"classical_expectation", res.classical_expectation},
                      {"classical_density", intensive_energy(res.classical_expectation, inst.size())},
                      {"iterations", res.iterations},
                      {"residual", res.residual}};
  if (res.theta2) j["theta2"] = *res.theta2;
  write_json(c.out_dir, "eigen.json", j);
  std::cout << j.dump() << "\n";
  return 0;
}

std::string tag_of(const ExperimentConfig& c, bool steps_sweep, bool omega_sweep) {
  std::ostringstream s;
  s << to_string(c.mode);
  if (steps_sweep) s << "_T" << c.steps;
  if (omega_sweep) s << "_omega" << c.omega_target;
  return s.str();
}

int cmd_ensemble(const ExperimentConfig& base) {
  std::vector<ExperimentConfig> plan;
  const std::vector<RunMode> modes =
      base.mode == RunMode::compare
          ? std::vector<RunMode>{RunMode::static_field, RunMode::preanneal}
          : std::vector<RunMode>{base.mode};
  const auto steps = base.steps_sweep.empty() ? std::vector<std::int64_t>{base.steps} : base.steps_sweep;
  const bool sweep_omega = !base.omega_sweep.empty() && base.mode != RunMode::anneal;
  const auto omegas = sweep_omega ? base.omega_sweep : std::vector<double>{base.omega_target};
  for (auto m : modes) {
    for (auto t : steps) {
      for (double w : omegas) {
        ExperimentConfig c = base;
        c.mode = m;
        c.steps = t;
        c.omega_target = w;
        plan.push_back(c);
      }
    }
  }
  const bool multi = plan.size() > 1;
  nlohmann::json index = nlohmann::json::array();
  std::ofstream agg;
  agg = open_out(base.out_dir, "ensemble.csv");
  agg << "mode,T,omega,cells,success_rate,mean_final_density,mean_density,mean_abs_eigen_error\n";
  int failed_cells = 0;
  for (const auto& c : plan) {
    const auto s = ensemble_run(c);
    const std::string tag = tag_of(c, base.steps_sweep.size() > 1, sweep_omega && omegas.size() > 1);
    const std::string name = multi ? "summary_" + tag + ".csv" : "summary.csv";
    {
      auto f = open_out(base.out_dir, name);
      write_summary_csv(s, f);
    }
    {
      auto f = open_out(base.out_dir, multi ? "eigen_oracle_" + tag + ".csv" : "eigen_oracle.csv");
      f << "instance_seed,rep,mean_density,eigen_density\n";
      for (const auto& cell : s.cells) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%llu,%d,%.10g,", static_cast<unsigned long long>(cell.instance_seed),
                      cell.rep, cell.mean_density);
        f << buf;
        if (cell.eigen_density) {
          std::snprintf(buf, sizeof buf, "%.10g", *cell.eigen_density);
          f << buf;
        }
        f << "\n";
      }
    }
    double mean_density = 0.0;
    int ok = 0;
    for (const auto& cell : s.cells) {
      if (!cell.ok()) {
        ++failed_cells;
        std::cerr << "cell " << cell.instance << "/" << cell.rep << ": " << cell.error << "\n";
        continue;
      }
      mean_density += cell.mean_density;
      ++ok;
    }
    if (ok > 0) mean_density /= ok;
    const auto rate = s.success_rate();
    const auto mae = s.mean_abs_eigen_error();
    agg << to_string(c.mode) << "," << c.steps << "," << c.omega_target << "," << s.cells.size() << ",";
    if (rate) agg << *rate;
    agg << "," << s.mean_final_density() << "," << mean_density << ",";
    if (mae) agg << *mae;
    agg << "\n";
    std::cout << name << ": cells " << s.cells.size();
    if (rate) std::cout << " success " << *rate;
    std::cout << " mean final density " << s.mean_final_density();
    if (mae) std::cout << " |E_sim - E_eigen| " << *mae;
    std::cout << "\n";
  }
  return failed_cells == 0 ? 0 : 3;
}

int cmd_validate(bool full, int threads) {
  AcceptanceOptions opts;
  opts.full = full;
  opts.threads = threads;
  opts.on_result = [](const CheckResult& r) { std::cout << format_result(r) << std::endl; };
  const auto results = run_acceptance(opts);
  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  std::cout << results.size() << " criteria, " << failed << " failed\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-temperature placket-chain Monte Carlo for SK spin glasses"};
  app.require_subcommand(1);
  Overrides o;

  auto* gen = app.add_subcommand("gen", "write a random instance as JSON");
  add_common(gen, o);
  gen->add_option("--n", o.n, "number of spins");
  gen->add_option("--seed", o.seed, "instance seed");

  int starts = 50;
  std::int64_t moves = 1000000;
  auto* land = app.add_subcommand("landscape", "DOS, flip path and greedy descents");
  add_common(land, o);
  add_instance(land, o);
  land->add_option("--starts", starts, "greedy descents");
  land->add_option("--moves", moves, "move budget per descent");

  std::vector<CLI::App*> runs;
  for (const char* name : {"anneal", "static", "preanneal"}) {
    auto* s = app.add_subcommand(name, std::string("single ") + name + " run");
    add_common(s, o);
    add_instance(s, o);
    add_run(s, o);
    s->add_option("--run-seed", o.seed_base, "Monte Carlo seed");
    runs.push_back(s);
  }

  auto* eig = app.add_subcommand("eigen", "power iteration of the transfer operator");
  add_common(eig, o);
  add_instance(eig, o);
  eig->add_option("--omega", o.omega, "transverse field");

  auto* ens = app.add_subcommand("ensemble", "runs over generated instances");
  add_common(ens, o);
  add_run(ens, o);
  ens->add_option("--n", o.n, "number of spins");
  ens->add_option("--mode", o.mode, "anneal | static | preanneal | compare");
  ens->add_option("--instances", o.instances, "instance count");
  ens->add_option("--repetitions", o.repetitions, "runs per instance");
  ens->add_option("--seed-base", o.seed_base, "ensemble seed base");

  bool full = false;
  auto* val = app.add_subcommand("validate", "run the acceptance suite");
  val->add_flag("--full", full, "include long-running optional checks");
  val->add_option("--threads", o.threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (gen->parsed()) return cmd_gen(resolve(o, std::nullopt));
    if (land->parsed()) return cmd_landscape(resolve(o, std::nullopt), starts, moves);
    if (runs[0]->parsed()) return cmd_run(resolve(o, RunMode::anneal));
    if (runs[1]->parsed()) return cmd_run(resolve(o, RunMode::static_field));
    if (runs[2]->parsed()) return cmd_run(resolve(o, RunMode::preanneal));
    if (eig->parsed()) return cmd_eigen(resolve(o, std::nullopt));
    if (ens->parsed()) {
      auto c = resolve(o, std::nullopt);
      return cmd_ensemble(c);
    }
    if (val->parsed()) {
      const int threads = o.threads.value_or(static_cast<int>(std::max(1U, std::thread::hardware_concurrency())));
      return cmd_validate(full, threads);
    }
  } catch (const std::exception& e) {
    std::cerr << "ztqmc: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

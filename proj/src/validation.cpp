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

#include "ztqmc/validation.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "ztqmc/anneal.hpp"
#include "ztqmc/chain.hpp"
#include "ztqmc/harness.hpp"
#include "ztqmc/oracle.hpp"
#include "ztqmc/rng.hpp"
#include "ztqmc/transfer.hpp"

namespace ztqmc {
namespace {

// Tolerances and sizes of the acceptance suite.
constexpr double kStationarityTv = 0.01;
constexpr std::int64_t kStationaritySteps = 1000000;
constexpr double kBalanceTol = 1e-12;
constexpr double kDecayRelTol = 0.20;
constexpr double kSpectralTol = 1e-8;
constexpr double kStaticSigmas = 3.0;
constexpr double kAnnealMinRate = 0.90;
constexpr double kMonotoneSigmas = 3.0;
constexpr double kDosFactor = 1e3;
constexpr double kGreedyMaxHitRate = 0.5;
constexpr int kFuzzTriples = 100000;
constexpr std::int64_t kCacheSteps = 10000;
constexpr double kReferenceLow = -0.80;
constexpr double kReferenceHigh = -0.70;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Runs body(detail) and wraps its verdict with timing.
template <class F>
CheckResult timed(int id, std::string name, bool optional, F&& body) {
  CheckResult r;
  r.id = id;
  r.name = std::move(name);
  r.optional = optional;
  const auto t0 = Clock::now();
  std::ostringstream detail;
  detail.precision(6);
  try {
    r.passed = body(detail);
  } catch (const std::exception& e) {
    r.passed = false;
    detail << " exception: " << e.what();
  }
  r.detail = detail.str();
  r.seconds = seconds_since(t0);
  return r;
}

std::vector<SpinConfiguration> unpack(int n, const std::vector<std::uint64_t>& ring) {
  std::vector<SpinConfiguration> out;
  out.reserve(ring.size());
  for (auto k : ring) out.emplace_back(n, k);
  return out;
}

const SpinGlassInstance& pair_instance() {
  static const SpinGlassInstance inst(2, 0, {1});
  return inst;
}

// Independent energy: one bond at a time through the coupling accessor.
std::int64_t bondwise_energy(const SpinGlassInstance& inst, std::uint64_t bits) {
  const int n = inst.size();
  std::int64_t e = 0;
  for (int i = 0; i < n; ++i) {
    const int si = ((bits >> i) & 1U) ? 1 : -1;
    for (int j = i + 1; j < n; ++j) {
      const int sj = ((bits >> j) & 1U) ? 1 : -1;
      e -= inst.coupling(i, j) * si * sj;
    }
  }
  return e;
}

}  // namespace

CheckResult check_stationarity() {
  return timed(1, "stationarity", false, [](std::ostringstream& d) {
    const auto& inst = pair_instance();
    const TransferOperator op(inst, 1.0);
    const int length = 3;
    const auto exact = enumerate_chain_states(op, length);
    std::map<std::vector<std::uint64_t>, double> empirical;
    auto chain = init_chain(inst, SpinConfiguration::all_up(2), length);
    Rng rng(0x57a710ULL);
    for (std::int64_t t = 0; t < kStationaritySteps; ++t) {
      mc_step(chain, op, rng);
      empirical[chain.packed()] += 1.0;
    }
    double tv = 0.0;
    for (std::size_t s = 0; s < exact.states.size(); ++s) {
      const auto it = empirical.find(exact.states[s]);
      const double p = it == empirical.end() ? 0.0 : it->second / kStationaritySteps;
      tv += std::abs(p - exact.probabilities[s]);
    }
    tv *= 0.5;
    // Diagnostic: the same histogram against the class reachable from the start.
    const auto reach = reachable_chain_states(op, init_chain(inst, SpinConfiguration::all_up(2), length).packed());
    double tv_reach = 0.0;
    for (std::size_t s = 0; s < reach.states.size(); ++s) {
      const auto it = empirical.find(reach.states[s]);
      const double p = it == empirical.end() ? 0.0 : it->second / kStationaritySteps;
      tv_reach += std::abs(p - reach.probabilities[s]);
    }
    tv_reach *= 0.5;
    d << "TV to exact ring weights " << tv << " (limit " << kStationarityTv << ", "
      << empirical.size() << " of " << exact.states.size()
      << " states visited); TV to the start's reachable class " << tv_reach;
    return tv < kStationarityTv;
  });
}

CheckResult check_detailed_balance() {
  return timed(2, "detailed_balance", false, [](std::ostringstream& d) {
    const auto& inst = pair_instance();
    const TransferOperator op(inst, 1.0);
    const int length = 3;
    const auto ens = enumerate_chain_states(op, length);
    std::map<std::vector<std::uint64_t>, double> prob;
    for (std::size_t s = 0; s < ens.states.size(); ++s) prob[ens.states[s]] = ens.probabilities[s];
    double worst = 0.0;
    int moves = 0;
    for (const auto& [ring, pa] : prob) {
      const auto a = PlacketChain::from_plackets(inst, unpack(2, ring));
      for (int l = 0; l < length; ++l) {
        for (int i = 0; i < 2; ++i) {
          const MoveProposal mv{l, i};
          if (!is_allowed(a, mv)) continue;
          const double r_ab = acceptance_ratio(a, op, mv);
          if (r_ab == 0.0) continue;
          auto b = a;
          b.apply(mv);
          const auto it = prob.find(b.packed());
          if (it == prob.end()) {
            d << "move leads outside the positive-weight states";
            return false;
          }
          const double r_ba = acceptance_ratio(b, op, mv);
          const double lhs = pa * std::min(1.0, r_ab);
          const double rhs = it->second * std::min(1.0, r_ba);
          worst = std::max(worst, std::abs(lhs - rhs));
          ++moves;
        }
      }
    }
    d << moves << " moves over " << prob.size() << " states, max |P(A)P(A->B) - P(B)P(B->A)| = "
      << worst;
    return moves > 0 && worst <= kBalanceTol;
  });
}

CheckResult check_marginal_decay() {
  return timed(3, "marginal_decay", false, [](std::ostringstream& d) {
    const TransferOperator op(pair_instance(), 1.0);
    const std::vector<int> lengths = {2, 4, 6, 8};
    std::vector<double> dev;
    double target = 0.0;
    for (int l : lengths) {
      const auto m = exact_chain_marginal(op, l);
      dev.push_back(m.deviation);
      target = (m.theta2 / m.theta1) * (m.theta2 / m.theta1);
    }
    bool ok = true;
    d << "(theta2/theta1)^2 = " << target << "; ratios";
    for (std::size_t k = 0; k + 1 < dev.size(); ++k) {
      const double ratio = dev[k + 1] / dev[k];
      const bool within = std::abs(ratio / target - 1.0) <= kDecayRelTol;
      ok = ok && within;
      d << " L" << lengths[k] << "->" << lengths[k + 1] << "=" << ratio << (within ? "" : "*");
    }
    d << "; deviations";
    for (double x : dev) d << " " << x;
    return ok;
  });
}

CheckResult check_spectral_consistency() {
  return timed(4, "spectral_consistency", false, [](std::ostringstream& d) {
    const std::vector<double> omegas = {0.3, 1.0, 3.0};
    double worst_theta = 0.0, worst_expect = 0.0, worst_ground = 0.0;
    int cases = 0;
    for (int k = 0; k < 20; ++k) {
      const int n = 2 + k % 3;
      const auto inst = random_instance(n, mix_seed(0x5bec7ULL, static_cast<std::uint64_t>(k), 0));
      std::vector<double> energy(std::size_t{1} << n);
      for (std::uint64_t b = 0; b < energy.size(); ++b) energy[b] = static_cast<double>(inst.energy(b));
      for (double omega : omegas) {
        const TransferOperator op(inst, omega);
        const auto power = dominant_eigenpair(op);
        const auto dense = dense_transfer_spectrum(op);
        double expect = 0.0;
        for (std::size_t b = 0; b < energy.size(); ++b) {
          const double v = dense.eigenvectors(static_cast<Eigen::Index>(b), 0);
          expect += v * v * energy[b];
        }
        const double hmin = dense_hamiltonian_min_eigenvalue(inst, omega);
        worst_theta = std::max(worst_theta, std::abs(power.theta1 - dense.eigenvalues[0]));
        worst_expect = std::max(worst_expect, std::abs(power.classical_expectation - expect));
        worst_ground = std::max(worst_ground,
                                std::abs(static_cast<double>(op.shift()) - power.theta1 - hmin));
        ++cases;
      }
    }
    d << cases << " cases; max |dtheta1| = " << worst_theta << ", max |d<H_cl>| = " << worst_expect
      << ", max |C - theta1 - min eig H_tot| = " << worst_ground;
    return worst_theta <= kSpectralTol && worst_expect <= kSpectralTol &&
           worst_ground <= kSpectralTol;
  });
}

CheckResult check_static_accuracy(int threads) {
  return timed(5, "static_accuracy", false, [threads](std::ostringstream& d) {
    const int n = 8, length = 160, instances = 5;
    const std::int64_t steps = 100000, burn_in = 10000;
    const std::vector<double> omegas = {0.5, 1.0, 2.0};
    struct Cell {
      double sampled = 0, se = 0, exact = 0;
    };
    std::vector<Cell> cells(static_cast<std::size_t>(instances) * omegas.size());
    parallel_for(static_cast<int>(cells.size()), threads, [&](int c) {
      const int i = c / static_cast<int>(omegas.size());
      const double omega = omegas[static_cast<std::size_t>(c) % omegas.size()];
      const auto inst = random_instance(n, instance_seed(0x57a71cULL, i));
      const auto spec = dominant_eigenpair(TransferOperator(inst, omega));
      const auto r = run_static(inst, length, omega, steps, burn_in, cell_seed(0x57a71cULL, i, c));
      cells[static_cast<std::size_t>(c)] = {r.sampled_mean_density, r.sampled_stderr,
                                            intensive_energy(spec.classical_expectation, n)};
    });
    int within = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto& x = cells[c];
      const double z = (x.sampled - x.exact) / x.se;
      const bool ok = std::abs(z) < kStaticSigmas;
      within += ok ? 1 : 0;
      char buf[96];
      std::snprintf(buf, sizeof buf, " [i%zu w%.1f z=%+.1f]", c / omegas.size(),
                    omegas[c % omegas.size()], z);
      d << buf;
    }
    d << "; " << within << "/" << cells.size() << " within " << kStaticSigmas << " SE";
    return within == static_cast<int>(cells.size());
  });
}

CheckResult check_annealing_success(int threads) {
  return timed(6, "annealing_success", false, [threads](std::ostringstream& d) {
    const std::vector<std::int64_t> sweep = {10000, 50000, 200000};
    std::vector<double> rate, sigma;
    for (auto t : sweep) {
      ExperimentConfig cfg;
      cfg.mode = RunMode::anneal;
      cfg.n = 10;
      cfg.plackets = 200;
      cfg.omega_in = 2.0;
      cfg.steps = t;
      cfg.instances = 20;
      cfg.seed_base = 0xa77ea1ULL;
      cfg.threads = threads;
      const auto s = ensemble_run(cfg);
      const double p = s.success_rate().value_or(0.0);
      rate.push_back(p);
      sigma.push_back(std::sqrt(p * (1.0 - p) / static_cast<double>(s.cells.size())));
      d << "T=" << t << " rate " << p << "; ";
    }
    bool monotone = true;
    for (std::size_t k = 0; k + 1 < rate.size(); ++k) {
      const double slack = kMonotoneSigmas * std::hypot(sigma[k], sigma[k + 1]);
      monotone = monotone && rate[k + 1] >= rate[k] - slack;
    }
    const bool reached = rate.back() >= kAnnealMinRate;
    d << (monotone ? "non-decreasing" : "decreasing") << " at " << kMonotoneSigmas << " sigma";
    return reached && monotone;
  });
}

CheckResult check_preanneal_advantage(int threads) {
  return timed(7, "preanneal_advantage", false, [threads](std::ostringstream& d) {
    bool ok = true;
    for (double omega : {0.2, 0.5}) {
      ExperimentConfig base;
      base.n = 12;
      base.instances = 20;
      base.seed_base = 0x9ea77ULL;
      base.omega_target = omega;
      base.threads = threads;
      base.steps = 50000;
      ExperimentConfig plain = base;
      plain.mode = RunMode::static_field;
      plain.burn_in = 50000;
      ExperimentConfig pre = base;
      pre.mode = RunMode::preanneal;
      pre.omega_in = 2.0;
      pre.prefix_steps = 50000;
      const double e_plain = ensemble_run(plain).mean_abs_eigen_error().value_or(INFINITY);
      const double e_pre = ensemble_run(pre).mean_abs_eigen_error().value_or(INFINITY);
      ok = ok && e_pre < e_plain;
      d << "omega " << omega << ": MAE static " << e_plain << ", pre-annealed " << e_pre << "; ";
    }
    return ok;
  });
}

CheckResult check_landscape() {
  return timed(8, "landscape", false, [](std::ostringstream& d) {
    const int n = 20;
    const auto inst = random_instance(n, 0x1a2d5ca9eULL);
    const auto gs = exhaustive_ground_state(inst);
    const auto dos = density_of_states(inst);
    // Mid-spectrum: the populated level closest to zero energy.
    std::uint64_t mid = 0;
    std::int64_t mid_e = 0;
    for (const auto& [e, c] : dos.histogram) {
      if (mid == 0 || std::abs(e) < std::abs(mid_e)) {
        mid = c;
        mid_e = e;
      }
    }
    const bool dos_ok = static_cast<double>(mid) >= kDosFactor * static_cast<double>(gs.degeneracy);

    const int starts = 50;
    int hits = 0;
    Rng rng(0x9eed1ULL);
    for (int s = 0; s < starts; ++s) {
      const SpinConfiguration start(n, rng.next() & spin_mask(n));
      const auto g = greedy_downhill(inst, start, 1000000, rng.next());
      hits += g.final_energy == gs.energy ? 1 : 0;
    }
    const bool greedy_ok = hits < kGreedyMaxHitRate * starts;

    const auto path = flip_path_profile(inst);
    const auto path_min = *std::min_element(path.begin(), path.end());
    const bool path_ok = path_min > gs.energy;

    d << "E0 " << gs.energy << " degeneracy " << gs.degeneracy << "; count at E=" << mid_e << " is "
      << mid << "; greedy hits " << hits << "/" << starts << "; flip-path min " << path_min;
    return dos_ok && greedy_ok && path_ok;
  });
}

CheckResult check_exactness_fuzz() {
  return timed(9, "exactness_fuzz", false, [](std::ostringstream& d) {
    Rng rng(0xf022ULL);
    int mismatches = 0;
    std::map<int, SpinGlassInstance> pool;
    for (int k = 0; k < kFuzzTriples; ++k) {
      const int n = 2 + static_cast<int>(rng.below(39));
      if (k % 1000 == 0 || !pool.count(n)) pool.insert_or_assign(n, random_instance(n, rng.next()));
      const auto& inst = pool.at(n);
      const std::uint64_t bits = rng.next() & spin_mask(n);
      const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      const SpinConfiguration c(n, bits);
      const auto delta = flip_delta(inst, c, i);
      const auto full = bondwise_energy(inst, bits ^ (std::uint64_t{1} << i)) -
                        bondwise_energy(inst, bits);
      mismatches += delta == full ? 0 : 1;
    }
    int stale = 0;
    const int chains = 8;
    for (int k = 0; k < chains; ++k) {
      const int n = 3 + k * 2;
      const auto inst = random_instance(n, mix_seed(0xcac4eULL, static_cast<std::uint64_t>(k), 0));
      const TransferOperator op(inst, 0.5 + 0.25 * k);
      auto chain = init_chain(inst, initial_configuration(inst, rng), 20 + 10 * k);
      for (std::int64_t t = 0; t < kCacheSteps; ++t) mc_step(chain, op, rng);
      bool fresh = chain.cache_consistent();
      std::int64_t total = 0;
      for (int l = 0; l < chain.length(); ++l) {
        const auto e = bondwise_energy(inst, chain.bits(l));
        fresh = fresh && e == chain.energy(l);
        total += e;
      }
      fresh = fresh && total == chain.total_energy();
      stale += fresh ? 0 : 1;
    }
    d << mismatches << " flip_delta mismatches in " << kFuzzTriples << " triples; " << stale
      << " stale caches in " << chains << " chains after " << kCacheSteps << " steps";
    return mismatches == 0 && stale == 0;
  });
}

CheckResult check_reference_constant(int threads) {
  return timed(10, "reference_constant", true, [threads](std::ostringstream& d) {
    bool ok = true;
    for (int n : {24, 28}) {
      const int instances = 20;
      double sum = 0.0, sum2 = 0.0;
      for (int i = 0; i < instances; ++i) {
        const auto inst = random_instance(n, instance_seed(0x7633ULL, i));
        const double e = intensive_energy(
            static_cast<double>(exhaustive_ground_state(inst, kGroundStateMaxSpins, threads).energy), n);
        sum += e;
        sum2 += e * e;
      }
      const double mean = sum / instances;
      const double sd = std::sqrt(std::max(0.0, sum2 / instances - mean * mean));
      const bool in = mean >= kReferenceLow && mean <= kReferenceHigh;
      ok = ok && in;
      d << "N=" << n << " mean " << mean << " (sd " << sd << ", " << instances << " instances); ";
    }
    d << "window [" << kReferenceLow << ", " << kReferenceHigh << "]";
    return ok;
  });
}

std::vector<CheckResult> run_acceptance(const AcceptanceOptions& opts) {
  const int threads = std::max(1, opts.threads);
  std::vector<std::function<CheckResult()>> checks = {
      check_stationarity,
      check_detailed_balance,
      check_marginal_decay,
      check_spectral_consistency,
      [threads] { return check_static_accuracy(threads); },
      [threads] { return check_annealing_success(threads); },
      [threads] { return check_preanneal_advantage(threads); },
      check_landscape,
      check_exactness_fuzz,
  };
  if (opts.full) checks.emplace_back([threads] { return check_reference_constant(threads); });
  std::vector<CheckResult> out;
  for (const auto& c : checks) {
    out.push_back(c());
    if (opts.on_result) opts.on_result(out.back());
  }
  return out;
}

std::string format_result(const CheckResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "%s %2d %-22s (%.2f s): ", r.passed ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.seconds);
  return head + r.detail;
}

}  // namespace ztqmc

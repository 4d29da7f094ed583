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

#include "ztqmc/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ztqmc/error.hpp"
#include "ztqmc/rng.hpp"

namespace ztqmc {

namespace {

void check_cap(int n, int cap, const char* what, double cost_per_state) {
  if (n <= cap) return;
  std::ostringstream os;
  os << what << ": N = " << n << " exceeds the cap of " << cap << "; "
     << std::ldexp(1.0, n) << " states, roughly " << std::ldexp(cost_per_state, n)
     << " operations";
  throw CapExceeded(os.str());
}

std::uint64_t gray(std::uint64_t g) { return g ^ (g >> 1); }

struct HalfStats {
  std::int64_t energy = 0;
  std::uint64_t count = 0;
  std::vector<std::uint64_t> reps;
};

// Walks configurations 1 | gray(g) << 1 for g in [first, last).
template <typename Visit>
void walk_half(const SpinGlassInstance& inst, std::uint64_t first,
               std::uint64_t last, Visit&& visit) {
  if (first >= last) return;
  std::uint64_t bits = 1 | (gray(first) << 1);
  std::int64_t e = inst.energy(bits);
  visit(bits, e);
  for (std::uint64_t g = first + 1; g < last; ++g) {
    const int i = 1 + std::countr_zero(g);
    e += inst.delta(bits, i);
    bits ^= std::uint64_t{1} << i;
    visit(bits, e);
  }
}

}  // namespace

GroundStateReport exhaustive_ground_state(const SpinGlassInstance& inst,
                                          int cap, int threads) {
  const int n = inst.size();
  check_cap(n, cap, "exhaustive ground state", 1.0);
  const std::uint64_t half = std::uint64_t{1} << (n - 1);
  const int workers =
      static_cast<int>(std::clamp<std::uint64_t>(static_cast<std::uint64_t>(std::max(threads, 1)), 1, half));

  std::vector<HalfStats> parts(static_cast<std::size_t>(workers));
  auto run = [&](int w) {
    const std::uint64_t first = half * static_cast<std::uint64_t>(w) / static_cast<std::uint64_t>(workers);
    const std::uint64_t last = half * static_cast<std::uint64_t>(w + 1) / static_cast<std::uint64_t>(workers);
    HalfStats& s = parts[static_cast<std::size_t>(w)];
    s.energy = std::numeric_limits<std::int64_t>::max();
    walk_half(inst, first, last, [&](std::uint64_t bits, std::int64_t e) {
      if (e < s.energy) {
        s.energy = e;
        s.count = 0;
        s.reps.clear();
      }
      if (e == s.energy) {
        ++s.count;
        if (s.reps.size() < GroundStateReport::kMaxRepresentatives) s.reps.push_back(bits);
      }
    });
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }

  GroundStateReport report;
  report.energy = std::numeric_limits<std::int64_t>::max();
  for (const auto& p : parts) report.energy = std::min(report.energy, p.energy);
  std::vector<std::uint64_t> reps;
  for (const auto& p : parts) {
    if (p.energy != report.energy) continue;
    report.degeneracy += 2 * p.count;
    reps.insert(reps.end(), p.reps.begin(), p.reps.end());
  }
  std::sort(reps.begin(), reps.end());
  if (reps.size() > GroundStateReport::kMaxRepresentatives) {
    reps.resize(GroundStateReport::kMaxRepresentatives);
  }
  for (const auto b : reps) report.representatives.emplace_back(n, b);
  return report;
}

std::uint64_t DensityOfStates::total() const {
  std::uint64_t t = 0;
  for (const auto& [e, c] : histogram) t += c;
  return t;
}

std::uint64_t DensityOfStates::count(std::int64_t energy) const {
  const auto it = histogram.find(energy);
  return it == histogram.end() ? 0 : it->second;
}

std::uint64_t DensityOfStates::peak_count() const {
  std::uint64_t peak = 0;
  for (const auto& [e, c] : histogram) peak = std::max(peak, c);
  return peak;
}

DensityOfStates density_of_states(const SpinGlassInstance& inst, int cap) {
  const int n = inst.size();
  check_cap(n, cap, "density of states", 1.0);
  const std::int64_t c = inst.pair_count();
  // Energies share the parity of C, so (E + C) / 2 indexes [0, C].
  std::vector<std::uint64_t> bins(static_cast<std::size_t>(c + 1), 0);
  walk_half(inst, 0, std::uint64_t{1} << (n - 1),
            [&](std::uint64_t, std::int64_t e) {
              ++bins[static_cast<std::size_t>((e + c) / 2)];
            });
  DensityOfStates dos;
  for (std::size_t k = 0; k < bins.size(); ++k) {
    // Each visited configuration stands for itself and its global flip.
    if (bins[k] != 0) dos.histogram[2 * static_cast<std::int64_t>(k) - c] = 2 * bins[k];
  }
  return dos;
}

std::vector<std::int64_t> flip_path_profile(const SpinGlassInstance& inst) {
  const int n = inst.size();
  std::uint64_t bits = spin_mask(n);
  std::int64_t e = inst.energy(bits);
  std::vector<std::int64_t> profile{e};
  profile.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i < n; ++i) {
    e += inst.delta(bits, i);
    bits ^= std::uint64_t{1} << i;
    profile.push_back(e);
  }
  return profile;
}

GreedyResult greedy_downhill(const SpinGlassInstance& inst,
                             const SpinConfiguration& start,
                             std::int64_t max_moves, std::uint64_t seed) {
  if (max_moves < 1) throw ConfigError("greedy descent needs max_moves >= 1");
  if (start.size() != inst.size()) {
    throw DimensionMismatch("start configuration does not match instance");
  }
  const int n = inst.size();
  auto is_local_min = [&](std::uint64_t b) {
    for (int i = 0; i < n; ++i) {
      if (inst.delta(b, i) < 0) return false;
    }
    return true;
  };

  Rng rng(seed);
  std::uint64_t bits = start.bits();
  std::int64_t e = inst.energy(bits);
  GreedyResult result;
  result.trace.push_back({0, e});
  std::int64_t rejected_run = 0;
  std::int64_t move = 0;
  while (move < max_moves) {
    ++move;
    const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    const std::int64_t d = inst.delta(bits, i);
    if (d < 0) {
      bits ^= std::uint64_t{1} << i;
      e += d;
      result.trace.push_back({move, e});
      rejected_run = 0;
    } else if (++rejected_run == n && is_local_min(bits)) {
      result.local_minimum = true;
      break;
    }
  }
  if (!result.local_minimum) result.local_minimum = is_local_min(bits);
  result.final_configuration = {n, bits};
  result.final_energy = e;
  result.moves_used = move;
  return result;
}

DenseSpectrum dense_transfer_spectrum(const TransferOperator& op) {
  const Eigen::MatrixXd w = dense_transfer_matrix(op);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(w);
  if (solver.info() != Eigen::Success) throw NotConverged("dense eigensolver failed");
  const auto& vals = solver.eigenvalues();
  std::vector<int> order(static_cast<std::size_t>(vals.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(vals[a]) > std::abs(vals[b]);
  });
  DenseSpectrum spec;
  spec.eigenvectors.resize(w.rows(), w.cols());
  for (std::size_t k = 0; k < order.size(); ++k) {
    spec.eigenvalues.push_back(vals[order[k]]);
    Eigen::VectorXd v = solver.eigenvectors().col(order[k]);
    // Fix the sign so the largest-magnitude entry is positive.
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0) v = -v;
    spec.eigenvectors.col(static_cast<Eigen::Index>(k)) = v;
  }
  return spec;
}

Eigen::MatrixXd dense_transfer_matrix(const TransferOperator& op) {
  const int n = op.size();
  check_cap(n, kDenseMaxSpins, "dense transfer matrix", std::ldexp(1.0, n));
  const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << n);
  const auto& inst = op.instance();
  Eigen::MatrixXd w(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const auto kb = static_cast<std::uint64_t>(k);
    const std::int64_t ek = inst.energy(kb);
    for (Eigen::Index l = 0; l < dim; ++l) {
      w(k, l) = op.element(kb, static_cast<std::uint64_t>(l), ek);
    }
  }
  return w;
}

double dense_hamiltonian_min_eigenvalue(const SpinGlassInstance& inst,
                                        double omega) {
  const int n = inst.size();
  check_cap(n, kDenseMaxSpins, "dense Hamiltonian", std::ldexp(1.0, n));
  const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << n);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    // -sum_{i<j} J_ij sz_i sz_j on the diagonal.
    double diag = 0.0;
    for (int i = 0; i < n; ++i) {
      const int si = ((k >> i) & 1) ? 1 : -1;
      for (int j = i + 1; j < n; ++j) {
        const int sj = ((k >> j) & 1) ? 1 : -1;
        diag -= inst.coupling(i, j) * si * sj;
      }
    }
    h(k, k) = diag;
    // -omega sum_i sx_i connects k to k with spin i flipped.
    for (int i = 0; i < n; ++i) h(k, k ^ (Eigen::Index{1} << i)) -= omega;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NotConverged("dense eigensolver failed");
  return solver.eigenvalues()[0];
}

SpectralResult dominant_eigenpair(const TransferOperator& op,
                                  const PowerIterationOptions& opts) {
  if (op.omega() == 0.0) {
    throw DegenerateDominant(
        "omega = 0: W is reducible and its dominant eigenvalue is degenerate");
  }
  const int n = op.size();
  check_cap(n, kEigenMaxSpins, "power iteration", static_cast<double>(n));
  const std::size_t dim = std::size_t{1} << n;
  const std::vector<double> diag = transfer_diagonal(op);

  std::vector<double> v(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  std::vector<double> w(dim);
  double theta = 0.0;
  double residual = 0.0;
  int streak = 0;
  int it = 0;
  for (;;) {
    if (it == opts.max_iter) {
      std::ostringstream os;
      os << "power iteration did not converge in " << opts.max_iter
         << " iterations (theta1 ~ " << theta << ", residual " << residual << ")";
      throw NotConverged(os.str());
    }
    ++it;
    apply_transfer(op, diag, v, w);
    // v has unit norm, so v.w is the Rayleigh quotient.
    double rq = 0.0, norm2 = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      rq += v[k] * w[k];
      norm2 += w[k] * w[k];
    }
    double r2 = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double d = w[k] - rq * v[k];
      r2 += d * d;
    }
    residual = std::sqrt(r2) / rq;
    const bool stable = it > 1 && std::abs(rq - theta) <= opts.tol * std::abs(rq);
    streak = stable ? streak + 1 : 0;
    theta = rq;
    const double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t k = 0; k < dim; ++k) v[k] = w[k] * inv;
    if (streak >= 10 && residual <= opts.residual_tol) break;
  }

  SpectralResult res;
  // One final Rayleigh quotient on the returned vector.
  apply_transfer(op, diag, v, w);
  res.theta1 = std::inner_product(v.begin(), v.end(), w.begin(), 0.0);
  double expectation = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    v[k] = std::abs(v[k]);
    expectation += v[k] * v[k] * (static_cast<double>(op.shift()) - diag[k]);
  }
  res.classical_expectation = expectation;
  res.amplitudes = std::move(v);
  res.iterations = it;
  res.residual = residual;
  if (n <= kTheta2MaxSpins) {
    res.theta2 = std::abs(dense_transfer_spectrum(op).eigenvalues.at(1));
  }
  return res;
}

ChainMarginal exact_chain_marginal(const TransferOperator& op, int length) {
  const int n = op.size();
  check_cap(n, kMarginalMaxSpins, "chain marginal", std::ldexp(1.0, 2 * n));
  if (length < 2 || length > kMarginalMaxLength) {
    throw CapExceeded("chain length must be in [2, " +
                      std::to_string(kMarginalMaxLength) + "]");
  }
  if (op.omega() == 0.0) throw DegenerateDominant("omega = 0 has no unique Perron vector");
  const Eigen::MatrixXd w = dense_transfer_matrix(op);
  const DenseSpectrum spec = dense_transfer_spectrum(op);

  // Repeated multiplication, rescaled by theta1 to keep entries O(1).
  const double theta1 = spec.eigenvalues[0];
  const Eigen::MatrixXd scaled = w / theta1;
  Eigen::MatrixXd power = scaled;
  for (int k = 1; k < length; ++k) power = power * scaled;

  ChainMarginal m;
  m.theta1 = theta1;
  m.theta2 = std::abs(spec.eigenvalues[1]);
  const double trace = power.trace();
  const auto dim = w.rows();
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double p = power(k, k) / trace;
    const double g = spec.eigenvectors(k, 0);
    m.marginal.push_back(p);
    m.amplitude_sq.push_back(g * g);
    m.deviation = std::max(m.deviation, std::abs(p - g * g));
  }
  return m;
}

ChainEnsemble enumerate_chain_states(const TransferOperator& op, int length) {
  const int n = op.size();
  if (length < 2) throw InvalidSize("a placket chain needs at least 2 plackets");
  if (static_cast<double>(n) * length > 22.0) {
    throw CapExceeded("chain-state enumeration limited to (2^N)^L <= 2^22");
  }
  const auto& inst = op.instance();
  const std::uint64_t dim = std::uint64_t{1} << n;
  std::vector<std::int64_t> energy(dim);
  for (std::uint64_t k = 0; k < dim; ++k) energy[k] = inst.energy(k);

  ChainEnsemble ens;
  std::vector<std::uint64_t> ring(static_cast<std::size_t>(length));
  std::function<void(int, double)> extend = [&](int pos, double weight) {
    const std::uint64_t prev = ring[static_cast<std::size_t>(pos - 1)];
    if (pos == length) {
      const double closing = op.element(prev, ring[0], energy[prev]);
      if (closing > 0.0) {
        ens.states.push_back(ring);
        ens.probabilities.push_back(weight * closing);
      }
      return;
    }
    for (std::uint64_t k = 0; k < dim; ++k) {
      if (std::popcount(k ^ prev) > 1) continue;
      const double b = op.element(prev, k, energy[prev]);
      if (b <= 0.0) continue;
      ring[static_cast<std::size_t>(pos)] = k;
      extend(pos + 1, weight * b);
    }
  };
  for (std::uint64_t k = 0; k < dim; ++k) {
    ring[0] = k;
    extend(1, 1.0);
  }
  ens.partition_function =
      std::accumulate(ens.probabilities.begin(), ens.probabilities.end(), 0.0);
  for (auto& p : ens.probabilities) p /= ens.partition_function;
  return ens;
}

ChainEnsemble reachable_chain_states(const TransferOperator& op,
                                     const std::vector<std::uint64_t>& start) {
  const int n = op.size();
  const auto length = static_cast<int>(start.size());
  if (length < 2) throw InvalidSize("a placket chain needs at least 2 plackets");
  const auto& inst = op.instance();
  const std::uint64_t mask = spin_mask(n);
  auto bond = [&](std::uint64_t a, std::uint64_t b) {
    return op.element(a, b, inst.energy(a));
  };
  auto weight = [&](const std::vector<std::uint64_t>& ring) {
    double w = 1.0;
    for (int l = 0; l < length; ++l) {
      w *= bond(ring[static_cast<std::size_t>(l)],
                ring[static_cast<std::size_t>((l + 1) % length)]);
    }
    return w;
  };
  for (auto k : start) {
    if ((k & ~mask) != 0) throw DimensionMismatch("placket outside the configuration space");
  }
  if (!(weight(start) > 0.0)) throw std::invalid_argument("start ring has zero weight");

  constexpr std::size_t kCap = std::size_t{1} << 22;
  std::map<std::vector<std::uint64_t>, double> seen;
  std::vector<std::vector<std::uint64_t>> frontier{start};
  seen.emplace(start, weight(start));
  while (!frontier.empty()) {
    auto ring = std::move(frontier.back());
    frontier.pop_back();
    for (int l = 0; l < length; ++l) {
      const auto left = ring[static_cast<std::size_t>((l + length - 1) % length)];
      const auto right = ring[static_cast<std::size_t>((l + 1) % length)];
      const auto old = ring[static_cast<std::size_t>(l)];
      for (int i = 0; i < n; ++i) {
        const std::uint64_t moved = old ^ (std::uint64_t{1} << i);
        if (std::popcount(moved ^ left) > 1 || std::popcount(moved ^ right) > 1) continue;
        if (!(bond(left, moved) > 0.0) || !(bond(moved, right) > 0.0)) continue;
        auto next = ring;
        next[static_cast<std::size_t>(l)] = moved;
        if (seen.count(next)) continue;
        if (seen.size() >= kCap) throw CapExceeded("reachable ring set exceeds 2^22 states");
        seen.emplace(next, weight(next));
        frontier.push_back(std::move(next));
      }
    }
  }
  ChainEnsemble ens;
  for (auto& [ring, w] : seen) {
    ens.states.push_back(ring);
    ens.probabilities.push_back(w);
  }
  ens.partition_function =
      std::accumulate(ens.probabilities.begin(), ens.probabilities.end(), 0.0);
  for (auto& p : ens.probabilities) p /= ens.partition_function;
  return ens;
}

}  // namespace ztqmc

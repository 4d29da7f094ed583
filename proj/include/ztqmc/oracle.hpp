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
#include <map>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ztqmc/instance.hpp"
#include "ztqmc/transfer.hpp"

namespace ztqmc {

// Exact references used to check the Monte Carlo. Enumeration caps are in
// spins; each oracle throws CapExceeded with a cost estimate above its cap.

inline constexpr int kGroundStateMaxSpins = 28;
inline constexpr int kDensityMaxSpins = 24;
inline constexpr int kEigenMaxSpins = 20;
inline constexpr int kDenseMaxSpins = 10;
/// theta2 is only reported for bases this small.
inline constexpr int kTheta2MaxSpins = 4;

struct GroundStateReport {
  std::int64_t energy = 0;
  /// Ground configurations with spin 0 up, sorted by bits, at most
  /// kMaxRepresentatives of them.
  std::vector<SpinConfiguration> representatives;
  /// Ground configurations over both Z2 sectors.
  std::uint64_t degeneracy = 0;

  static constexpr std::size_t kMaxRepresentatives = 1024;
};

/// Gray-code enumeration of the 2^(N-1) configurations with spin 0 up, one
/// O(1) delta per step; the range is split across `threads` workers.
GroundStateReport exhaustive_ground_state(const SpinGlassInstance& inst,
                                          int cap = kGroundStateMaxSpins,
                                          int threads = 1);

struct DensityOfStates {
  /// raw energy -> number of configurations.
  std::map<std::int64_t, std::uint64_t> histogram;

  std::uint64_t total() const;
  std::uint64_t count(std::int64_t energy) const;
  std::int64_t min_energy() const { return histogram.begin()->first; }
  /// Largest count over all levels.
  std::uint64_t peak_count() const;
};

DensityOfStates density_of_states(const SpinGlassInstance& inst,
                                  int cap = kDensityMaxSpins);

/// Energies along the path that flips spins 0, 1, ..., N-1 in order, starting
/// from all-up. N + 1 entries; the last is the all-down energy.
std::vector<std::int64_t> flip_path_profile(const SpinGlassInstance& inst);

struct GreedyPoint {
  std::int64_t move = 0;
  std::int64_t energy = 0;
};

struct GreedyResult {
  /// Starting point followed by every accepted move.
  std::vector<GreedyPoint> trace;
  SpinConfiguration final_configuration;
  std::int64_t final_energy = 0;
  /// No single flip lowers the energy of final_configuration.
  bool local_minimum = false;
  std::int64_t moves_used = 0;
};

/// Random single-spin flips accepted only on a strict energy decrease. Stops
/// early once a local minimum is certified, since no later move could be
/// accepted.
GreedyResult greedy_downhill(const SpinGlassInstance& inst,
                             const SpinConfiguration& start,
                             std::int64_t max_moves, std::uint64_t seed);

struct SpectralResult {
  double theta1 = 0.0;
  /// Perron vector over the 2^N basis, unit norm, non-negative.
  std::vector<double> amplitudes;
  /// sum_k amplitude_k^2 E_k in raw units.
  double classical_expectation = 0.0;
  /// Largest-magnitude subdominant eigenvalue, for N <= kTheta2MaxSpins.
  std::optional<double> theta2;
  int iterations = 0;
  /// ||W v - theta1 v|| / theta1 at exit.
  double residual = 0.0;

  /// Ground energy of H_tot.
  double ground_energy(std::int64_t shift) const {
    return static_cast<double>(shift) - theta1;
  }
};

struct PowerIterationOptions {
  /// Relative eigenvalue change that must hold for 10 consecutive iterations.
  double tol = 1e-12;
  /// Relative residual required on top of the eigenvalue criterion.
  double residual_tol = 1e-10;
  int max_iter = 200000;
};

/// Power iteration on the implicit action of W, started from the uniform
/// vector. Throws DegenerateDominant at omega = 0 and NotConverged when
/// max_iter is exhausted.
SpectralResult dominant_eigenpair(const TransferOperator& op,
                                  const PowerIterationOptions& opts = {});

/// Full spectrum of W for small N, eigenvalues ordered by decreasing
/// magnitude with matching eigenvector columns.
struct DenseSpectrum {
  std::vector<double> eigenvalues;
  Eigen::MatrixXd eigenvectors;
};

Eigen::MatrixXd dense_transfer_matrix(const TransferOperator& op);
DenseSpectrum dense_transfer_spectrum(const TransferOperator& op);

/// Lowest eigenvalue of H_tot assembled directly from its Pauli form, without
/// going through W.
double dense_hamiltonian_min_eigenvalue(const SpinGlassInstance& inst,
                                        double omega);

struct ChainMarginal {
  /// P(mu = k) = (W^L)_kk / trace(W^L).
  std::vector<double> marginal;
  /// Squared Perron amplitudes.
  std::vector<double> amplitude_sq;
  /// max_k |marginal_k - amplitude_sq_k|.
  double deviation = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
};

inline constexpr int kMarginalMaxSpins = 4;
inline constexpr int kMarginalMaxLength = 4096;

/// Single-placket marginal of a ring of `length` plackets from dense powers
/// of W.
ChainMarginal exact_chain_marginal(const TransferOperator& op, int length);

/// Every positive-weight ring state with its normalized probability.
struct ChainEnsemble {
  std::vector<std::vector<std::uint64_t>> states;
  std::vector<double> probabilities;
  double partition_function = 0.0;
};

/// Direct enumeration of ring states by product of bond elements; ring states
/// with a bond at Hamming distance >= 2 are pruned while building.
/// Limited to (2^N)^L <= 2^22.
ChainEnsemble enumerate_chain_states(const TransferOperator& op, int length);

/// Ring states reachable from `start` by single-spin flips of one placket that
/// keep every bond at Hamming distance <= 1 and every bond element positive,
/// with their normalized weights. The restricted single-flip dynamics cannot
/// leave this set, so it is the stationary support of the sampler.
/// Limited to 2^22 states.
ChainEnsemble reachable_chain_states(const TransferOperator& op,
                                     const std::vector<std::uint64_t>& start);

}  // namespace ztqmc

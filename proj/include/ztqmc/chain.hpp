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
#include <vector>

#include "ztqmc/instance.hpp"
#include "ztqmc/rng.hpp"
#include "ztqmc/transfer.hpp"

namespace ztqmc {

/// Flip spin `spin` of placket `placket`.
struct MoveProposal {
  int placket = 0;
  int spin = 0;
};

struct MeasurementRecord {
  std::int64_t step = 0;
  double omega = 0.0;
  /// Mean placket classical energy over the ring, divided by N^{3/2}.
  double mean_intensive_energy = 0.0;
};

struct StepStats {
  std::int64_t proposed = 0;
  std::int64_t allowed = 0;
  std::int64_t accepted = 0;

  StepStats& operator+=(const StepStats& o) {
    proposed += o.proposed;
    allowed += o.allowed;
    accepted += o.accepted;
    return *this;
  }
};

/// A ring of L plackets, each a full N-spin configuration of the same
/// instance, with the classical energy of every placket cached.
///
/// Placket lambda is bonded to lambda - 1 and lambda + 1 modulo L. The chain
/// holds a reference to the instance, which must outlive it.
class PlacketChain {
 public:
  /// Uniform ring of `length` copies of c0. Throws InvalidSize if length < 2
  /// and DimensionMismatch if c0 does not fit the instance.
  PlacketChain(const SpinGlassInstance& inst, const SpinConfiguration& c0,
               int length);

  /// Arbitrary ring state, used by oracles and tests. The adjacency
  /// invariant is not required here; chain_log_weight reports -inf for
  /// states that violate it.
  static PlacketChain from_plackets(const SpinGlassInstance& inst,
                                    const std::vector<SpinConfiguration>& plackets);

  const SpinGlassInstance& instance() const { return *inst_; }
  int length() const { return static_cast<int>(bits_.size()); }
  int n_spins() const { return inst_->size(); }

  SpinConfiguration placket(int lambda) const {
    return {inst_->size(), bits_[static_cast<std::size_t>(lambda)]};
  }
  std::uint64_t bits(int lambda) const {
    return bits_[static_cast<std::size_t>(lambda)];
  }
  std::int64_t energy(int lambda) const {
    return energies_[static_cast<std::size_t>(lambda)];
  }
  /// Sum of cached placket energies.
  std::int64_t total_energy() const { return total_energy_; }

  int left(int lambda) const { return lambda == 0 ? length() - 1 : lambda - 1; }
  int right(int lambda) const { return lambda + 1 == length() ? 0 : lambda + 1; }

  /// Unconditionally applies the flip and updates the caches incrementally.
  void apply(const MoveProposal& mv);

  /// Index of the placket with the lowest cached energy (first on ties).
  int lowest_placket() const;

  /// Cached energies and their sum equal a full recomputation.
  bool cache_consistent() const;

  const std::vector<std::uint64_t>& packed() const { return bits_; }

 private:
  PlacketChain(const SpinGlassInstance& inst, std::vector<std::uint64_t> bits);

  const SpinGlassInstance* inst_;
  std::vector<std::uint64_t> bits_;
  std::vector<std::int64_t> energies_;
  std::int64_t total_energy_ = 0;
};

PlacketChain init_chain(const SpinGlassInstance& inst,
                        const SpinConfiguration& c0, int length);

/// True iff each neighbor of the placket equals it, or differs from it
/// exactly and only at the proposed spin. These are precisely the moves after
/// which both touched bonds are nonzero elements of W.
bool is_allowed(const PlacketChain& chain, const MoveProposal& mv);

/// Ratio of chain weights after/before the move. Only the two bonds touching
/// the placket change, so this is
///   W(left, mu') W(mu', right) / (W(left, mu) W(mu, right)).
///
/// At omega = 0 a numerator with a vanishing factor gives 0; a nonzero
/// numerator over a vanishing denominator gives +inf. A vanishing denominator
/// at omega > 0 means the chain had zero weight and throws std::logic_error.
double acceptance_ratio(const PlacketChain& chain, const TransferOperator& op,
                        const MoveProposal& mv);

/// One Monte Carlo step: L visits, each to a uniformly drawn placket and spin.
/// Disallowed proposals are counted as rejected visits. Allowed ones are
/// accepted with probability min(1, acceptance_ratio).
StepStats mc_step(PlacketChain& chain, const TransferOperator& op, Rng& rng);

MeasurementRecord measure(const PlacketChain& chain, std::int64_t step,
                          double omega);

/// Sum of log bond elements around the ring; -inf for a zero-weight state.
double chain_log_weight(const PlacketChain& chain, const TransferOperator& op);

}  // namespace ztqmc

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

#include "ztqmc/chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ztqmc/error.hpp"

namespace ztqmc {

PlacketChain::PlacketChain(const SpinGlassInstance& inst,
                           std::vector<std::uint64_t> bits)
    : inst_(&inst), bits_(std::move(bits)) {
  if (bits_.size() < 2) {
    throw InvalidSize("a placket chain needs at least 2 plackets");
  }
  energies_.reserve(bits_.size());
  for (const auto b : bits_) {
    energies_.push_back(inst.energy(b));
    total_energy_ += energies_.back();
  }
}

PlacketChain::PlacketChain(const SpinGlassInstance& inst,
                           const SpinConfiguration& c0, int length)
    : inst_(&inst) {
  if (length < 2) throw InvalidSize("a placket chain needs at least 2 plackets");
  if (c0.size() != inst.size()) {
    throw DimensionMismatch("initial configuration does not match instance");
  }
  const std::int64_t e = inst.energy(c0.bits());
  bits_.assign(static_cast<std::size_t>(length), c0.bits());
  energies_.assign(static_cast<std::size_t>(length), e);
  total_energy_ = e * length;
}

PlacketChain PlacketChain::from_plackets(
    const SpinGlassInstance& inst,
    const std::vector<SpinConfiguration>& plackets) {
  std::vector<std::uint64_t> bits;
  bits.reserve(plackets.size());
  for (const auto& c : plackets) {
    if (c.size() != inst.size()) {
      throw DimensionMismatch("placket does not match instance");
    }
    bits.push_back(c.bits());
  }
  return {inst, std::move(bits)};
}

void PlacketChain::apply(const MoveProposal& mv) {
  auto lambda = static_cast<std::size_t>(mv.placket);
  const std::int64_t d = inst_->delta(bits_[lambda], mv.spin);
  bits_[lambda] ^= std::uint64_t{1} << mv.spin;
  energies_[lambda] += d;
  total_energy_ += d;
}

int PlacketChain::lowest_placket() const {
  return static_cast<int>(std::min_element(energies_.begin(), energies_.end()) -
                          energies_.begin());
}

bool PlacketChain::cache_consistent() const {
  std::int64_t total = 0;
  for (std::size_t k = 0; k < bits_.size(); ++k) {
    const std::int64_t e = inst_->energy(bits_[k]);
    if (e != energies_[k]) return false;
    total += e;
  }
  return total == total_energy_;
}

PlacketChain init_chain(const SpinGlassInstance& inst,
                        const SpinConfiguration& c0, int length) {
  return {inst, c0, length};
}

bool is_allowed(const PlacketChain& chain, const MoveProposal& mv) {
  const std::uint64_t mu = chain.bits(mv.placket);
  const std::uint64_t flip = std::uint64_t{1} << mv.spin;
  const std::uint64_t dl = chain.bits(chain.left(mv.placket)) ^ mu;
  const std::uint64_t dr = chain.bits(chain.right(mv.placket)) ^ mu;
  return (dl == 0 || dl == flip) && (dr == 0 || dr == flip);
}

namespace {

double ratio_of(double num, double den, double omega) {
  if (num == 0.0) return 0.0;
  if (den == 0.0) {
    if (omega == 0.0) return std::numeric_limits<double>::infinity();
    throw std::logic_error("acceptance ratio on a zero-weight chain state");
  }
  return num / den;
}

// Ratio for a move whose flipped energy is already known.
double ratio_with(const PlacketChain& chain, const TransferOperator& op,
                  const MoveProposal& mv, std::int64_t flipped_energy) {
  const int lambda = mv.placket;
  const std::uint64_t mu = chain.bits(lambda);
  const std::uint64_t mu_new = mu ^ (std::uint64_t{1} << mv.spin);
  const std::int64_t e = chain.energy(lambda);
  const std::uint64_t l = chain.bits(chain.left(lambda));
  const std::uint64_t r = chain.bits(chain.right(lambda));
  const double num =
      op.element(mu_new, l, flipped_energy) * op.element(mu_new, r, flipped_energy);
  const double den = op.element(mu, l, e) * op.element(mu, r, e);
  return ratio_of(num, den, op.omega());
}

}  // namespace

double acceptance_ratio(const PlacketChain& chain, const TransferOperator& op,
                        const MoveProposal& mv) {
  if (mv.placket < 0 || mv.placket >= chain.length() || mv.spin < 0 ||
      mv.spin >= chain.n_spins()) {
    throw IndexOutOfRange("move proposal out of range");
  }
  const std::int64_t e_new =
      chain.energy(mv.placket) +
      chain.instance().delta(chain.bits(mv.placket), mv.spin);
  return ratio_with(chain, op, mv, e_new);
}

StepStats mc_step(PlacketChain& chain, const TransferOperator& op, Rng& rng) {
  const int length = chain.length();
  const auto n = static_cast<std::uint64_t>(chain.n_spins());
  const auto& inst = chain.instance();
  StepStats stats;
  stats.proposed = length;
  for (int v = 0; v < length; ++v) {
    const MoveProposal mv{static_cast<int>(rng.below(static_cast<std::uint64_t>(length))),
                          static_cast<int>(rng.below(n))};
    if (!is_allowed(chain, mv)) continue;
    ++stats.allowed;
    const std::int64_t e_new =
        chain.energy(mv.placket) + inst.delta(chain.bits(mv.placket), mv.spin);
    const double r = ratio_with(chain, op, mv, e_new);
    if (r >= 1.0 || (r > 0.0 && rng.uniform() < r)) {
      chain.apply(mv);
      ++stats.accepted;
    }
  }
  return stats;
}

MeasurementRecord measure(const PlacketChain& chain, std::int64_t step,
                          double omega) {
  const double mean =
      static_cast<double>(chain.total_energy()) / chain.length();
  return {step, omega, intensive_energy(mean, chain.n_spins())};
}

double chain_log_weight(const PlacketChain& chain, const TransferOperator& op) {
  double log_w = 0.0;
  for (int lambda = 0; lambda < chain.length(); ++lambda) {
    const double w = op.element(chain.bits(lambda),
                                chain.bits(chain.right(lambda)),
                                chain.energy(lambda));
    if (w <= 0.0) return -std::numeric_limits<double>::infinity();
    log_w += std::log(w);
  }
  return log_w;
}

}  // namespace ztqmc

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

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ztqmc/instance.hpp"

namespace ztqmc {

/// The shifted operator W = C I - H_tot with C = N(N-1)/2, evaluated on
/// demand. It is never stored as a matrix: callers get single elements or the
/// action on a vector.
///
/// Holds a reference to the instance, which must outlive the operator.
class TransferOperator {
 public:
  /// Throws ConfigError for negative or non-finite omega.
  TransferOperator(const SpinGlassInstance& inst, double omega);

  const SpinGlassInstance& instance() const { return *inst_; }
  double omega() const { return omega_; }
  std::int64_t shift() const { return shift_; }
  int size() const { return inst_->size(); }

  TransferOperator with_omega(double omega) const { return {*inst_, omega}; }

  /// C - E for a configuration of classical energy E.
  double diagonal(std::int64_t raw_energy) const {
    return static_cast<double>(shift_ - raw_energy);
  }

  /// Element between packed configurations; `energy_k` is the classical
  /// energy of k and is only read on the diagonal.
  double element(std::uint64_t k, std::uint64_t l,
                 std::int64_t energy_k) const {
    if (k == l) return diagonal(energy_k);
    return std::popcount(k ^ l) == 1 ? omega_ : 0.0;
  }

 private:
  const SpinGlassInstance* inst_;
  double omega_;
  std::int64_t shift_;
};

/// W(k, l): C - E_k on the diagonal, omega between single-flip neighbors,
/// 0 otherwise. Throws DimensionMismatch for wrongly sized configurations.
double w_element(const TransferOperator& op, const SpinConfiguration& k,
                 const SpinConfiguration& l);

/// Largest N for which validate() enumerates the full basis.
inline constexpr int kValidateMaxSpins = 12;

struct ValidityReport {
  bool non_negative = false;
  bool symmetric = false;
  /// False at omega = 0: every basis state is then a closed subspace.
  bool irreducible = false;
  double min_diagonal = 0.0;
  double max_diagonal = 0.0;
  std::int64_t pairs_checked = 0;
  std::string detail;

  bool all_passed() const { return non_negative && symmetric && irreducible; }
};

/// Exhaustive check of the conditions the Monte Carlo relies on. Symmetry is
/// checked on all single-flip pairs plus a fixed random sample of others.
ValidityReport validate(const TransferOperator& op);

/// Diagonal C - E_k for every basis state k (N <= 24).
std::vector<double> transfer_diagonal(const TransferOperator& op);

/// out = W in, on the full 2^N basis, given the diagonal from
/// transfer_diagonal().
void apply_transfer(const TransferOperator& op, std::span<const double> diag,
                    std::span<const double> in, std::span<double> out);

}  // namespace ztqmc

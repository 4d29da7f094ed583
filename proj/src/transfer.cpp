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

#include "ztqmc/transfer.hpp"

#include <cmath>
#include <queue>
#include <sstream>

#include "ztqmc/error.hpp"
#include "ztqmc/rng.hpp"

namespace ztqmc {

namespace {

constexpr int kDiagonalMaxSpins = 24;

std::string cost_message(int n, int cap) {
  std::ostringstream os;
  os << "N = " << n << " exceeds the cap of " << cap << " ("
     << std::ldexp(1.0, n) << " basis states)";
  return os.str();
}

}  // namespace

TransferOperator::TransferOperator(const SpinGlassInstance& inst, double omega)
    : inst_(&inst), omega_(omega), shift_(inst.pair_count()) {
  if (!(omega >= 0.0) || !std::isfinite(omega)) {
    throw ConfigError("transverse field must be finite and non-negative");
  }
}

double w_element(const TransferOperator& op, const SpinConfiguration& k,
                 const SpinConfiguration& l) {
  if (k.size() != op.size() || l.size() != op.size()) {
    throw DimensionMismatch("configuration size does not match operator");
  }
  const std::int64_t ek =
      k == l ? op.instance().energy(k.bits()) : std::int64_t{0};
  return op.element(k.bits(), l.bits(), ek);
}

ValidityReport validate(const TransferOperator& op) {
  const int n = op.size();
  if (n > kValidateMaxSpins) throw CapExceeded(cost_message(n, kValidateMaxSpins));
  const auto& inst = op.instance();
  const std::uint64_t dim = std::uint64_t{1} << n;

  ValidityReport report;
  report.min_diagonal = op.diagonal(inst.energy(0));
  report.max_diagonal = report.min_diagonal;
  for (std::uint64_t k = 0; k < dim; ++k) {
    const double d = op.diagonal(inst.energy(k));
    report.min_diagonal = std::min(report.min_diagonal, d);
    report.max_diagonal = std::max(report.max_diagonal, d);
  }
  report.non_negative = report.min_diagonal >= 0.0;

  bool symmetric = true;
  auto check_pair = [&](std::uint64_t k, std::uint64_t l) {
    const double a = op.element(k, l, inst.energy(k));
    const double b = op.element(l, k, inst.energy(l));
    if (a != b) symmetric = false;
    ++report.pairs_checked;
  };
  for (std::uint64_t k = 0; k < dim; ++k) {
    for (int i = 0; i < n; ++i) check_pair(k, k ^ (std::uint64_t{1} << i));
  }
  Rng rng(0x5eed0f5a3b1eULL);
  for (int s = 0; s < 4096; ++s) check_pair(rng.below(dim), rng.below(dim));
  report.symmetric = symmetric;

  // Breadth-first search over the graph of positive off-diagonal elements.
  std::vector<char> seen(dim, 0);
  std::queue<std::uint64_t> frontier;
  seen[0] = 1;
  frontier.push(0);
  std::uint64_t reached = 1;
  while (!frontier.empty()) {
    const std::uint64_t k = frontier.front();
    frontier.pop();
    for (int i = 0; i < n; ++i) {
      const std::uint64_t l = k ^ (std::uint64_t{1} << i);
      if (!seen[l] && op.element(k, l, 0) > 0.0) {
        seen[l] = 1;
        ++reached;
        frontier.push(l);
      }
    }
  }
  report.irreducible = reached == dim;

  std::ostringstream os;
  os << "min diagonal " << report.min_diagonal << ", " << reached << "/" << dim
     << " states connected";
  if (op.omega() == 0.0) os << " (omega = 0: reducible)";
  report.detail = os.str();
  return report;
}

std::vector<double> transfer_diagonal(const TransferOperator& op) {
  const int n = op.size();
  if (n > kDiagonalMaxSpins) throw CapExceeded(cost_message(n, kDiagonalMaxSpins));
  const auto& inst = op.instance();
  const std::uint64_t dim = std::uint64_t{1} << n;
  std::vector<double> diag(dim);
  // Gray-code walk so each step is a single O(1) delta.
  std::uint64_t bits = 0;
  std::int64_t e = inst.energy(0);
  diag[0] = op.diagonal(e);
  for (std::uint64_t g = 1; g < dim; ++g) {
    const int i = std::countr_zero(g);
    e += inst.delta(bits, i);
    bits ^= std::uint64_t{1} << i;
    diag[bits] = op.diagonal(e);
  }
  return diag;
}

void apply_transfer(const TransferOperator& op, std::span<const double> diag,
                    std::span<const double> in, std::span<double> out) {
  const int n = op.size();
  const std::size_t dim = std::size_t{1} << n;
  if (diag.size() != dim || in.size() != dim || out.size() != dim) {
    throw DimensionMismatch("vector length does not match 2^N");
  }
  const double omega = op.omega();
  for (std::size_t k = 0; k < dim; ++k) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += in[k ^ (std::size_t{1} << i)];
    out[k] = diag[k] * in[k] + omega * acc;
  }
}

}  // namespace ztqmc

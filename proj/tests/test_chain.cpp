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

#include <doctest.h>

#include <bit>
#include <cmath>
#include <map>

#include "test_support.hpp"
#include "ztqmc/chain.hpp"
#include "ztqmc/error.hpp"
#include "ztqmc/oracle.hpp"

using namespace ztqmc;

namespace {

// Random ring state that keeps every adjacent pair within Hamming distance 1,
// built as a walk that is closed back onto the first placket.
std::vector<SpinConfiguration> random_walk_ring(int n, int length, Rng& rng) {
  std::vector<SpinConfiguration> ring;
  std::uint64_t bits = rng.next() & spin_mask(n);
  const std::uint64_t start = bits;
  for (int k = 0; k < length; ++k) {
    ring.emplace_back(n, bits);
    const int remaining = length - 1 - k;
    const int dist = std::popcount(bits ^ start);
    if (dist > 0 && dist >= remaining) {
      bits ^= std::uint64_t{1} << std::countr_zero(bits ^ start);
    } else if (rng.coin()) {
      bits ^= std::uint64_t{1} << rng.below(static_cast<std::uint64_t>(n));
    }
  }
  return ring;
}

}  // namespace

TEST_CASE("init_chain") {
  const auto inst = random_instance(30, 5);
  const auto up = SpinConfiguration::all_up(30);
  const auto chain = init_chain(inst, up, 600);
  CHECK(chain.length() == 600);
  for (int l = 0; l < 600; ++l) {
    REQUIRE(chain.placket(l) == up);
    REQUIRE(chain.energy(l) == classical_energy(inst, up).raw);
  }
  CHECK(chain.cache_consistent());
  CHECK(init_chain(inst, up, 2).length() == 2);
  CHECK_THROWS_AS(init_chain(inst, up, 1), InvalidSize);
  CHECK_THROWS_AS(init_chain(inst, SpinConfiguration::all_up(29), 4), DimensionMismatch);
}

TEST_CASE("is_allowed examples") {
  const auto inst = random_instance(5, 2);
  const SpinConfiguration mu(5, 0b10110);
  auto uniform = init_chain(inst, mu, 4);
  for (int l = 0; l < 4; ++l) {
    for (int i = 0; i < 5; ++i) CHECK(is_allowed(uniform, {l, i}));
  }

  // Left neighbor of placket 1 differs at spin 3.
  auto chain = PlacketChain::from_plackets(inst, {mu.flipped(3), mu, mu, mu});
  CHECK(is_allowed(chain, {1, 3}));
  CHECK_FALSE(is_allowed(chain, {1, 0}));
  CHECK_FALSE(is_allowed(chain, {1, 2}));
}

TEST_CASE("is_allowed matches nonzero post-move bonds") {
  // No ferromagnetic configuration has E = +C for N >= 3, so every diagonal
  // element is positive and allowed is exactly "both new bonds nonzero".
  const auto ferro = uniform_instance(4, 1);
  const TransferOperator op(ferro, 1.0);
  Rng rng(17);
  for (int trial = 0; trial < 2000; ++trial) {
    const int length = 3 + static_cast<int>(rng.below(5));
    const auto ring = random_walk_ring(4, length, rng);
    const auto chain = PlacketChain::from_plackets(ferro, ring);
    const MoveProposal mv{static_cast<int>(rng.below(static_cast<std::uint64_t>(length))),
                          static_cast<int>(rng.below(4))};
    const auto flipped = ring[static_cast<std::size_t>(mv.placket)].flipped(mv.spin);
    const bool oracle =
        w_element(op, ring[static_cast<std::size_t>(chain.left(mv.placket))], flipped) > 0 &&
        w_element(op, flipped, ring[static_cast<std::size_t>(chain.right(mv.placket))]) > 0;
    REQUIRE(is_allowed(chain, mv) == oracle);
  }
}

TEST_CASE("acceptance_ratio examples") {
  const SpinGlassInstance pair(2, 0, {1});
  const auto up = SpinConfiguration::all_up(2);
  const auto chain = init_chain(pair, up, 5);
  CHECK(acceptance_ratio(chain, TransferOperator(pair, 0.5), {2, 1}) ==
        doctest::Approx(0.0625));
  CHECK(acceptance_ratio(chain, TransferOperator(pair, 0.0), {2, 1}) == 0.0);

  // Both neighbors already differ at the flipped spin.
  const auto inst = random_instance(6, 44);
  const SpinConfiguration mu(6, 0b011010);
  const auto target = mu.flipped(4);
  const auto spike = PlacketChain::from_plackets(inst, {target, mu, target, target});
  const double omega = 0.8;
  const TransferOperator op(inst, omega);
  const double c_minus_e = static_cast<double>(op.shift() - inst.energy(target.bits()));
  CHECK(acceptance_ratio(spike, op, {1, 4}) ==
        doctest::Approx(c_minus_e * c_minus_e / (omega * omega)).epsilon(1e-14));
  // At omega = 0 that collapse has a vanishing denominator.
  CHECK(std::isinf(acceptance_ratio(spike, op.with_omega(0.0), {1, 4})));
  CHECK(acceptance_ratio(spike, op, {1, 2}) == 0.0);
  CHECK_THROWS_AS(acceptance_ratio(spike, op, {4, 0}), IndexOutOfRange);
}

TEST_CASE("acceptance_ratio on a zero-weight state asserts") {
  const auto afm = uniform_instance(3, -1);
  const auto up = SpinConfiguration::all_up(3);  // E = +C
  const auto chain = init_chain(afm, up, 3);
  CHECK(std::isinf(-chain_log_weight(chain, TransferOperator(afm, 1.0))));
  CHECK_THROWS_AS(acceptance_ratio(chain, TransferOperator(afm, 1.0), {0, 0}),
                  std::logic_error);
}

TEST_CASE("chain_log_weight") {
  const auto inst = random_instance(5, 8);
  const SpinConfiguration c0(5, 0b01101);
  const TransferOperator op(inst, 1.5);
  const auto chain = init_chain(inst, c0, 7);
  CHECK(chain_log_weight(chain, op) ==
        doctest::Approx(7 * std::log(static_cast<double>(op.shift() - inst.energy(c0.bits())))));
  const auto broken =
      PlacketChain::from_plackets(inst, {c0, c0.flipped(0).flipped(1), c0});
  CHECK(std::isinf(chain_log_weight(broken, op)));
  CHECK(chain_log_weight(broken, op) < 0);
}

TEST_CASE("two-bond locality: weight ratio equals acceptance_ratio") {
  Rng rng(99);
  for (int trial = 0; trial < 3000; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(7));
    const auto inst = random_instance(n, rng.next());
    const TransferOperator op(inst, 0.2 + 3.0 * rng.uniform());
    const int length = 2 + static_cast<int>(rng.below(8));
    auto ring = random_walk_ring(n, length, rng);
    auto chain = PlacketChain::from_plackets(inst, ring);
    const double before = chain_log_weight(chain, op);
    if (!std::isfinite(before)) continue;
    const MoveProposal mv{static_cast<int>(rng.below(static_cast<std::uint64_t>(length))),
                          static_cast<int>(rng.below(static_cast<std::uint64_t>(n)))};
    const double r = acceptance_ratio(chain, op, mv);
    chain.apply(mv);
    const double after = chain_log_weight(chain, op);
    if (r == 0.0) {
      REQUIRE(std::isinf(after));
    } else {
      REQUIRE(std::exp(after - before) == doctest::Approx(r).epsilon(1e-10));
    }
    REQUIRE(chain.cache_consistent());
  }
}

TEST_CASE("mc_step at omega = 0 freezes a uniform chain") {
  const auto inst = random_instance(8, 3);
  auto chain = init_chain(inst, SpinConfiguration(8, 0b10010111), 20);
  const auto before = chain.packed();
  const TransferOperator op(inst, 0.0);
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    const auto s = mc_step(chain, op, rng);
    REQUIRE(s.accepted == 0);
    REQUIRE(s.allowed == 20);
  }
  CHECK(chain.packed() == before);
}

TEST_CASE("mc_step counters, weight positivity and cache after 1e4 steps") {
  const auto inst = random_instance(10, 12);
  auto chain = init_chain(inst, SpinConfiguration(10, 0b1100101011), 40);
  const TransferOperator op(inst, 1.0);
  Rng rng(6);
  StepStats total;
  for (int t = 0; t < 10000; ++t) {
    const auto s = mc_step(chain, op, rng);
    REQUIRE(s.proposed == 40);
    REQUIRE(s.allowed <= s.proposed);
    REQUIRE(s.accepted <= s.allowed);
    total += s;
    if (t % 500 == 0) REQUIRE(std::isfinite(chain_log_weight(chain, op)));
  }
  CHECK(total.accepted > 0);
  CHECK(chain.cache_consistent());
  for (int l = 0; l < chain.length(); ++l) {
    REQUIRE(chain.placket(l).hamming(chain.placket(chain.right(l))) <= 1);
  }
}

TEST_CASE("measure") {
  const auto inst = random_instance(9, 1);
  const SpinConfiguration c0(9, 0b100110101);
  const auto chain = init_chain(inst, c0, 10);
  const auto rec = measure(chain, 3, 0.4);
  CHECK(rec.step == 3);
  CHECK(rec.omega == 0.4);
  CHECK(rec.mean_intensive_energy == doctest::Approx(classical_energy(inst, c0).intensive));

  const auto ferro = uniform_instance(30, 1);
  const auto fchain = init_chain(ferro, SpinConfiguration::all_up(30), 6);
  const double density = measure(fchain, 0, 1.0).mean_intensive_energy;
  CHECK(density == doctest::Approx(-435.0 / std::pow(30.0, 1.5)));
  CHECK(density == doctest::Approx(-29.0 / (2.0 * std::sqrt(30.0))));
  CHECK(density == doctest::Approx(-2.647).epsilon(1e-3));
}

TEST_CASE("detailed balance over every allowed move, N = 2, L = 3") {
  const SpinGlassInstance pair(2, 0, {1});
  for (double omega : {0.5, 1.0, 2.0}) {
    const TransferOperator op(pair, omega);
    const auto ens = enumerate_chain_states(op, 3);
    std::map<std::vector<std::uint64_t>, double> prob;
    for (std::size_t s = 0; s < ens.states.size(); ++s) prob[ens.states[s]] = ens.probabilities[s];
    int moves = 0;
    for (const auto& [state, pa] : prob) {
      std::vector<SpinConfiguration> ring;
      for (auto b : state) ring.emplace_back(2, b);
      const auto a = PlacketChain::from_plackets(pair, ring);
      for (int l = 0; l < 3; ++l) {
        for (int i = 0; i < 2; ++i) {
          if (!is_allowed(a, {l, i})) continue;
          const double r_ab = acceptance_ratio(a, op, {l, i});
          auto b = a;
          b.apply({l, i});
          const auto it = prob.find(b.packed());
          if (r_ab == 0.0) {
            REQUIRE(it == prob.end());
            continue;
          }
          REQUIRE(it != prob.end());
          const double r_ba = acceptance_ratio(b, op, {l, i});
          REQUIRE(std::abs(pa * std::min(1.0, r_ab) - it->second * std::min(1.0, r_ba)) < 1e-12);
          ++moves;
        }
      }
    }
    CHECK(moves > 0);
  }
}

TEST_CASE("single-flip dynamics splits the N = 2 chain into Z2 sectors") {
  const SpinGlassInstance pair(2, 0, {1});
  const TransferOperator op(pair, 1.0);
  const auto full = enumerate_chain_states(op, 3);
  const auto up = reachable_chain_states(op, {3, 3, 3});
  CHECK(full.states.size() == 14);
  CHECK(up.states.size() == 7);
  CHECK(up.partition_function == doctest::Approx(0.5 * full.partition_function));
  for (const auto& ring : up.states) {
    for (auto k : ring) CHECK(k != 0);
  }
}

TEST_CASE("ring-state histogram matches the reachable class") {
  struct Case {
    SpinGlassInstance inst;
    int length;
    double omega;
  };
  const std::vector<Case> cases = {{SpinGlassInstance(2, 0, {1}), 4, 1.0},
                                   {random_instance(3, 5), 4, 1.0},
                                   {random_instance(3, 8), 3, 0.7}};
  for (const auto& c : cases) {
    const TransferOperator op(c.inst, c.omega);
    const auto start = init_chain(c.inst, SpinConfiguration::all_up(c.inst.size()), c.length);
    const auto cls = reachable_chain_states(op, start.packed());
    std::map<std::vector<std::uint64_t>, std::size_t> index;
    for (std::size_t s = 0; s < cls.states.size(); ++s) index[cls.states[s]] = s;
    auto chain = start;
    Rng rng(31337);
    std::vector<double> counts(cls.states.size(), 0.0);
    const int steps = 1000000;
    for (int t = 0; t < steps; ++t) {
      mc_step(chain, op, rng);
      const auto it = index.find(chain.packed());
      REQUIRE(it != index.end());
      counts[it->second] += 1.0 / steps;
    }
    const double tv = ztqmc::testing::total_variation(counts, cls.probabilities);
    MESSAGE("N = " << c.inst.size() << " L = " << c.length << " states "
                   << cls.states.size() << " TV = " << tv);
    CHECK(tv < 0.02);
  }
}

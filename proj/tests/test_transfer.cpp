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

#include <cmath>

#include "ztqmc/error.hpp"
#include "ztqmc/rng.hpp"
#include "ztqmc/transfer.hpp"

using namespace ztqmc;

TEST_CASE("w_element examples") {
  const SpinGlassInstance pair(2, 0, {1});
  const TransferOperator op(pair, 0.5);
  CHECK(op.shift() == 1);
  const auto up = SpinConfiguration::all_up(2);
  CHECK(w_element(op, up, up) == 2.0);
  CHECK(w_element(op, up, up.flipped(0)) == 0.5);
  CHECK(w_element(op, up, SpinConfiguration::all_down(2)) == 0.0);
  CHECK_THROWS_AS(w_element(op, up, SpinConfiguration::all_up(3)), DimensionMismatch);
  CHECK_THROWS_AS(TransferOperator(pair, -1.0), ConfigError);
  CHECK_THROWS_AS(TransferOperator(pair, NAN), ConfigError);
}

TEST_CASE("shift is N(N-1)/2") {
  for (int n = 2; n <= 40; n += 7) {
    const auto inst = random_instance(n, 1);
    CHECK(TransferOperator(inst, 1.0).shift() == n * (n - 1) / 2);
  }
}

TEST_CASE("validate passes for omega > 0 on enumerable sizes") {
  for (int n = 2; n <= 12; ++n) {
    const auto inst = random_instance(n, 500 + n);
    const auto report = validate(TransferOperator(inst, 1.0));
    CHECK(report.non_negative);
    CHECK(report.symmetric);
    CHECK(report.irreducible);
    CHECK(report.all_passed());
    CHECK(report.min_diagonal >= 0.0);
  }
  CHECK_THROWS_AS(validate(TransferOperator(random_instance(13, 1), 1.0)), CapExceeded);
}

TEST_CASE("validate flags omega = 0 as reducible") {
  const auto inst = random_instance(6, 9);
  const auto report = validate(TransferOperator(inst, 0.0));
  CHECK(report.non_negative);
  CHECK(report.symmetric);
  CHECK_FALSE(report.irreducible);
}

TEST_CASE("ferromagnet diagonal is maximal at all-up") {
  const auto ferro = uniform_instance(8, 1);
  const TransferOperator op(ferro, 1.0);
  const auto up = SpinConfiguration::all_up(8);
  CHECK(w_element(op, up, up) == 2.0 * op.shift());
  CHECK(validate(op).max_diagonal == 2.0 * op.shift());
}

TEST_CASE("zero diagonal only where E = +C") {
  // Antiferromagnet: aligned states leave every bond unsatisfied.
  const auto afm = uniform_instance(5, -1);
  const TransferOperator op(afm, 1.0);
  const auto report = validate(op);
  CHECK(report.min_diagonal == 0.0);
  const auto up = SpinConfiguration::all_up(5);
  CHECK(w_element(op, up, up) == 0.0);
  for (std::uint64_t k = 0; k < 32; ++k) {
    const SpinConfiguration c(5, k);
    if (w_element(op, c, c) == 0.0) CHECK(afm.energy(k) == op.shift());
  }
}

TEST_CASE("sparsity and symmetry of rows") {
  const auto inst = random_instance(7, 31);
  const TransferOperator op(inst, 0.7);
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const SpinConfiguration k(7, rng.below(128));
    int omega_entries = 0;
    for (std::uint64_t l = 0; l < 128; ++l) {
      const SpinConfiguration cl(7, l);
      const double a = w_element(op, k, cl);
      CHECK(a == w_element(op, cl, k));
      if (cl == k) continue;
      if (a == 0.7) ++omega_entries;
      else CHECK(a == 0.0);
    }
    CHECK(omega_entries == 7);
  }
}

TEST_CASE("apply_transfer matches element-wise product") {
  const auto inst = random_instance(6, 8);
  const TransferOperator op(inst, 1.3);
  const auto diag = transfer_diagonal(op);
  Rng rng(11);
  std::vector<double> v(64), w(64);
  for (auto& x : v) x = rng.uniform() - 0.5;
  apply_transfer(op, diag, v, w);
  for (std::uint64_t k = 0; k < 64; ++k) {
    double ref = 0.0;
    for (std::uint64_t l = 0; l < 64; ++l) {
      ref += w_element(op, SpinConfiguration(6, k), SpinConfiguration(6, l)) * v[l];
    }
    CHECK(w[k] == doctest::Approx(ref).epsilon(1e-13));
  }
}

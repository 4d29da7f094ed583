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

#include "ztqmc/instance.hpp"

#include <bit>
#include <cmath>
#include <fstream>

#include "ztqmc/error.hpp"
#include "ztqmc/rng.hpp"

namespace ztqmc {

namespace {

void check_size(int n) {
  if (n < 2 || n > kMaxSpins) {
    throw InvalidSize("spin count must be in [2, " +
                      std::to_string(kMaxSpins) + "], got " +
                      std::to_string(n));
  }
}

void check_index(int i, int n) {
  if (i < 0 || i >= n) {
    throw IndexOutOfRange("spin index " + std::to_string(i) +
                          " out of range for " + std::to_string(n) + " spins");
  }
}

void check_match(const SpinGlassInstance& inst, const SpinConfiguration& c) {
  if (c.size() != inst.size()) {
    throw DimensionMismatch("configuration has " + std::to_string(c.size()) +
                            " spins, instance has " +
                            std::to_string(inst.size()));
  }
}

}  // namespace

SpinConfiguration::SpinConfiguration(int n, std::uint64_t bits)
    : n_(n), bits_(bits) {
  if (n < 1 || n > kMaxSpins) {
    throw InvalidSize("configuration size out of range: " + std::to_string(n));
  }
  if ((bits & ~spin_mask(n)) != 0) {
    throw DimensionMismatch("configuration bits exceed " + std::to_string(n) +
                            " spins");
  }
}

int SpinConfiguration::spin(int i) const {
  check_index(i, n_);
  return ((bits_ >> i) & 1U) ? 1 : -1;
}

void SpinConfiguration::flip(int i) {
  check_index(i, n_);
  bits_ ^= std::uint64_t{1} << i;
}

SpinConfiguration SpinConfiguration::flipped(int i) const {
  SpinConfiguration c = *this;
  c.flip(i);
  return c;
}

int SpinConfiguration::hamming(const SpinConfiguration& other) const {
  if (other.n_ != n_) {
    throw DimensionMismatch("hamming distance between different sizes");
  }
  return std::popcount(bits_ ^ other.bits_);
}

std::string SpinConfiguration::to_string() const {
  std::string s(static_cast<std::size_t>(n_), '-');
  for (int i = 0; i < n_; ++i) {
    if ((bits_ >> i) & 1U) s[static_cast<std::size_t>(i)] = '+';
  }
  return s;
}

SpinConfiguration global_flip(const SpinConfiguration& c) {
  return {c.size(), ~c.bits() & spin_mask(c.size())};
}

double intensive_energy(double raw, int n) {
  return raw / std::pow(static_cast<double>(n), 1.5);
}

SpinGlassInstance::SpinGlassInstance(int n, std::uint64_t seed,
                                     std::vector<int> couplings)
    : n_(n), seed_(seed), couplings_(std::move(couplings)) {
  check_size(n);
  if (static_cast<std::int64_t>(couplings_.size()) != ztqmc::pair_count(n)) {
    throw ConfigError("expected " + std::to_string(ztqmc::pair_count(n)) +
                      " couplings, got " + std::to_string(couplings_.size()));
  }
  plus_.assign(static_cast<std::size_t>(n), 0);
  minus_.assign(static_cast<std::size_t>(n), 0);
  std::size_t k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++k) {
      const int J = couplings_[k];
      if (J != 1 && J != -1) {
        throw ConfigError("coupling must be +1 or -1, got " +
                          std::to_string(J));
      }
      auto& table = J > 0 ? plus_ : minus_;
      table[static_cast<std::size_t>(i)] |= std::uint64_t{1} << j;
      table[static_cast<std::size_t>(j)] |= std::uint64_t{1} << i;
    }
  }
}

int SpinGlassInstance::coupling(int i, int j) const {
  check_index(i, n_);
  check_index(j, n_);
  if (i == j) return 0;
  if (i > j) std::swap(i, j);
  // Row-major offset of (i, j) inside the strict upper triangle.
  const std::int64_t row = static_cast<std::int64_t>(i) * (2 * n_ - i - 1) / 2;
  return couplings_[static_cast<std::size_t>(row + (j - i - 1))];
}

std::int64_t SpinGlassInstance::energy(std::uint64_t bits) const {
  std::int64_t twice = 0;
  for (int i = 0; i < n_; ++i) {
    const std::int64_t h = local_field(bits, i);
    twice += ((bits >> i) & 1U) ? h : -h;
  }
  return -twice / 2;
}

SpinGlassInstance random_instance(int n, std::uint64_t seed) {
  check_size(n);
  Rng rng(seed);
  std::vector<int> couplings(static_cast<std::size_t>(pair_count(n)));
  for (auto& J : couplings) J = rng.coin() ? 1 : -1;
  return {n, seed, std::move(couplings)};
}

SpinGlassInstance uniform_instance(int n, int sign) {
  check_size(n);
  if (sign != 1 && sign != -1) throw ConfigError("sign must be +1 or -1");
  return {n, 0, std::vector<int>(static_cast<std::size_t>(pair_count(n)), sign)};
}

EnergyValue classical_energy(const SpinGlassInstance& inst,
                             const SpinConfiguration& c) {
  check_match(inst, c);
  const std::int64_t raw = inst.energy(c.bits());
  return {raw, intensive_energy(static_cast<double>(raw), inst.size())};
}

std::int64_t flip_delta(const SpinGlassInstance& inst,
                        const SpinConfiguration& c, int i) {
  check_match(inst, c);
  check_index(i, inst.size());
  return inst.delta(c.bits(), i);
}

nlohmann::json to_json(const SpinGlassInstance& inst) {
  return {{"n", inst.size()},
          {"seed", inst.seed()},
          {"couplings", std::vector<int>(inst.couplings().begin(),
                                         inst.couplings().end())}};
}

SpinGlassInstance instance_from_json(const nlohmann::json& j) {
  try {
    const int n = j.at("n").get<int>();
    const auto seed = j.contains("seed") ? j.at("seed").get<std::uint64_t>()
                                         : std::uint64_t{0};
    return {n, seed, j.at("couplings").get<std::vector<int>>()};
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed instance: ") + e.what());
  }
}

void save_instance(const SpinGlassInstance& inst,
                   const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << to_json(inst).dump() << '\n';
}

SpinGlassInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("cannot parse " + path.string() + ": " + e.what());
  }
  return instance_from_json(j);
}

}  // namespace ztqmc

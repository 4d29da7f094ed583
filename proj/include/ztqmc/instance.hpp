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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace ztqmc {

/// Configurations are packed into one 64-bit word.
inline constexpr int kMaxSpins = 64;

/// Total number of bonds of an all-to-all cluster, N(N-1)/2.
constexpr std::int64_t pair_count(int n) {
  return static_cast<std::int64_t>(n) * (n - 1) / 2;
}

constexpr std::uint64_t spin_mask(int n) {
  return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

/// An N-spin Ising configuration. Bit i set means spin i points up (+1),
/// cleared means down (-1). Spin indices are 0-based.
class SpinConfiguration {
 public:
  SpinConfiguration() = default;
  SpinConfiguration(int n, std::uint64_t bits);

  static SpinConfiguration all_up(int n) { return {n, spin_mask(n)}; }
  static SpinConfiguration all_down(int n) { return {n, 0}; }

  int size() const { return n_; }
  std::uint64_t bits() const { return bits_; }

  /// +1 or -1.
  int spin(int i) const;
  void flip(int i);
  SpinConfiguration flipped(int i) const;

  int hamming(const SpinConfiguration& other) const;

  /// '+' / '-' per spin, spin 0 first.
  std::string to_string() const;

  friend bool operator==(const SpinConfiguration&,
                         const SpinConfiguration&) = default;

 private:
  int n_ = 0;
  std::uint64_t bits_ = 0;
};

SpinConfiguration global_flip(const SpinConfiguration& c);

/// Exact classical energy in units of J together with its intensive density
/// raw / N^{3/2}.
struct EnergyValue {
  std::int64_t raw = 0;
  double intensive = 0.0;
};

double intensive_energy(double raw, int n);

/// One disorder realization of the infinite-range +-J Ising spin glass.
///
/// Couplings are stored as the upper triangle, row-major over i < j. For the
/// hot paths the table is also kept as per-spin bit masks of ferro- and
/// antiferromagnetic partners so a local field is four popcounts.
class SpinGlassInstance {
 public:
  /// Throws InvalidSize if n is out of [2, kMaxSpins] and ConfigError if the
  /// coupling list has the wrong length or an entry other than +-1.
  SpinGlassInstance(int n, std::uint64_t seed, std::vector<int> couplings);

  int size() const { return n_; }
  std::uint64_t seed() const { return seed_; }
  std::int64_t pair_count() const { return ztqmc::pair_count(n_); }
  std::span<const int> couplings() const { return couplings_; }

  /// J_ij for i != j (symmetric access), 0 on the diagonal.
  int coupling(int i, int j) const;

  /// sum_j J_ij s_j for packed spins.
  std::int64_t local_field(std::uint64_t bits, int i) const {
    const std::uint64_t p = plus_[i], m = minus_[i];
    return 2 * std::popcount(p & bits) - std::popcount(p) -
           2 * std::popcount(m & bits) + std::popcount(m);
  }

  /// Energy change from flipping spin i: 2 s_i sum_j J_ij s_j.
  std::int64_t delta(std::uint64_t bits, int i) const {
    const std::int64_t h = local_field(bits, i);
    return ((bits >> i) & 1U) ? 2 * h : -2 * h;
  }

  /// -sum_{i<j} J_ij s_i s_j for packed spins.
  std::int64_t energy(std::uint64_t bits) const;

  friend bool operator==(const SpinGlassInstance& a,
                         const SpinGlassInstance& b) {
    return a.n_ == b.n_ && a.couplings_ == b.couplings_;
  }

 private:
  int n_;
  std::uint64_t seed_;
  std::vector<int> couplings_;
  std::vector<std::uint64_t> plus_;
  std::vector<std::uint64_t> minus_;
};

/// Each J_ij is the top bit of one mt19937_64 draw seeded with `seed`, taken
/// in row-major order over i < j: 1 -> +1, 0 -> -1.
SpinGlassInstance random_instance(int n, std::uint64_t seed);

/// All couplings equal to `sign` (+1 ferromagnet, -1 antiferromagnet).
SpinGlassInstance uniform_instance(int n, int sign);

EnergyValue classical_energy(const SpinGlassInstance& inst,
                             const SpinConfiguration& c);

/// Exact change of classical_energy when spin i is flipped.
std::int64_t flip_delta(const SpinGlassInstance& inst,
                        const SpinConfiguration& c, int i);

nlohmann::json to_json(const SpinGlassInstance& inst);
SpinGlassInstance instance_from_json(const nlohmann::json& j);

void save_instance(const SpinGlassInstance& inst,
                   const std::filesystem::path& path);
SpinGlassInstance load_instance(const std::filesystem::path& path);

}  // namespace ztqmc

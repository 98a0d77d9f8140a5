// Copyright 2026 The Prosofuse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PROSOFUSE_RNG_HPP_
#define PROSOFUSE_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>

#include "prosofuse/common.hpp"

namespace prosofuse {

/// Deterministic random source.
///
/// The raw stream is std::mt19937_64, whose output sequence is pinned by the
/// C++ standard, so identical seeds give identical streams on every platform.
/// The real-valued transforms (uniform, Gaussian) are implemented here rather
/// than through std distributions, because the standard leaves distribution
/// algorithms implementation-defined and that would break bit reproducibility.
class RngState {
 public:
  explicit RngState(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard Gaussian via Box-Muller. Two uniforms per draw, no cached
  /// spare, so the consumption pattern is one-call-two-words.
  double normal() {
    const double u1 =
        (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  /// Uniform integer in [0, n). Masked rejection, exact (no modulo bias).
  std::int64_t uniform_int(std::int64_t n) {
    if (n <= 0) throw ArgumentError("uniform_int: n must be positive");
    const auto un = static_cast<std::uint64_t>(n);
    std::uint64_t mask = un - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    std::uint64_t r;
    do {
      r = next_u64() & mask;
    } while (r >= un);
    return static_cast<std::int64_t>(r);
  }

  /// Independent stream for (seed, stream) pairs, e.g. per training step.
  /// SplitMix64 finalizer over the combined words.
  static RngState derive(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z = z ^ (z >> 31);
    return RngState(z);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace prosofuse

#endif  // PROSOFUSE_RNG_HPP_

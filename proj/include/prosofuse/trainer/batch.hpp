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

#ifndef PROSOFUSE_TRAINER_BATCH_HPP_
#define PROSOFUSE_TRAINER_BATCH_HPP_

#include <cstdint>
#include <numeric>
#include <vector>

#include "prosofuse/common.hpp"
#include "prosofuse/rng.hpp"

namespace prosofuse {

// RNG stream tags for the training loop. Epoch streams shuffle example
// order; step streams drive dropout. The bases keep them disjoint from each
// other and from every other stream family in the codebase.
inline constexpr std::uint64_t kStreamEpochBase = 0xE70C'0000'0000'0000ull;
inline constexpr std::uint64_t kStreamStepBase = 0x57E7'0000'0000'0000ull;

// Fisher-Yates shuffle of [0, n) from a deterministic per-epoch stream.
inline std::vector<index_t> epoch_permutation(std::uint64_t seed,
                                              std::int64_t epoch, index_t n) {
  if (n < 1) throw ArgumentError("epoch_permutation: n must be >= 1");
  RngState rng = RngState::derive(
      seed, kStreamEpochBase + static_cast<std::uint64_t>(epoch));
  std::vector<index_t> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), index_t{0});
  for (index_t i = n - 1; i > 0; --i) {
    const index_t j = static_cast<index_t>(rng.uniform_int(i + 1));
    std::swap(perm[static_cast<std::size_t>(i)],
              perm[static_cast<std::size_t>(j)]);
  }
  return perm;
}

// Example indices of optimization step `step` (0-based), as a pure function
// of (seed, step, n, batch_size). Each epoch is an independent shuffle of
// all n examples cut into floor(n / B) full batches; the remainder is
// dropped. B shrinks to n when the dataset is smaller than the batch size.
inline std::vector<index_t> batch_for_step(std::uint64_t seed,
                                           std::int64_t step, index_t n,
                                           index_t batch_size) {
  if (step < 0) throw ArgumentError("batch_for_step: step must be >= 0");
  if (n < 1) throw ArgumentError("batch_for_step: empty dataset");
  if (batch_size < 1)
    throw ArgumentError("batch_for_step: batch_size must be >= 1");
  const index_t b = std::min(batch_size, n);
  const std::int64_t per_epoch = n / b;
  const std::int64_t epoch = step / per_epoch;
  const std::int64_t pos = step % per_epoch;
  const auto perm = epoch_permutation(seed, epoch, n);
  const auto first = perm.begin() + static_cast<std::ptrdiff_t>(pos * b);
  return std::vector<index_t>(first, first + static_cast<std::ptrdiff_t>(b));
}

}  // namespace prosofuse

#endif  // PROSOFUSE_TRAINER_BATCH_HPP_

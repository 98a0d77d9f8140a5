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

#ifndef PROSOFUSE_DATA_SPLIT_HPP_
#define PROSOFUSE_DATA_SPLIT_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "prosofuse/common.hpp"
#include "prosofuse/data/manifest.hpp"
#include "prosofuse/rng.hpp"

namespace prosofuse {

// Deterministic train/val/test assignment. Records are shuffled by seed,
// split sizes are floor(ratio*N) with the remainder handed out one-by-one
// in order of descending fractional part (ties to the earlier split).
inline Manifest split_manifest(const Manifest& m,
                               const std::array<double, 3>& ratios,
                               uint64_t seed) {
  if (m.records.empty())
    throw ArgumentError("split_manifest: empty manifest");
  const double sum = ratios[0] + ratios[1] + ratios[2];
  if (std::abs(sum - 1.0) > 1e-9)
    throw ArgumentError("split_manifest: ratios must sum to 1");
  for (const double r : ratios)
    if (r < 0.0) throw ArgumentError("split_manifest: negative ratio");

  const index_t n = static_cast<index_t>(m.records.size());
  std::vector<index_t> order(n);
  std::iota(order.begin(), order.end(), index_t(0));
  auto rng = RngState::derive(seed, 0x5B117);
  for (index_t i = n - 1; i > 0; --i)
    std::swap(order[i], order[rng.uniform_int(i + 1)]);

  std::array<index_t, 3> counts;
  std::array<double, 3> frac;
  index_t assigned = 0;
  for (int k = 0; k < 3; ++k) {
    const double exact = ratios[k] * n;
    counts[k] = static_cast<index_t>(std::floor(exact));
    frac[k] = exact - counts[k];
    assigned += counts[k];
  }
  for (index_t left = n - assigned; left > 0; --left) {
    int best = 0;
    for (int k = 1; k < 3; ++k)
      if (frac[k] > frac[best]) best = k;
    ++counts[best];
    frac[best] = -1.0;
  }

  Manifest out = m;
  static const char* kNames[3] = {"train", "val", "test"};
  index_t pos = 0;
  for (int k = 0; k < 3; ++k)
    for (index_t i = 0; i < counts[k]; ++i)
      out.records[order[pos++]].split = kNames[k];
  return out;
}

}  // namespace prosofuse

#endif  // PROSOFUSE_DATA_SPLIT_HPP_

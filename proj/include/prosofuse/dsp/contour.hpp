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

#ifndef PROSOFUSE_DSP_CONTOUR_HPP_
#define PROSOFUSE_DSP_CONTOUR_HPP_

#include <numeric>
#include <vector>

#include "prosofuse/common.hpp"

namespace prosofuse {

// Mean of each phone span of a frame-level contour. With voiced_only set,
// zero-valued frames are excluded from a span's mean and a span with no
// voiced frame yields 0 (the unvoiced sentinel survives pooling).
template <typename Real>
std::vector<Real> phone_average(const std::vector<Real>& contour,
                                const std::vector<index_t>& durations,
                                bool voiced_only = false) {
  const index_t total =
      std::accumulate(durations.begin(), durations.end(), index_t(0));
  if (total != static_cast<index_t>(contour.size()))
    throw AlignmentError("phone_average: durations do not cover contour");

  std::vector<Real> out;
  out.reserve(durations.size());
  index_t pos = 0;
  for (const index_t dur : durations) {
    if (dur < 0) throw AlignmentError("phone_average: negative duration");
    double acc = 0.0;
    index_t count = 0;
    for (index_t j = 0; j < dur; ++j) {
      const Real v = contour[pos + j];
      if (voiced_only && v == Real(0)) continue;
      acc += static_cast<double>(v);
      ++count;
    }
    out.push_back(count > 0 ? static_cast<Real>(acc / count) : Real(0));
    pos += dur;
  }
  return out;
}

// Sizes of the n contiguous chunks that partition t items as evenly as
// possible, longer chunks first.
inline std::vector<index_t> chunk_sizes(index_t t, index_t n) {
  if (n <= 0 || n > t)
    throw ArgumentError("chunk_sizes: need 1 <= n <= t");
  std::vector<index_t> sizes(n, t / n);
  for (index_t i = 0; i < t % n; ++i) ++sizes[i];
  return sizes;
}

// Shrinks a length-t sequence to length n by averaging each contiguous
// chunk of the near-equal partition.
template <typename Real>
std::vector<Real> downsample_average(const std::vector<Real>& p, index_t n) {
  const auto sizes = chunk_sizes(static_cast<index_t>(p.size()), n);
  std::vector<Real> out;
  out.reserve(n);
  index_t pos = 0;
  for (const index_t sz : sizes) {
    double acc = 0.0;
    for (index_t j = 0; j < sz; ++j) acc += static_cast<double>(p[pos + j]);
    out.push_back(static_cast<Real>(acc / sz));
    pos += sz;
  }
  return out;
}

}  // namespace prosofuse

#endif  // PROSOFUSE_DSP_CONTOUR_HPP_

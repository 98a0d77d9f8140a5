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

#ifndef PROSOFUSE_MODEL_POSITIONAL_HPP_
#define PROSOFUSE_MODEL_POSITIONAL_HPP_

#include <cmath>

#include "prosofuse/common.hpp"
#include "prosofuse/matrix.hpp"

namespace prosofuse {

// Fixed sinusoidal position table: pe[pos, 2i] = sin(pos / 10000^(2i/d)),
// pe[pos, 2i+1] = cos of the same argument.
template <typename Real>
Mat<Real> sinusoidal_pe(index_t length, index_t d) {
  if (d < 2 || d % 2 != 0)
    throw ConfigError("sinusoidal_pe: dimension must be even and >= 2");
  if (length < 1) throw ArgumentError("sinusoidal_pe: length must be >= 1");
  Mat<Real> pe(length, d);
  for (index_t pos = 0; pos < length; ++pos) {
    for (index_t i = 0; i < d / 2; ++i) {
      const double freq =
          std::pow(10000.0, -2.0 * static_cast<double>(i) / d);
      const double arg = static_cast<double>(pos) * freq;
      pe(pos, 2 * i) = static_cast<Real>(std::sin(arg));
      pe(pos, 2 * i + 1) = static_cast<Real>(std::cos(arg));
    }
  }
  return pe;
}

template <typename Real>
void add_positional(Mat<Real>& x) {
  const auto pe = sinusoidal_pe<Real>(x.rows(), x.cols());
  add_inplace(x, pe);
}

}  // namespace prosofuse

#endif  // PROSOFUSE_MODEL_POSITIONAL_HPP_

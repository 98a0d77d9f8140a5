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

#ifndef PROSOFUSE_DSP_RESAMPLE_HPP_
#define PROSOFUSE_DSP_RESAMPLE_HPP_

#include <cmath>
#include <vector>

#include "prosofuse/common.hpp"
#include "prosofuse/dsp/config.hpp"

namespace prosofuse {

namespace resample_detail {

inline double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = M_PI * x;
  return std::sin(px) / px;
}

}  // namespace resample_detail

// Windowed-sinc rate conversion. The kernel is a Hann-windowed sinc with
// cutoff at the lower of the two Nyquist frequencies; weights are
// renormalized to sum to 1 per output sample, which keeps DC exact and
// tames edge truncation. Equal rates return the input unchanged.
template <typename Real>
Waveform<Real> resample(const Waveform<Real>& w, int target_rate) {
  if (target_rate <= 0)
    throw ArgumentError("resample: target rate must be positive");
  w.require_valid("resample");
  if (target_rate == w.sample_rate) return w;

  const index_t in_len = w.size();
  const double ratio = static_cast<double>(target_rate) / w.sample_rate;
  const double scale = std::min(1.0, ratio);  // anti-aliasing cutoff
  const double half_width = 32.0 / scale;     // support in input samples
  const index_t out_len =
      std::max<index_t>(1, static_cast<index_t>(std::llround(in_len * ratio)));

  Waveform<Real> out;
  out.sample_rate = target_rate;
  out.samples.resize(out_len);
  for (index_t i = 0; i < out_len; ++i) {
    const double center = static_cast<double>(i) / ratio;
    const index_t lo =
        std::max<index_t>(0, static_cast<index_t>(std::ceil(center - half_width)));
    const index_t hi = std::min<index_t>(
        in_len - 1, static_cast<index_t>(std::floor(center + half_width)));
    double acc = 0.0, wsum = 0.0;
    for (index_t n = lo; n <= hi; ++n) {
      const double d = (n - center) * scale;
      const double taper =
          0.5 * (1.0 + std::cos(M_PI * (n - center) / half_width));
      const double k = resample_detail::sinc(d) * taper;
      acc += static_cast<double>(w.samples[n]) * k;
      wsum += k;
    }
    out.samples[i] = static_cast<Real>(wsum != 0.0 ? acc / wsum : 0.0);
  }
  return out;
}

}  // namespace prosofuse

#endif  // PROSOFUSE_DSP_RESAMPLE_HPP_

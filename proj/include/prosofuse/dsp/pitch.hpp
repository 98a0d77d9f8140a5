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

#ifndef PROSOFUSE_DSP_PITCH_HPP_
#define PROSOFUSE_DSP_PITCH_HPP_

#include <cmath>
#include <vector>

#include "prosofuse/common.hpp"
#include "prosofuse/dsp/config.hpp"
#include "prosofuse/dsp/stft.hpp"

namespace prosofuse {

// Per-frame fundamental frequency via the YIN difference function with
// cumulative-mean normalization and parabolic lag refinement. Frames share
// the mel hop grid; 0 marks unvoiced frames.
template <typename Real>
std::vector<Real> extract_pitch(const Waveform<Real>& w,
                                const DspConfig& cfg) {
  cfg.validate();
  w.require_valid("extract_pitch");
  if (w.sample_rate != cfg.sample_rate)
    throw SignalError("extract_pitch: waveform rate does not match config");
  const index_t len = w.size();
  if (len < cfg.hop)
    throw SignalError("extract_pitch: signal shorter than one hop");

  const index_t frames = frame_count(len, cfg);
  const index_t tau_min = static_cast<index_t>(
      std::floor(cfg.sample_rate / cfg.f0_max));
  const index_t tau_max = static_cast<index_t>(
      std::ceil(cfg.sample_rate / cfg.f0_min));
  const index_t win = cfg.yin_window;
  const index_t span = win + tau_max;  // samples consulted per frame

  std::vector<Real> f0(frames, Real(0));
  std::vector<double> seg(span);
  std::vector<double> diff(tau_max + 1);
  std::vector<double> cmnd(tau_max + 1);

  for (index_t t = 0; t < frames; ++t) {
    const index_t start = t * cfg.hop - span / 2;
    for (index_t j = 0; j < span; ++j)
      seg[j] = static_cast<double>(w.samples[reflect_index(start + j, len)]);

    diff[0] = 0.0;
    for (index_t tau = 1; tau <= tau_max; ++tau) {
      double acc = 0.0;
      for (index_t j = 0; j < win; ++j) {
        const double d = seg[j] - seg[j + tau];
        acc += d * d;
      }
      diff[tau] = acc;
    }

    cmnd[0] = 1.0;
    double running = 0.0;
    for (index_t tau = 1; tau <= tau_max; ++tau) {
      running += diff[tau];
      cmnd[tau] = running > 1e-300 ? diff[tau] * tau / running : 1.0;
    }

    index_t tau = 0;
    for (index_t cand = tau_min; cand <= tau_max; ++cand) {
      if (cmnd[cand] < cfg.yin_threshold) {
        tau = cand;
        while (tau + 1 <= tau_max && cmnd[tau + 1] < cmnd[tau]) ++tau;
        break;
      }
    }
    if (tau == 0) continue;  // unvoiced

    double refined = static_cast<double>(tau);
    if (tau > 1 && tau < tau_max) {
      const double a = cmnd[tau - 1], b = cmnd[tau], c = cmnd[tau + 1];
      const double denom = a - 2.0 * b + c;
      if (std::abs(denom) > 1e-12) {
        const double shift = 0.5 * (a - c) / denom;
        if (std::abs(shift) <= 1.0) refined += shift;
      }
    }
    const double hz = cfg.sample_rate / refined;
    f0[t] = static_cast<Real>(std::clamp(hz, cfg.f0_min, cfg.f0_max));
  }
  return f0;
}

}  // namespace prosofuse

#endif  // PROSOFUSE_DSP_PITCH_HPP_

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

#ifndef PROSOFUSE_DSP_CONFIG_HPP_
#define PROSOFUSE_DSP_CONFIG_HPP_

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "prosofuse/common.hpp"

namespace prosofuse {

// Audio frontend parameters. Features are only comparable when extracted
// under the same config, so a hash of every field travels with serialized
// feature sets.
struct DspConfig {
  int sample_rate = 22050;
  int n_fft = 1024;
  int hop = 256;
  int win_length = 1024;  // Hann window length
  double fmin = 0.0;
  double fmax = 8000.0;
  int mel_bins = 80;
  double log_floor = 1e-5;
  double f0_min = 60.0;
  double f0_max = 600.0;      // analysis range, not the corpus filter cutoff
  double yin_threshold = 0.15;
  int yin_window = 512;

  void validate() const {
    if (sample_rate <= 0) throw ConfigError("sample_rate must be positive");
    if (n_fft <= 0 || (n_fft & (n_fft - 1)) != 0)
      throw ConfigError("n_fft must be a positive power of two");
    if (hop <= 0 || hop > n_fft) throw ConfigError("need 0 < hop <= n_fft");
    if (win_length != n_fft)
      throw ConfigError("win_length must equal n_fft");
    if (mel_bins <= 0) throw ConfigError("mel_bins must be positive");
    if (!(fmin >= 0.0) || !(fmax > fmin) || fmax > sample_rate / 2.0)
      throw ConfigError("need 0 <= fmin < fmax <= sample_rate/2");
    if (log_floor <= 0.0) throw ConfigError("log_floor must be positive");
    if (!(f0_min > 0.0) || !(f0_min < f0_max) || f0_max > sample_rate / 2.0)
      throw ConfigError("need 0 < f0_min < f0_max <= sample_rate/2");
    if (!(yin_threshold > 0.0) || !(yin_threshold < 1.0))
      throw ConfigError("yin_threshold must lie in (0, 1)");
    if (yin_window <= 0) throw ConfigError("yin_window must be positive");
  }

  // Stable fingerprint over all fields; stored alongside extracted features.
  uint64_t hash() const {
    std::ostringstream os;
    os << sample_rate << '|' << n_fft << '|' << hop << '|' << win_length
       << '|' << fmin << '|' << fmax << '|' << mel_bins << '|' << log_floor
       << '|' << f0_min << '|' << f0_max << '|' << yin_threshold << '|'
       << yin_window;
    return fnv1a64(os.str());
  }
};

// Mono waveform with samples nominally in [-1, 1].
template <typename Real>
struct Waveform {
  std::vector<Real> samples;
  int sample_rate = 0;

  index_t size() const { return static_cast<index_t>(samples.size()); }

  void require_valid(const char* where) const {
    if (sample_rate <= 0)
      throw SignalError(std::string(where) + ": invalid sample rate");
    if (samples.empty())
      throw SignalError(std::string(where) + ": empty waveform");
  }
};

}  // namespace prosofuse

#endif  // PROSOFUSE_DSP_CONFIG_HPP_

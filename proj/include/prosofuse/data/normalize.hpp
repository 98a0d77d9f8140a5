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

#ifndef PROSOFUSE_DATA_NORMALIZE_HPP_
#define PROSOFUSE_DATA_NORMALIZE_HPP_

#include <cmath>

#include "prosofuse/common.hpp"
#include "prosofuse/data/manifest.hpp"
#include "prosofuse/data/stats.hpp"

namespace prosofuse {

// Z-scores pitch and energy against the global moments, leaving zero values
// untouched (the unvoiced sentinel must survive both directions). Durations
// stay integer frames in the manifest; models train on z-scored log-duration
// via normalized_log_duration below.
inline Manifest normalize_targets(const Manifest& m, const DatasetStats& s) {
  if (s.global_pitch.sigma <= 0.0 || s.global_energy.sigma <= 0.0 ||
      s.global_log_dur.sigma <= 0.0)
    throw ConfigError("normalize_targets: degenerate sigma in stats");
  Manifest out = m;
  for (auto& r : out.records) {
    for (auto& v : r.pitch)
      if (v != 0.0) v = (v - s.global_pitch.mean) / s.global_pitch.sigma;
    for (auto& v : r.energy)
      if (v != 0.0) v = (v - s.global_energy.mean) / s.global_energy.sigma;
  }
  return out;
}

inline Manifest denormalize_targets(const Manifest& m,
                                    const DatasetStats& s) {
  Manifest out = m;
  for (auto& r : out.records) {
    for (auto& v : r.pitch)
      if (v != 0.0) v = v * s.global_pitch.sigma + s.global_pitch.mean;
    for (auto& v : r.energy)
      if (v != 0.0) v = v * s.global_energy.sigma + s.global_energy.mean;
  }
  return out;
}

inline double normalized_log_duration(index_t frames, const DatasetStats& s) {
  if (s.global_log_dur.sigma <= 0.0)
    throw ConfigError("normalized_log_duration: degenerate sigma");
  return (std::log(static_cast<double>(frames)) - s.global_log_dur.mean) /
         s.global_log_dur.sigma;
}

// Inverse of normalized_log_duration before integer rounding.
inline double denormalized_duration(double z, const DatasetStats& s) {
  return std::exp(z * s.global_log_dur.sigma + s.global_log_dur.mean);
}

}  // namespace prosofuse

#endif  // PROSOFUSE_DATA_NORMALIZE_HPP_

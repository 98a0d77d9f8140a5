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

#ifndef PROSOFUSE_DATA_FILTER_HPP_
#define PROSOFUSE_DATA_FILTER_HPP_

#include <cmath>
#include <string>
#include <vector>

#include "prosofuse/common.hpp"
#include "prosofuse/data/manifest.hpp"
#include "prosofuse/data/stats.hpp"

namespace prosofuse {

struct FilterConfig {
  double pitch_max = 500.0;
  double k_sigma = 2.5;

  void validate() const {
    if (!(pitch_max > 0.0)) throw ConfigError("pitch_max must be positive");
    if (!(k_sigma > 0.0)) throw ConfigError("k_sigma must be positive");
  }
};

struct Removal {
  std::string id;
  std::string phone;
  std::string rule;  // "pitch_max" | "pitch_sigma" | "duration_sigma"
  double value = 0.0;
};

struct FilterResult {
  Manifest kept;
  std::vector<Removal> removed;
};

// A record is dropped when any phone violates a rule: voiced pitch above the
// absolute ceiling, or voiced pitch / duration outside mean +- k*sigma for
// its phoneme. Sigma-zero entries (constant or low-support phonemes) define
// no band and are skipped. Each removal reports only its first violation.
// Single-pass by contract: stats come from the unfiltered training split.
inline FilterResult filter_outliers(const Manifest& m, const DatasetStats& s,
                                    const FilterConfig& cfg) {
  cfg.validate();
  FilterResult out;
  out.kept.dsp_config_hash = m.dsp_config_hash;
  for (const auto& r : m.records) {
    r.validate();
    bool dropped = false;
    for (size_t i = 0; i < r.phones.size() && !dropped; ++i) {
      const std::string& ph = r.phones[i];
      const double p = r.pitch[i];
      if (p != 0.0 && p > cfg.pitch_max) {
        out.removed.push_back({r.id, ph, "pitch_max", p});
        dropped = true;
        break;
      }
      if (p != 0.0) {
        const auto it = s.phone_pitch.find(ph);
        if (it != s.phone_pitch.end() && it->second.sigma > 0.0 &&
            std::abs(p - it->second.mean) >
                cfg.k_sigma * it->second.sigma) {
          out.removed.push_back({r.id, ph, "pitch_sigma", p});
          dropped = true;
          break;
        }
      }
      const auto dt = s.phone_duration.find(ph);
      const double d = static_cast<double>(r.durations[i]);
      if (dt != s.phone_duration.end() && dt->second.sigma > 0.0 &&
          std::abs(d - dt->second.mean) > cfg.k_sigma * dt->second.sigma) {
        out.removed.push_back({r.id, ph, "duration_sigma", d});
        dropped = true;
        break;
      }
    }
    if (!dropped) out.kept.records.push_back(r);
  }
  return out;
}

}  // namespace prosofuse

#endif  // PROSOFUSE_DATA_FILTER_HPP_

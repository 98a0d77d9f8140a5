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

#ifndef PROSOFUSE_DATA_STATS_HPP_
#define PROSOFUSE_DATA_STATS_HPP_

#include <cmath>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "prosofuse/common.hpp"
#include "prosofuse/data/manifest.hpp"

namespace prosofuse {

// Population moments (divide by N). low_support marks entries computed from
// fewer than two samples, whose sigma is reported as 0.
struct MomentEntry {
  double mean = 0.0;
  double sigma = 0.0;
  index_t count = 0;
  bool low_support = false;
};

inline MomentEntry moments_of(const std::vector<double>& values) {
  MomentEntry e;
  e.count = static_cast<index_t>(values.size());
  if (e.count == 0) {
    e.low_support = true;
    return e;
  }
  double acc = 0.0;
  for (const double v : values) acc += v;
  e.mean = acc / e.count;
  if (e.count < 2) {
    e.low_support = true;
    return e;
  }
  double sq = 0.0;
  for (const double v : values) {
    const double d = v - e.mean;
    sq += d * d;
  }
  e.sigma = std::sqrt(sq / e.count);
  return e;
}

// Corpus statistics over the training split. Per-phoneme moments feed the
// outlier filter (pitch and duration in raw units, voiced pitch only);
// global moments feed target normalization (duration in log-frames).
struct DatasetStats {
  std::map<std::string, MomentEntry> phone_pitch;
  std::map<std::string, MomentEntry> phone_energy;
  std::map<std::string, MomentEntry> phone_duration;
  MomentEntry global_pitch;    // voiced phone-level values
  MomentEntry global_energy;   // nonzero phone-level values
  MomentEntry global_log_dur;  // ln(frames)
};

inline DatasetStats compute_stats(const Manifest& m) {
  std::map<std::string, std::vector<double>> pitch, energy, duration;
  std::vector<double> g_pitch, g_energy, g_logdur;
  for (const auto& r : m.records) {
    if (r.split != "train") continue;
    r.validate();
    for (size_t i = 0; i < r.phones.size(); ++i) {
      const std::string& ph = r.phones[i];
      if (r.pitch[i] != 0.0) {
        pitch[ph].push_back(r.pitch[i]);
        g_pitch.push_back(r.pitch[i]);
      }
      if (r.energy[i] != 0.0) {
        energy[ph].push_back(r.energy[i]);
        g_energy.push_back(r.energy[i]);
      }
      duration[ph].push_back(static_cast<double>(r.durations[i]));
      g_logdur.push_back(std::log(static_cast<double>(r.durations[i])));
    }
  }
  DatasetStats s;
  for (const auto& [ph, v] : pitch) s.phone_pitch[ph] = moments_of(v);
  for (const auto& [ph, v] : energy) s.phone_energy[ph] = moments_of(v);
  for (const auto& [ph, v] : duration) s.phone_duration[ph] = moments_of(v);
  s.global_pitch = moments_of(g_pitch);
  s.global_energy = moments_of(g_energy);
  s.global_log_dur = moments_of(g_logdur);
  return s;
}

namespace stats_detail {

inline nlohmann::json entry_json(const MomentEntry& e) {
  return {{"mean", e.mean},
          {"sigma", e.sigma},
          {"count", e.count},
          {"low_support", e.low_support}};
}

inline MomentEntry entry_from(const nlohmann::json& j) {
  MomentEntry e;
  e.mean = j.at("mean").get<double>();
  e.sigma = j.at("sigma").get<double>();
  e.count = j.at("count").get<index_t>();
  e.low_support = j.at("low_support").get<bool>();
  return e;
}

inline nlohmann::json map_json(const std::map<std::string, MomentEntry>& m) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : m) j[k] = entry_json(v);
  return j;
}

inline std::map<std::string, MomentEntry> map_from(const nlohmann::json& j) {
  std::map<std::string, MomentEntry> m;
  for (auto it = j.begin(); it != j.end(); ++it)
    m[it.key()] = entry_from(it.value());
  return m;
}

}  // namespace stats_detail

inline void save_stats(const DatasetStats& s, const std::string& path) {
  nlohmann::json j = {
      {"phone_pitch", stats_detail::map_json(s.phone_pitch)},
      {"phone_energy", stats_detail::map_json(s.phone_energy)},
      {"phone_duration", stats_detail::map_json(s.phone_duration)},
      {"global_pitch", stats_detail::entry_json(s.global_pitch)},
      {"global_energy", stats_detail::entry_json(s.global_energy)},
      {"global_log_dur", stats_detail::entry_json(s.global_log_dur)}};
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << j.dump(2) << "\n";
  if (!os) throw IoError("short write: " + path);
}

inline DatasetStats load_stats(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open stats: " + path);
  nlohmann::json j;
  try {
    in >> j;
    DatasetStats s;
    s.phone_pitch = stats_detail::map_from(j.at("phone_pitch"));
    s.phone_energy = stats_detail::map_from(j.at("phone_energy"));
    s.phone_duration = stats_detail::map_from(j.at("phone_duration"));
    s.global_pitch = stats_detail::entry_from(j.at("global_pitch"));
    s.global_energy = stats_detail::entry_from(j.at("global_energy"));
    s.global_log_dur = stats_detail::entry_from(j.at("global_log_dur"));
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("stats " + path + ": " + e.what());
  }
}

}  // namespace prosofuse

#endif  // PROSOFUSE_DATA_STATS_HPP_

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

#ifndef PROSOFUSE_DATA_ALIGNMENT_HPP_
#define PROSOFUSE_DATA_ALIGNMENT_HPP_

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "prosofuse/common.hpp"
#include "prosofuse/dsp/config.hpp"

namespace prosofuse {

struct AlignedPhone {
  std::string phone;
  double start = 0.0;
  double end = 0.0;
};

// Parses "phone<TAB>start_sec<TAB>end_sec" lines and validates that the
// intervals are contiguous and nondecreasing (1e-6 s slack on joins).
inline std::vector<AlignedPhone> parse_alignment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open alignment: " + path);
  std::vector<AlignedPhone> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    AlignedPhone p;
    std::string start_s, end_s;
    if (!std::getline(ss, p.phone, '\t') || !std::getline(ss, start_s, '\t') ||
        !std::getline(ss, end_s))
      throw FormatError("alignment " + path + " line " +
                        std::to_string(line_no) + ": want phone\\tstart\\tend");
    try {
      p.start = std::stod(start_s);
      p.end = std::stod(end_s);
    } catch (const std::exception&) {
      throw FormatError("alignment " + path + " line " +
                        std::to_string(line_no) + ": bad number");
    }
    if (p.end < p.start)
      throw AlignmentError("alignment " + path + " line " +
                           std::to_string(line_no) + ": end before start");
    if (!out.empty() && std::abs(p.start - out.back().end) > 1e-6)
      throw AlignmentError("alignment " + path + " line " +
                           std::to_string(line_no) +
                           ": intervals not contiguous");
    out.push_back(std::move(p));
  }
  if (out.empty()) throw FormatError("alignment " + path + ": empty");
  return out;
}

// Seconds to per-phone frame counts. Cumulative boundaries are rounded so
// the total is the rounding of the final boundary, then the last phone
// absorbs any residual against the mel frame count (at most 2 frames).
inline std::vector<index_t> align_to_durations(
    const std::vector<AlignedPhone>& phones, const DspConfig& cfg,
    index_t mel_frames) {
  cfg.validate();
  if (phones.empty()) throw AlignmentError("align_to_durations: no phones");
  const double frames_per_sec =
      static_cast<double>(cfg.sample_rate) / cfg.hop;
  std::vector<index_t> durations;
  durations.reserve(phones.size());
  index_t prev = 0;
  for (const auto& p : phones) {
    const index_t boundary =
        static_cast<index_t>(std::llround(p.end * frames_per_sec));
    const index_t d = boundary - prev;
    if (d < 1)
      throw AlignmentError("align_to_durations: phone '" + p.phone +
                           "' rounds to zero frames");
    durations.push_back(d);
    prev = boundary;
  }
  const index_t diff = mel_frames - prev;
  if (diff < -2 || diff > 2)
    throw AlignmentError(
        "align_to_durations: boundary total " + std::to_string(prev) +
        " too far from mel frame count " + std::to_string(mel_frames));
  durations.back() += diff;
  if (durations.back() < 1)
    throw AlignmentError("align_to_durations: last phone vanished while "
                         "matching the mel frame count");
  return durations;
}

inline std::vector<index_t> ingest_alignment(const std::string& path,
                                             const DspConfig& cfg,
                                             index_t mel_frames) {
  return align_to_durations(parse_alignment(path), cfg, mel_frames);
}

}  // namespace prosofuse

#endif  // PROSOFUSE_DATA_ALIGNMENT_HPP_

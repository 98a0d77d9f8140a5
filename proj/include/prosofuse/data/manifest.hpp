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

#ifndef PROSOFUSE_DATA_MANIFEST_HPP_
#define PROSOFUSE_DATA_MANIFEST_HPP_

#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "prosofuse/common.hpp"
#include "prosofuse/data/matrix_file.hpp"
#include "prosofuse/matrix.hpp"

namespace prosofuse {

// One utterance: phones with frame durations, phone-level pitch/energy
// targets (0 = unvoiced pitch), visual features, and an optional mel matrix.
// Features may live inline (synthetic corpora, tests) or behind file paths.
// The latent style value exists for oracle evaluation of synthetic corpora
// and must never reach a model input.
struct UtteranceRecord {
  std::string id;
  std::string wav_path;
  std::vector<std::string> phones;
  std::vector<index_t> durations;
  std::vector<double> pitch;
  std::vector<double> energy;
  std::string visual_path;
  std::string mel_path;
  std::string split = "train";
  double style = 0.0;
  bool has_style = false;

  Mat<float> visual_inline;  // 0x0 when not materialized in memory
  Mat<float> mel_inline;

  index_t phone_count() const { return static_cast<index_t>(phones.size()); }

  index_t total_frames() const {
    index_t sum = 0;
    for (const index_t d : durations) sum += d;
    return sum;
  }

  void validate() const {
    if (phones.empty()) throw FormatError("record " + id + ": no phones");
    if (durations.size() != phones.size() ||
        pitch.size() != phones.size() || energy.size() != phones.size())
      throw FormatError("record " + id +
                        ": phones/durations/pitch/energy lengths differ");
    for (const index_t d : durations)
      if (d < 1) throw FormatError("record " + id + ": duration < 1");
  }
};

struct Manifest {
  std::vector<UtteranceRecord> records;
  uint64_t dsp_config_hash = 0;

  void validate() const {
    std::set<std::string> ids;
    for (const auto& r : records) {
      r.validate();
      if (!ids.insert(r.id).second)
        throw FormatError("duplicate record id: " + r.id);
    }
  }

  std::vector<const UtteranceRecord*> split_view(
      const std::string& split) const {
    std::vector<const UtteranceRecord*> out;
    for (const auto& r : records)
      if (r.split == split) out.push_back(&r);
    return out;
  }
};

// Visual features for a record: inline matrix if present, else the MAT1
// file behind visual_path.
inline Mat<float> load_visual(const UtteranceRecord& r) {
  if (r.visual_inline.size() > 0) return r.visual_inline;
  if (r.visual_path.empty())
    throw FormatError("record " + r.id + ": no visual features");
  return load_matrix<float>(r.visual_path);
}

inline Mat<float> load_mel(const UtteranceRecord& r) {
  if (r.mel_inline.size() > 0) return r.mel_inline;
  if (r.mel_path.empty())
    throw FormatError("record " + r.id + ": no mel target");
  return load_matrix<float>(r.mel_path);
}

// Writes inline feature matrices of every record to "<id>.visual.mat" /
// "<id>.mel.mat" under dir and fills in the paths.
inline void materialize_features(Manifest& m, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (auto& r : m.records) {
    if (r.visual_inline.size() > 0) {
      r.visual_path = (std::filesystem::path(dir) / (r.id + ".visual.mat"))
                          .string();
      save_matrix(r.visual_path, r.visual_inline);
    }
    if (r.mel_inline.size() > 0) {
      r.mel_path =
          (std::filesystem::path(dir) / (r.id + ".mel.mat")).string();
      save_matrix(r.mel_path, r.mel_inline);
    }
  }
}

// Manifest file: UTF-8 JSON lines. First line is a header object carrying
// the dsp config hash; every further line is one utterance record.
inline void save_manifest(const Manifest& m, const std::string& path) {
  m.validate();
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open for writing: " + path);
  nlohmann::json header = {{"type", "manifest"},
                           {"version", 1},
                           {"dsp_config_hash", m.dsp_config_hash}};
  os << header.dump() << "\n";
  for (const auto& r : m.records) {
    nlohmann::json j = {{"id", r.id},
                        {"wav", r.wav_path},
                        {"phones", r.phones},
                        {"durations", r.durations},
                        {"pitch", r.pitch},
                        {"energy", r.energy},
                        {"visual", r.visual_path},
                        {"mel", r.mel_path},
                        {"split", r.split}};
    if (r.has_style) j["style"] = r.style;
    os << j.dump() << "\n";
  }
  if (!os) throw IoError("short write: " + path);
}

inline Manifest load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest: " + path);
  Manifest m;
  std::string line;
  bool have_header = false;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("manifest " + path + " line " +
                        std::to_string(line_no) + ": " + e.what());
    }
    try {
      if (!have_header) {
        if (j.value("type", "") != "manifest")
          throw FormatError("manifest " + path + ": missing header line");
        m.dsp_config_hash = j.value("dsp_config_hash", uint64_t(0));
        have_header = true;
        continue;
      }
      UtteranceRecord r;
      r.id = j.at("id").get<std::string>();
      r.wav_path = j.value("wav", "");
      r.phones = j.at("phones").get<std::vector<std::string>>();
      r.durations = j.at("durations").get<std::vector<index_t>>();
      r.pitch = j.at("pitch").get<std::vector<double>>();
      r.energy = j.at("energy").get<std::vector<double>>();
      r.visual_path = j.value("visual", "");
      r.mel_path = j.value("mel", "");
      r.split = j.value("split", "train");
      if (j.contains("style")) {
        r.style = j["style"].get<double>();
        r.has_style = true;
      }
      m.records.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("manifest " + path + " line " +
                        std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_header) throw FormatError("manifest " + path + ": empty file");
  m.validate();
  if constexpr (kChecked) {
    for (const auto& r : m.records) {
      for (const std::string* p : {&r.wav_path, &r.visual_path, &r.mel_path})
        if (!p->empty() && !std::filesystem::exists(*p))
          throw IoError("manifest " + path + ": missing file " + *p);
    }
  }
  return m;
}

}  // namespace prosofuse

#endif  // PROSOFUSE_DATA_MANIFEST_HPP_

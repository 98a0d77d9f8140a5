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

#ifndef PROSOFUSE_CLI_CONFIG_FILE_HPP_
#define PROSOFUSE_CLI_CONFIG_FILE_HPP_

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "prosofuse/common.hpp"
#include "prosofuse/data/filter.hpp"
#include "prosofuse/data/synth.hpp"
#include "prosofuse/dsp/config.hpp"
#include "prosofuse/model/config.hpp"
#include "prosofuse/trainer/config.hpp"

namespace prosofuse {

// Flat experiment-bundle config: one `section.key = value` per line, `#`
// comments, blank lines ignored. Sections mirror the config structs
// (model.*, train.*, dsp.*, filter.*, synth.*); the full key list lives in
// kConfigSchema below and anything outside it is rejected, so typos fail
// loudly instead of silently keeping a default. Command-line flags override
// file values.
class ConfigFile {
 public:
  static ConfigFile parse(const std::string& text) {
    ConfigFile f;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const std::string trimmed = trim(line);
      if (trimmed.empty()) continue;
      const auto eq = trimmed.find('=');
      if (eq == std::string::npos)
        throw FormatError("config line " + std::to_string(lineno) +
                          ": expected key = value");
      const std::string key = trim(trimmed.substr(0, eq));
      const std::string value = trim(trimmed.substr(eq + 1));
      if (key.empty())
        throw FormatError("config line " + std::to_string(lineno) +
                          ": empty key");
      if (!f.values_.emplace(key, value).second)
        throw FormatError("config line " + std::to_string(lineno) +
                          ": duplicate key " + key);
    }
    return f;
  }

  static ConfigFile load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  const std::map<std::string, std::string>& values() const { return values_; }

  std::string get_string(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end())
      throw ConfigError("config key missing: " + key);
    return it->second;
  }

  double get_real(const std::string& key) const {
    const std::string v = get_string(key);
    try {
      std::size_t pos = 0;
      const double x = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (const std::exception&) {
      throw ConfigError("config key " + key + ": not a number: " + v);
    }
  }

  std::int64_t get_int(const std::string& key) const {
    const std::string v = get_string(key);
    try {
      std::size_t pos = 0;
      const std::int64_t x = std::stoll(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (const std::exception&) {
      throw ConfigError("config key " + key + ": not an integer: " + v);
    }
  }

  std::uint64_t get_u64(const std::string& key) const {
    const std::string v = get_string(key);
    try {
      // stoull accepts a sign and wraps negatives; reject them up front.
      if (!v.empty() && (v[0] == '-' || v[0] == '+'))
        throw std::invalid_argument(v);
      std::size_t pos = 0;
      const std::uint64_t x = std::stoull(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (const std::exception&) {
      throw ConfigError("config key " + key + ": not an unsigned integer: " + v);
    }
  }

  bool get_bool(const std::string& key) const {
    const std::string v = get_string(key);
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("config key " + key + ": expected true/false: " + v);
  }

  std::vector<double> get_real_list(const std::string& key) const {
    const std::string v = get_string(key);
    std::vector<double> out;
    std::istringstream in(v);
    std::string item;
    while (std::getline(in, item, ',')) {
      const std::string t = trim(item);
      try {
        std::size_t pos = 0;
        out.push_back(std::stod(t, &pos));
        if (pos != t.size()) throw std::invalid_argument(t);
      } catch (const std::exception&) {
        throw ConfigError("config key " + key + ": bad list entry: " + t);
      }
    }
    if (out.empty())
      throw ConfigError("config key " + key + ": empty list");
    return out;
  }

  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

 private:
  std::map<std::string, std::string> values_;
};

inline const std::set<std::string>& config_schema() {
  static const std::set<std::string> schema = {
      "model.d_model", "model.heads", "model.encoder_layers",
      "model.decoder_layers", "model.conv_kernel", "model.ffn_hidden",
      "model.encoder_dropout", "model.fusion_ffn_hidden",
      "model.fusion_dropout", "model.predictor_kernel",
      "model.predictor_hidden", "model.predictor_dropout", "model.quant_bins",
      "model.mel_bins", "model.visual_dim", "model.variant",
      "train.batch_size", "train.max_steps", "train.seed", "train.lr_mode",
      "train.fixed_lr", "train.warmup", "train.eval_every",
      "dsp.sample_rate", "dsp.n_fft", "dsp.hop", "dsp.win_length", "dsp.fmin",
      "dsp.fmax", "dsp.mel_bins", "dsp.log_floor", "dsp.f0_min", "dsp.f0_max",
      "dsp.yin_threshold", "dsp.yin_window",
      "filter.pitch_max", "filter.k_sigma",
      "synth.vocab", "synth.train_utterances", "synth.val_utterances",
      "synth.test_utterances", "synth.min_phones", "synth.max_phones",
      "synth.styles", "synth.gain_pitch", "synth.gain_energy",
      "synth.gain_duration", "synth.noise", "synth.local_sigma",
      "synth.local_gain_pitch", "synth.local_gain_energy", "synth.visual_dim",
      "synth.visual_noise", "synth.phones_per_visual", "synth.pitch_offset",
      "synth.dur_log_mean", "synth.dur_log_sigma", "synth.with_mel",
      "synth.mel_noise", "synth.seed",
  };
  return schema;
}

inline void validate_config_keys(const ConfigFile& f) {
  for (const auto& [key, value] : f.values()) {
    if (config_schema().count(key) == 0)
      throw ConfigError("unknown config key: " + key);
  }
}

// The apply_* helpers copy file values onto the defaulted structs; anything
// the file does not mention keeps its default. vocab is derived from the
// manifest, never configured.

inline void apply_model_config(const ConfigFile& f, ModelConfig& cfg) {
  const auto i = [&](const char* k, index_t& out) {
    if (f.has(k)) out = f.get_int(k);
  };
  const auto d = [&](const char* k, double& out) {
    if (f.has(k)) out = f.get_real(k);
  };
  i("model.d_model", cfg.d_model);
  i("model.heads", cfg.heads);
  i("model.encoder_layers", cfg.encoder_layers);
  i("model.decoder_layers", cfg.decoder_layers);
  i("model.conv_kernel", cfg.conv_kernel);
  i("model.ffn_hidden", cfg.ffn_hidden);
  d("model.encoder_dropout", cfg.encoder_dropout);
  i("model.fusion_ffn_hidden", cfg.fusion_ffn_hidden);
  d("model.fusion_dropout", cfg.fusion_dropout);
  i("model.predictor_kernel", cfg.predictor_kernel);
  i("model.predictor_hidden", cfg.predictor_hidden);
  d("model.predictor_dropout", cfg.predictor_dropout);
  i("model.quant_bins", cfg.quant_bins);
  i("model.mel_bins", cfg.mel_bins);
  i("model.visual_dim", cfg.visual_dim);
  if (f.has("model.variant"))
    cfg.variant = variant_from(f.get_string("model.variant"));
}

inline void apply_train_config(const ConfigFile& f, TrainConfig& cfg) {
  if (f.has("train.batch_size")) cfg.batch_size = f.get_int("train.batch_size");
  if (f.has("train.max_steps")) cfg.max_steps = f.get_int("train.max_steps");
  if (f.has("train.seed")) cfg.seed = f.get_u64("train.seed");
  if (f.has("train.lr_mode")) {
    const std::string mode = f.get_string("train.lr_mode");
    if (mode == "fixed") {
      cfg.lr_mode = LrMode::kFixed;
    } else if (mode == "noam") {
      cfg.lr_mode = LrMode::kNoam;
    } else {
      throw ConfigError("train.lr_mode must be fixed or noam: " + mode);
    }
  }
  if (f.has("train.fixed_lr")) cfg.fixed_lr = f.get_real("train.fixed_lr");
  if (f.has("train.warmup")) cfg.warmup = f.get_int("train.warmup");
  if (f.has("train.eval_every")) cfg.eval_every = f.get_int("train.eval_every");
}

inline void apply_dsp_config(const ConfigFile& f, DspConfig& cfg) {
  const auto i = [&](const char* k, int& out) {
    if (f.has(k)) out = static_cast<int>(f.get_int(k));
  };
  const auto d = [&](const char* k, double& out) {
    if (f.has(k)) out = f.get_real(k);
  };
  i("dsp.sample_rate", cfg.sample_rate);
  i("dsp.n_fft", cfg.n_fft);
  i("dsp.hop", cfg.hop);
  i("dsp.win_length", cfg.win_length);
  d("dsp.fmin", cfg.fmin);
  d("dsp.fmax", cfg.fmax);
  i("dsp.mel_bins", cfg.mel_bins);
  d("dsp.log_floor", cfg.log_floor);
  d("dsp.f0_min", cfg.f0_min);
  d("dsp.f0_max", cfg.f0_max);
  d("dsp.yin_threshold", cfg.yin_threshold);
  i("dsp.yin_window", cfg.yin_window);
}

inline void apply_filter_config(const ConfigFile& f, FilterConfig& cfg) {
  if (f.has("filter.pitch_max")) cfg.pitch_max = f.get_real("filter.pitch_max");
  if (f.has("filter.k_sigma")) cfg.k_sigma = f.get_real("filter.k_sigma");
}

inline void apply_synth_config(const ConfigFile& f, SynthConfig& cfg) {
  const auto i = [&](const char* k, int& out) {
    if (f.has(k)) out = static_cast<int>(f.get_int(k));
  };
  const auto d = [&](const char* k, double& out) {
    if (f.has(k)) out = f.get_real(k);
  };
  i("synth.vocab", cfg.vocab);
  i("synth.train_utterances", cfg.train_utterances);
  i("synth.val_utterances", cfg.val_utterances);
  i("synth.test_utterances", cfg.test_utterances);
  i("synth.min_phones", cfg.min_phones);
  i("synth.max_phones", cfg.max_phones);
  if (f.has("synth.styles")) cfg.styles = f.get_real_list("synth.styles");
  d("synth.gain_pitch", cfg.gain_pitch);
  d("synth.gain_energy", cfg.gain_energy);
  d("synth.gain_duration", cfg.gain_duration);
  d("synth.noise", cfg.noise);
  d("synth.local_sigma", cfg.local_sigma);
  d("synth.local_gain_pitch", cfg.local_gain_pitch);
  d("synth.local_gain_energy", cfg.local_gain_energy);
  i("synth.visual_dim", cfg.visual_dim);
  d("synth.visual_noise", cfg.visual_noise);
  i("synth.phones_per_visual", cfg.phones_per_visual);
  d("synth.pitch_offset", cfg.pitch_offset);
  d("synth.dur_log_mean", cfg.dur_log_mean);
  d("synth.dur_log_sigma", cfg.dur_log_sigma);
  if (f.has("synth.with_mel")) cfg.with_mel = f.get_bool("synth.with_mel");
  d("synth.mel_noise", cfg.mel_noise);
  if (f.has("synth.seed")) cfg.seed = f.get_u64("synth.seed");
}

}  // namespace prosofuse

#endif  // PROSOFUSE_CLI_CONFIG_FILE_HPP_

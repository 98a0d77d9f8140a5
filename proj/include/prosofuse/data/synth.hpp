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

#ifndef PROSOFUSE_DATA_SYNTH_HPP_
#define PROSOFUSE_DATA_SYNTH_HPP_

#include <cmath>
#include <string>
#include <vector>

#include "prosofuse/common.hpp"
#include "prosofuse/data/manifest.hpp"
#include "prosofuse/dsp/contour.hpp"
#include "prosofuse/matrix.hpp"
#include "prosofuse/rng.hpp"

namespace prosofuse {

// Synthetic multimodal corpus.
//
// Generative story per utterance:
//   phones      p_j drawn uniformly from an alphabet of `vocab` symbols
//   style       s drawn uniformly from the finite set `styles`
//   chunks      the phone sequence is partitioned into n near-equal chunks
//               (n = ceil(t / phones_per_visual), longer chunks first, the
//               same partition downsample_average uses), one visual frame
//               per chunk; chunk i carries a local latent d_i ~ N(0,
//               local_sigma^2)
//   pitch       pitch_j = mu_p(p_j) + gain_pitch*s
//                         + local_gain_pitch*d_chunk(j) + N(0, noise^2)
//   energy      analogous with mu_e, gain_energy, local_gain_energy
//   duration    frames_j = clamp(round(exp(b_d(p_j) + gain_duration*s
//                         + N(0, noise^2))), 1, ...)
//   visual      f_i = E(s) + d_i*u + N(0, visual_noise^2) rows, where E
//               embeds each style value as a fixed random unit vector and u
//               is a fixed unit direction
//   mel         optional: frame rows = T(p_j) + s*style_row + N(0,
//               mel_noise^2), floored at ln(1e-5)
//
// The phone tables mu_p, mu_e ~ N(0,1) and b_d ~ N(dur_log_mean,
// dur_log_sigma^2) are fixed per corpus. Records carry the true s for
// oracle evaluation only; models never see it.
//
// Analytic error floors (pitch; energy analogous):
//   text-only  : gain^2*Var(S) + local_gain^2*local_sigma^2 + noise^2
//                (phone identity reveals mu_p but neither s nor d_i)
//   multimodal : -> noise^2 as visual_noise -> 0
//                (visual features reveal both s and d_i)
// With gain = 0 and local_sigma = 0 the floors coincide at noise^2: the
// modalities tie and any fusion advantage would be spurious.
struct SynthConfig {
  int vocab = 32;
  int train_utterances = 200;
  int val_utterances = 50;
  int test_utterances = 0;
  int min_phones = 12;
  int max_phones = 20;
  std::vector<double> styles = {-1.0, 0.0, 1.0};
  double gain_pitch = 1.0;
  double gain_energy = 1.0;
  double gain_duration = 1.0;
  double noise = 0.1;
  double local_sigma = 0.0;
  double local_gain_pitch = 1.0;
  double local_gain_energy = 1.0;
  int visual_dim = 16;
  double visual_noise = 0.05;
  int phones_per_visual = 4;
  double pitch_offset = 0.0;  // shifts every mu_p, e.g. into positive range
  double dur_log_mean = 1.3863;  // ln 4: mean phone length of four frames
  double dur_log_sigma = 0.3;
  bool with_mel = false;
  double mel_noise = 0.05;
  uint64_t seed = 1;

  void validate() const {
    if (vocab < 1) throw ConfigError("synth: vocab must be >= 1");
    if (train_utterances < 0 || val_utterances < 0 || test_utterances < 0)
      throw ConfigError("synth: negative utterance count");
    if (train_utterances + val_utterances + test_utterances < 1)
      throw ConfigError("synth: empty corpus");
    if (min_phones < 1 || max_phones < min_phones)
      throw ConfigError("synth: need 1 <= min_phones <= max_phones");
    if (styles.size() < 2)
      throw ConfigError("synth: need at least two style values");
    if (noise < 0 || local_sigma < 0 || visual_noise < 0 || mel_noise < 0 ||
        dur_log_sigma < 0)
      throw ConfigError("synth: negative sigma");
    if (visual_dim < 1) throw ConfigError("synth: visual_dim must be >= 1");
    if (phones_per_visual < 1)
      throw ConfigError("synth: phones_per_visual must be >= 1");
  }

  // Population variance of the style set under the uniform draw.
  double style_variance() const {
    double mean = 0.0;
    for (const double s : styles) mean += s;
    mean /= styles.size();
    double var = 0.0;
    for (const double s : styles) var += (s - mean) * (s - mean);
    return var / styles.size();
  }

  double text_only_pitch_floor() const {
    return gain_pitch * gain_pitch * style_variance() +
           local_gain_pitch * local_gain_pitch * local_sigma * local_sigma +
           noise * noise;
  }

  double multimodal_pitch_floor() const { return noise * noise; }
};

namespace synth_detail {

// Stream ids under the corpus seed. Utterance streams start after the
// reserved block.
constexpr uint64_t kStreamTables = 0;
constexpr uint64_t kStreamFirstUtterance = 16;

inline std::vector<double> unit_vector(int dim, RngState& rng) {
  std::vector<double> v(dim);
  double norm = 0.0;
  for (auto& x : v) {
    x = rng.normal();
    norm += x * x;
  }
  norm = std::sqrt(norm);
  if (norm < 1e-12) {
    v.assign(dim, 0.0);
    v[0] = 1.0;
    return v;
  }
  for (auto& x : v) x /= norm;
  return v;
}

struct CorpusTables {
  std::vector<double> mu_pitch, mu_energy, base_logdur;
  std::vector<std::vector<double>> style_emb;  // per style value
  std::vector<double> local_dir;
  Mat<double> mel_template;            // vocab x 80
  std::vector<double> mel_style_row;   // 80
};

inline CorpusTables build_tables(const SynthConfig& cfg) {
  auto rng = RngState::derive(cfg.seed, kStreamTables);
  CorpusTables t;
  t.mu_pitch.resize(cfg.vocab);
  t.mu_energy.resize(cfg.vocab);
  t.base_logdur.resize(cfg.vocab);
  for (int p = 0; p < cfg.vocab; ++p) t.mu_pitch[p] = rng.normal() + cfg.pitch_offset;
  for (int p = 0; p < cfg.vocab; ++p) t.mu_energy[p] = rng.normal();
  for (int p = 0; p < cfg.vocab; ++p)
    t.base_logdur[p] = cfg.dur_log_mean + cfg.dur_log_sigma * rng.normal();
  for (size_t k = 0; k < cfg.styles.size(); ++k)
    t.style_emb.push_back(unit_vector(cfg.visual_dim, rng));
  t.local_dir = unit_vector(cfg.visual_dim, rng);
  if (cfg.with_mel) {
    t.mel_template = Mat<double>(cfg.vocab, 80);
    for (index_t i = 0; i < t.mel_template.size(); ++i)
      t.mel_template.data()[i] = rng.uniform(-9.0, -2.0);
    t.mel_style_row.resize(80);
    for (auto& v : t.mel_style_row) v = 0.3 * rng.normal();
  }
  return t;
}

}  // namespace synth_detail

inline Manifest synth_dataset(const SynthConfig& cfg) {
  cfg.validate();
  const auto tables = synth_detail::build_tables(cfg);
  constexpr double kLogFloor = -11.512925464970229;  // ln(1e-5)

  Manifest m;
  const int total =
      cfg.train_utterances + cfg.val_utterances + cfg.test_utterances;
  m.records.reserve(total);

  for (int k = 0; k < total; ++k) {
    auto rng = RngState::derive(
        cfg.seed, synth_detail::kStreamFirstUtterance + static_cast<uint64_t>(k));
    UtteranceRecord r;
    {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "synth-%06d", k);
      r.id = buf;
    }
    r.split = k < cfg.train_utterances
                  ? "train"
                  : (k < cfg.train_utterances + cfg.val_utterances ? "val"
                                                                   : "test");

    const index_t t_len =
        cfg.min_phones + static_cast<index_t>(rng.uniform_int(
                             cfg.max_phones - cfg.min_phones + 1));
    const size_t style_idx = rng.uniform_int(cfg.styles.size());
    r.style = cfg.styles[style_idx];
    r.has_style = true;

    std::vector<int> phone_ids(t_len);
    for (auto& p : phone_ids) p = static_cast<int>(rng.uniform_int(cfg.vocab));
    for (const int p : phone_ids) {
      char buf[16];
      std::snprintf(buf, sizeof(buf), "ph%02d", p);
      r.phones.push_back(buf);
    }

    const index_t n_visual =
        (t_len + cfg.phones_per_visual - 1) / cfg.phones_per_visual;
    const auto chunks = chunk_sizes(t_len, n_visual);
    std::vector<double> local(n_visual);
    for (auto& d : local) d = cfg.local_sigma * rng.normal();
    std::vector<index_t> chunk_of(t_len);
    {
      index_t pos = 0;
      for (index_t c = 0; c < n_visual; ++c)
        for (index_t j = 0; j < chunks[c]; ++j) chunk_of[pos++] = c;
    }

    for (index_t j = 0; j < t_len; ++j) {
      const int p = phone_ids[j];
      const double s = r.style;
      r.pitch.push_back(tables.mu_pitch[p] + cfg.gain_pitch * s +
                        cfg.local_gain_pitch * local[chunk_of[j]] +
                        cfg.noise * rng.normal());
      r.energy.push_back(tables.mu_energy[p] + cfg.gain_energy * s +
                         cfg.local_gain_energy * local[chunk_of[j]] +
                         cfg.noise * rng.normal());
      const double logdur = tables.base_logdur[p] + cfg.gain_duration * s +
                            cfg.noise * rng.normal();
      r.durations.push_back(
          std::max<index_t>(1, static_cast<index_t>(
                                   std::llround(std::exp(logdur)))));
    }

    r.visual_inline = Mat<float>(n_visual, cfg.visual_dim);
    for (index_t i = 0; i < n_visual; ++i)
      for (int d = 0; d < cfg.visual_dim; ++d)
        r.visual_inline(i, d) = static_cast<float>(
            tables.style_emb[style_idx][d] + local[i] * tables.local_dir[d] +
            cfg.visual_noise * rng.normal());

    if (cfg.with_mel) {
      r.mel_inline = Mat<float>(r.total_frames(), 80);
      index_t frame = 0;
      for (index_t j = 0; j < t_len; ++j) {
        const int p = phone_ids[j];
        for (index_t f = 0; f < r.durations[j]; ++f, ++frame) {
          for (int b = 0; b < 80; ++b) {
            const double v = tables.mel_template(p, b) +
                             r.style * tables.mel_style_row[b] +
                             cfg.mel_noise * rng.normal();
            r.mel_inline(frame, b) =
                static_cast<float>(std::max(v, kLogFloor));
          }
        }
      }
    }

    r.validate();
    m.records.push_back(std::move(r));
  }
  return m;
}

}  // namespace prosofuse

#endif  // PROSOFUSE_DATA_SYNTH_HPP_

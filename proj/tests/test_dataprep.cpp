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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <vector>

#include "prosofuse/data/alignment.hpp"
#include "prosofuse/data/filter.hpp"
#include "prosofuse/data/manifest.hpp"
#include "prosofuse/data/matrix_file.hpp"
#include "prosofuse/data/normalize.hpp"
#include "prosofuse/data/split.hpp"
#include "prosofuse/data/stats.hpp"
#include "prosofuse/data/synth.hpp"
#include "prosofuse/rng.hpp"

namespace prosofuse {
namespace {

std::string tmp_path(const std::string& name) {
  return testing::TempDir() + name;
}

TEST(MatrixFile, RandomRoundTripBitwise) {
  RngState rng(1);
  Mat<float> m(7, 5);
  for (index_t i = 0; i < m.size(); ++i)
    m.data()[i] = static_cast<float>(rng.uniform(-10, 10));
  m(0, 0) = -0.0f;  // negative zero must survive
  const auto path = tmp_path("pf_mat.mat");
  save_matrix(path, m);
  auto r = load_matrix<float>(path);
  ASSERT_EQ(r.rows(), 7);
  ASSERT_EQ(r.cols(), 5);
  for (index_t i = 0; i < m.size(); ++i) {
    EXPECT_EQ(std::bit_cast<uint32_t>(m.data()[i]),
              std::bit_cast<uint32_t>(r.data()[i]));
  }
  std::remove(path.c_str());
}

TEST(MatrixFile, ExactBytesForOneByOne) {
  Mat<float> m(1, 1);
  m(0, 0) = 2.0f;
  const auto path = tmp_path("pf_one.mat");
  save_matrix(path, m);
  std::ifstream in(path, std::ios::binary);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  const std::vector<uint8_t> expect = {'M', 'A', 'T', '1', 1, 0, 0, 0,
                                       1,   0,   0,   0,   0, 0, 0, 0x40};
  EXPECT_EQ(bytes, expect);
  std::remove(path.c_str());
}

TEST(MatrixFile, TruncationAndBadMagicRejected) {
  RngState rng(2);
  Mat<float> m(3, 4);
  for (index_t i = 0; i < m.size(); ++i)
    m.data()[i] = static_cast<float>(rng.uniform(-1, 1));
  const auto path = tmp_path("pf_trunc.mat");
  save_matrix(path, m);
  {
    std::ifstream in(path, std::ios::binary);
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size() - 1));
  }
  EXPECT_THROW(load_matrix<float>(path), CorruptionError);
  {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    os << "XXXX" << std::string(12, '\0');
  }
  EXPECT_THROW(load_matrix<float>(path), FormatError);
  std::remove(path.c_str());
}

Manifest tiny_manifest() {
  Manifest m;
  m.dsp_config_hash = 0xabcdef;
  UtteranceRecord a;
  a.id = "utt-a";
  a.phones = {"ph01", "ph02"};
  a.durations = {3, 4};
  a.pitch = {1.5, 0.0};
  a.energy = {0.5, 0.25};
  a.split = "train";
  a.style = -1.0;
  a.has_style = true;
  UtteranceRecord b;
  b.id = "utt-b";
  b.phones = {"ph02"};
  b.durations = {2};
  b.pitch = {2.5};
  b.energy = {0.75};
  b.split = "val";
  m.records = {a, b};
  return m;
}

TEST(ManifestFile, RoundTripAndByteDeterminism) {
  auto m = tiny_manifest();
  const auto path = tmp_path("pf_manifest.jsonl");
  save_manifest(m, path);
  auto r = load_manifest(path);
  EXPECT_EQ(r.dsp_config_hash, m.dsp_config_hash);
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.records[0].id, "utt-a");
  EXPECT_EQ(r.records[0].phones, m.records[0].phones);
  EXPECT_EQ(r.records[0].durations, m.records[0].durations);
  EXPECT_EQ(r.records[0].pitch, m.records[0].pitch);
  EXPECT_TRUE(r.records[0].has_style);
  EXPECT_EQ(r.records[0].style, -1.0);
  EXPECT_FALSE(r.records[1].has_style);
  EXPECT_EQ(r.records[1].split, "val");

  const auto path2 = tmp_path("pf_manifest2.jsonl");
  save_manifest(m, path2);
  std::ifstream f1(path, std::ios::binary), f2(path2, std::ios::binary);
  std::string s1((std::istreambuf_iterator<char>(f1)),
                 std::istreambuf_iterator<char>());
  std::string s2((std::istreambuf_iterator<char>(f2)),
                 std::istreambuf_iterator<char>());
  EXPECT_EQ(s1, s2);
  std::remove(path.c_str());
  std::remove(path2.c_str());
}

TEST(ManifestFile, MaterializedFeaturesReload) {
  auto m = tiny_manifest();
  RngState rng(3);
  m.records[0].visual_inline = Mat<float>(4, 6);
  for (index_t i = 0; i < m.records[0].visual_inline.size(); ++i)
    m.records[0].visual_inline.data()[i] =
        static_cast<float>(rng.uniform(-1, 1));
  const auto dir = tmp_path("pf_feats");
  materialize_features(m, dir);
  EXPECT_FALSE(m.records[0].visual_path.empty());
  const auto path = tmp_path("pf_manifest3.jsonl");
  save_manifest(m, path);
  auto r = load_manifest(path);
  auto v = load_visual(r.records[0]);
  ASSERT_EQ(v.rows(), 4);
  for (index_t i = 0; i < v.size(); ++i)
    EXPECT_EQ(v.data()[i], m.records[0].visual_inline.data()[i]);
  std::remove(path.c_str());
  std::filesystem::remove_all(dir);
}

TEST(ManifestFile, ValidationCatchesBrokenRecords) {
  auto m = tiny_manifest();
  m.records[1].id = "utt-a";  // duplicate
  EXPECT_THROW(m.validate(), FormatError);
  auto m2 = tiny_manifest();
  m2.records[0].pitch.pop_back();
  EXPECT_THROW(m2.validate(), FormatError);
  auto m3 = tiny_manifest();
  m3.records[0].durations[0] = 0;
  EXPECT_THROW(m3.validate(), FormatError);
}

TEST(Stats, TwoPointMoments) {
  Manifest m;
  UtteranceRecord r;
  r.id = "u";
  r.phones = {"aa", "aa"};
  r.durations = {1, 1};
  r.pitch = {1.0, 3.0};
  r.energy = {1.0, 3.0};
  m.records = {r};
  auto s = compute_stats(m);
  EXPECT_DOUBLE_EQ(s.phone_pitch["aa"].mean, 2.0);
  EXPECT_DOUBLE_EQ(s.phone_pitch["aa"].sigma, 1.0);  // population sigma
  EXPECT_FALSE(s.phone_pitch["aa"].low_support);
}

TEST(Stats, DegenerateAndLowSupport) {
  Manifest m;
  UtteranceRecord r;
  r.id = "u";
  r.phones = {"aa", "aa", "bb"};
  r.durations = {2, 2, 2};
  r.pitch = {5.0, 5.0, 7.0};
  r.energy = {1.0, 1.0, 1.0};
  m.records = {r};
  auto s = compute_stats(m);
  EXPECT_DOUBLE_EQ(s.phone_pitch["aa"].sigma, 0.0);
  EXPECT_FALSE(s.phone_pitch["aa"].low_support);
  EXPECT_TRUE(s.phone_pitch["bb"].low_support);
  EXPECT_DOUBLE_EQ(s.phone_pitch["bb"].sigma, 0.0);
}

TEST(Stats, UnvoicedExcludedAndTrainOnly) {
  Manifest m;
  UtteranceRecord train;
  train.id = "t";
  train.phones = {"aa", "aa", "aa"};
  train.durations = {1, 1, 1};
  train.pitch = {100.0, 0.0, 200.0};  // the zero must not count
  train.energy = {1.0, 2.0, 3.0};
  UtteranceRecord val = train;
  val.id = "v";
  val.split = "val";
  val.pitch = {900.0, 900.0, 900.0};  // must not leak into stats
  m.records = {train, val};
  auto s = compute_stats(m);
  EXPECT_DOUBLE_EQ(s.phone_pitch["aa"].mean, 150.0);
  EXPECT_EQ(s.phone_pitch["aa"].count, 2);
  EXPECT_EQ(s.phone_duration["aa"].count, 3);
}

TEST(Stats, MatchesTwoPassOracle) {
  SynthConfig cfg;
  cfg.seed = 77;
  cfg.train_utterances = 40;
  cfg.val_utterances = 0;
  auto m = synth_dataset(cfg);
  auto s = compute_stats(m);

  std::map<std::string, std::vector<double>> by_phone;
  for (const auto& r : m.records)
    for (size_t i = 0; i < r.phones.size(); ++i)
      if (r.pitch[i] != 0.0) by_phone[r.phones[i]].push_back(r.pitch[i]);
  for (const auto& [ph, vals] : by_phone) {
    double mean = 0;
    for (double v : vals) mean += v;
    mean /= vals.size();
    double var = 0;
    for (double v : vals) var += (v - mean) * (v - mean);
    const double sigma = vals.size() >= 2 ? std::sqrt(var / vals.size()) : 0.0;
    EXPECT_NEAR(s.phone_pitch[ph].mean, mean, 1e-10);
    EXPECT_NEAR(s.phone_pitch[ph].sigma, sigma, 1e-10);
  }
}

TEST(Stats, FileRoundTrip) {
  SynthConfig cfg;
  cfg.seed = 5;
  cfg.train_utterances = 10;
  cfg.val_utterances = 0;
  auto s = compute_stats(synth_dataset(cfg));
  const auto path = tmp_path("pf_stats.json");
  save_stats(s, path);
  auto r = load_stats(path);
  EXPECT_EQ(r.phone_pitch.size(), s.phone_pitch.size());
  for (const auto& [ph, e] : s.phone_pitch) {
    EXPECT_DOUBLE_EQ(r.phone_pitch[ph].mean, e.mean);
    EXPECT_DOUBLE_EQ(r.phone_pitch[ph].sigma, e.sigma);
  }
  EXPECT_DOUBLE_EQ(r.global_log_dur.mean, s.global_log_dur.mean);
  std::remove(path.c_str());
}

TEST(Filter, AbsolutePitchRule) {
  Manifest m;
  UtteranceRecord r;
  r.id = "hot";
  r.phones = {"aa"};
  r.durations = {3};
  r.pitch = {501.0};
  r.energy = {1.0};
  m.records = {r};
  DatasetStats s;  // no sigma bands; only the absolute rule can fire
  auto out = filter_outliers(m, s, FilterConfig{});
  EXPECT_TRUE(out.kept.records.empty());
  ASSERT_EQ(out.removed.size(), 1u);
  EXPECT_EQ(out.removed[0].rule, "pitch_max");
  EXPECT_EQ(out.removed[0].id, "hot");
}

TEST(Filter, ValuesAtMeansKept) {
  Manifest m;
  UtteranceRecord r;
  r.id = "calm";
  r.phones = {"aa", "bb"};
  r.durations = {4, 6};
  r.pitch = {100.0, 150.0};
  r.energy = {1.0, 1.0};
  m.records = {r};
  DatasetStats s;
  s.phone_pitch["aa"] = {100.0, 10.0, 5, false};
  s.phone_pitch["bb"] = {150.0, 10.0, 5, false};
  s.phone_duration["aa"] = {4.0, 1.0, 5, false};
  s.phone_duration["bb"] = {6.0, 1.0, 5, false};
  auto out = filter_outliers(m, s, FilterConfig{});
  EXPECT_EQ(out.kept.records.size(), 1u);
  EXPECT_TRUE(out.removed.empty());
}

TEST(Filter, MatchesBruteForceOracleOnPlantedOutliers) {
  // 200 records; some get planted violations of each rule. The filter must
  // agree with an independently-coded rule check record by record.
  RngState rng(123);
  Manifest m;
  DatasetStats s;
  const std::vector<std::string> phones = {"p0", "p1", "p2", "p3"};
  for (const auto& ph : phones) {
    s.phone_pitch[ph] = {200.0, 20.0, 100, false};
    s.phone_duration[ph] = {8.0, 2.0, 100, false};
  }
  FilterConfig fc;
  for (int k = 0; k < 200; ++k) {
    UtteranceRecord r;
    r.id = "r" + std::to_string(k);
    const int len = 3 + static_cast<int>(rng.uniform_int(5));
    for (int i = 0; i < len; ++i) {
      r.phones.push_back(phones[rng.uniform_int(phones.size())]);
      double pitch = 200.0 + 20.0 * rng.normal() * 0.8;
      double dur = 8.0 + 2.0 * rng.normal() * 0.8;
      const double roll = rng.uniform();
      if (roll < 0.05) pitch = 520.0 + rng.uniform(0, 100);   // rule (a)
      else if (roll < 0.10) pitch = 200.0 + 70.0;             // 3.5 sigma
      else if (roll < 0.15) dur = 8.0 + 7.0;                  // 3.5 sigma
      r.pitch.push_back(pitch);
      r.durations.push_back(
          std::max<index_t>(1, static_cast<index_t>(std::llround(dur))));
      r.energy.push_back(1.0);
    }
    m.records.push_back(std::move(r));
  }

  auto out = filter_outliers(m, s, fc);

  std::set<std::string> oracle_removed;
  for (const auto& r : m.records) {
    bool bad = false;
    for (size_t i = 0; i < r.phones.size() && !bad; ++i) {
      const auto& pp = s.phone_pitch.at(r.phones[i]);
      const auto& pd = s.phone_duration.at(r.phones[i]);
      if (r.pitch[i] != 0.0 && r.pitch[i] > fc.pitch_max) bad = true;
      else if (r.pitch[i] != 0.0 && pp.sigma > 0 &&
               std::abs(r.pitch[i] - pp.mean) > fc.k_sigma * pp.sigma)
        bad = true;
      else if (pd.sigma > 0 &&
               std::abs(r.durations[i] - pd.mean) > fc.k_sigma * pd.sigma)
        bad = true;
    }
    if (bad) oracle_removed.insert(r.id);
  }

  std::set<std::string> got_removed;
  for (const auto& rem : out.removed) got_removed.insert(rem.id);
  EXPECT_EQ(got_removed, oracle_removed);
  EXPECT_EQ(out.kept.records.size() + got_removed.size(), m.records.size());
  EXPECT_FALSE(oracle_removed.empty());
  EXPECT_LT(oracle_removed.size(), m.records.size());
  for (const auto& r : out.kept.records)
    EXPECT_EQ(got_removed.count(r.id), 0u);
}

TEST(Alignment, ExactGridBoundaries) {
  DspConfig cfg;
  // 256 samples per hop at 22050: boundaries at whole multiples of the hop
  // duration land exactly on frames.
  const double hop_sec = 256.0 / 22050.0;
  std::vector<AlignedPhone> phones = {{"aa", 0.0, 10 * hop_sec},
                                      {"bb", 10 * hop_sec, 25 * hop_sec}};
  auto d = align_to_durations(phones, cfg, 25);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0], 10);
  EXPECT_EQ(d[1], 15);
}

TEST(Alignment, HalfSecondPairSumsToMelFrames) {
  DspConfig cfg;
  std::vector<AlignedPhone> phones = {{"aa", 0.0, 0.5}, {"bb", 0.5, 1.0}};
  auto d = align_to_durations(phones, cfg, 87);
  EXPECT_EQ(d[0] + d[1], 87);
  EXPECT_EQ(d[0], 43);  // round(0.5 * 22050/256) = round(43.07)
}

TEST(Alignment, RejectsBrokenIntervals) {
  const auto path = tmp_path("pf_align.tsv");
  {
    std::ofstream os(path);
    os << "aa\t0.5\t0.2\n";
  }
  EXPECT_THROW(parse_alignment(path), AlignmentError);
  {
    std::ofstream os(path, std::ios::trunc);
    os << "aa\t0.0\t0.3\nbb\t0.4\t0.6\n";  // gap
  }
  EXPECT_THROW(parse_alignment(path), AlignmentError);
  {
    std::ofstream os(path, std::ios::trunc);
    os << "aa\t0.0\tnope\n";
  }
  EXPECT_THROW(parse_alignment(path), FormatError);
  std::remove(path.c_str());
}

TEST(Alignment, FrameCountMismatchLimits) {
  DspConfig cfg;
  std::vector<AlignedPhone> phones = {{"aa", 0.0, 1.0}};
  // round(1.0*22050/256) = 86; anything within 2 of that adjusts, else fails.
  auto d = align_to_durations(phones, cfg, 88);
  EXPECT_EQ(d[0], 88);
  EXPECT_THROW(align_to_durations(phones, cfg, 89), AlignmentError);
  // A phone rounding to zero frames is rejected outright.
  std::vector<AlignedPhone> flat = {{"aa", 0.0, 0.001}, {"bb", 0.001, 1.0}};
  EXPECT_THROW(align_to_durations(flat, cfg, 86), AlignmentError);
}

TEST(Normalize, CenterAndRoundTrip) {
  SynthConfig cfg;
  cfg.seed = 11;
  cfg.train_utterances = 30;
  cfg.val_utterances = 5;
  auto m = synth_dataset(cfg);
  auto s = compute_stats(m);
  auto n = normalize_targets(m, s);

  // A pitch value equal to the global mean maps to 0.
  auto probe = m;
  probe.records[0].pitch[0] = s.global_pitch.mean;
  auto probe_n = normalize_targets(probe, s);
  EXPECT_NEAR(probe_n.records[0].pitch[0], 0.0, 1e-12);

  auto back = denormalize_targets(n, s);
  for (size_t k = 0; k < m.records.size(); ++k)
    for (size_t i = 0; i < m.records[k].pitch.size(); ++i) {
      EXPECT_NEAR(back.records[k].pitch[i], m.records[k].pitch[i], 1e-6);
      EXPECT_NEAR(back.records[k].energy[i], m.records[k].energy[i], 1e-6);
    }
}

TEST(Normalize, UnvoicedSentinelSurvives) {
  auto m = tiny_manifest();
  DatasetStats s;
  s.global_pitch = {10.0, 2.0, 100, false};
  s.global_energy = {1.0, 0.5, 100, false};
  s.global_log_dur = {1.0, 0.3, 100, false};
  auto n = normalize_targets(m, s);
  EXPECT_EQ(n.records[0].pitch[1], 0.0);  // was unvoiced, stays 0
  auto back = denormalize_targets(n, s);
  EXPECT_EQ(back.records[0].pitch[1], 0.0);
}

TEST(Normalize, NormalizedMomentsAreStandard) {
  SynthConfig cfg;
  cfg.seed = 13;
  cfg.train_utterances = 400;
  cfg.val_utterances = 0;
  auto m = synth_dataset(cfg);
  auto s = compute_stats(m);
  auto n = normalize_targets(m, s);
  double acc = 0, sq = 0;
  index_t count = 0;
  for (const auto& r : n.records)
    for (const double v : r.pitch)
      if (v != 0.0) {
        acc += v;
        ++count;
      }
  const double mean = acc / count;
  for (const auto& r : n.records)
    for (const double v : r.pitch)
      if (v != 0.0) sq += (v - mean) * (v - mean);
  EXPECT_NEAR(mean, 0.0, 1e-3);
  EXPECT_NEAR(std::sqrt(sq / count), 1.0, 1e-3);
}

TEST(Normalize, DegenerateSigmaRejected) {
  auto m = tiny_manifest();
  DatasetStats s;  // all sigma zero
  EXPECT_THROW(normalize_targets(m, s), ConfigError);
}

TEST(Normalize, LogDurationInverse) {
  DatasetStats s;
  s.global_log_dur = {1.4, 0.5, 100, false};
  for (index_t frames : {1, 3, 7, 20}) {
    const double z = normalized_log_duration(frames, s);
    EXPECT_NEAR(denormalized_duration(z, s), frames, 1e-9);
  }
}

TEST(Synth, SameSeedBitIdentical) {
  SynthConfig cfg;
  cfg.seed = 99;
  cfg.train_utterances = 20;
  cfg.val_utterances = 5;
  cfg.with_mel = true;
  auto a = synth_dataset(cfg);
  auto b = synth_dataset(cfg);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (size_t k = 0; k < a.records.size(); ++k) {
    EXPECT_EQ(a.records[k].phones, b.records[k].phones);
    EXPECT_EQ(a.records[k].pitch, b.records[k].pitch);
    EXPECT_EQ(a.records[k].durations, b.records[k].durations);
    EXPECT_EQ(a.records[k].style, b.records[k].style);
    ASSERT_EQ(a.records[k].visual_inline.size(),
              b.records[k].visual_inline.size());
    for (index_t i = 0; i < a.records[k].visual_inline.size(); ++i)
      EXPECT_EQ(a.records[k].visual_inline.data()[i],
                b.records[k].visual_inline.data()[i]);
    for (index_t i = 0; i < a.records[k].mel_inline.size(); ++i)
      EXPECT_EQ(a.records[k].mel_inline.data()[i],
                b.records[k].mel_inline.data()[i]);
  }
}

TEST(Synth, ShapesAndSplits) {
  SynthConfig cfg;
  cfg.seed = 3;
  cfg.train_utterances = 12;
  cfg.val_utterances = 4;
  cfg.test_utterances = 2;
  cfg.with_mel = true;
  auto m = synth_dataset(cfg);
  EXPECT_EQ(m.split_view("train").size(), 12u);
  EXPECT_EQ(m.split_view("val").size(), 4u);
  EXPECT_EQ(m.split_view("test").size(), 2u);
  for (const auto& r : m.records) {
    const index_t t = r.phone_count();
    EXPECT_GE(t, cfg.min_phones);
    EXPECT_LE(t, cfg.max_phones);
    const index_t n = (t + cfg.phones_per_visual - 1) / cfg.phones_per_visual;
    EXPECT_EQ(r.visual_inline.rows(), n);
    EXPECT_EQ(r.visual_inline.cols(), cfg.visual_dim);
    EXPECT_EQ(r.mel_inline.rows(), r.total_frames());
    EXPECT_EQ(r.mel_inline.cols(), 80);
    bool known_style = false;
    for (const double s : cfg.styles)
      if (r.style == s) known_style = true;
    EXPECT_TRUE(known_style);
  }
}

TEST(Synth, FloorFormulas) {
  SynthConfig cfg;
  cfg.gain_pitch = 1.0;
  cfg.noise = 0.1;
  cfg.local_sigma = 0.0;
  EXPECT_NEAR(cfg.style_variance(), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(cfg.text_only_pitch_floor(), 2.0 / 3.0 + 0.01, 1e-12);
  EXPECT_NEAR(cfg.multimodal_pitch_floor(), 0.01, 1e-12);
  cfg.gain_pitch = 0.0;
  EXPECT_NEAR(cfg.text_only_pitch_floor(), cfg.multimodal_pitch_floor(),
              1e-12);  // modalities tie without style signal
  cfg.local_sigma = 1.5;
  cfg.local_gain_pitch = 2.0;
  EXPECT_NEAR(cfg.text_only_pitch_floor(), 4.0 * 2.25 + 0.01, 1e-12);
}

TEST(Synth, ConditionalVarianceMatchesNoise) {
  // Var(pitch | phone, style) must be sigma_eps^2: pooled over all
  // (phone, style) groups with 10k+ samples.
  SynthConfig cfg;
  cfg.seed = 21;
  cfg.vocab = 8;
  cfg.train_utterances = 700;
  cfg.val_utterances = 0;
  cfg.noise = 0.1;
  cfg.local_sigma = 0.0;
  auto m = synth_dataset(cfg);
  std::map<std::pair<std::string, double>, std::vector<double>> groups;
  for (const auto& r : m.records)
    for (size_t i = 0; i < r.phones.size(); ++i)
      groups[{r.phones[i], r.style}].push_back(r.pitch[i]);
  double sq = 0.0;
  index_t dof = 0, total = 0;
  for (const auto& [key, vals] : groups) {
    total += static_cast<index_t>(vals.size());
    if (vals.size() < 2) continue;
    double mean = 0;
    for (double v : vals) mean += v;
    mean /= vals.size();
    for (double v : vals) sq += (v - mean) * (v - mean);
    dof += static_cast<index_t>(vals.size()) - 1;
  }
  ASSERT_GE(total, 10000);
  const double pooled = sq / dof;
  EXPECT_NEAR(pooled, 0.01, 0.001);  // within 10%
}

TEST(Synth, LocalLatentRaisesTextFloorOnly) {
  // With a local component, per-sequence pitch variation grows; the visual
  // rows must carry the same latent along the fixed direction.
  SynthConfig base;
  base.seed = 31;
  base.train_utterances = 200;
  base.val_utterances = 0;
  base.local_sigma = 0.0;
  SynthConfig local = base;
  local.local_sigma = 1.0;
  auto a = synth_dataset(base);
  auto b = synth_dataset(local);
  auto seq_var = [](const Manifest& m) {
    double acc = 0;
    for (const auto& r : m.records) {
      double mean = 0;
      for (double v : r.pitch) mean += v;
      mean /= r.pitch.size();
      double var = 0;
      for (double v : r.pitch) var += (v - mean) * (v - mean);
      acc += var / r.pitch.size();
    }
    return acc / m.records.size();
  };
  EXPECT_GT(seq_var(b), seq_var(a) + 0.3);
}

TEST(Split, DegenerateAndDeterministic) {
  SynthConfig cfg;
  cfg.seed = 41;
  cfg.train_utterances = 30;
  cfg.val_utterances = 0;
  auto m = synth_dataset(cfg);
  auto all_train = split_manifest(m, {1.0, 0.0, 0.0}, 7);
  EXPECT_EQ(all_train.split_view("train").size(), 30u);
  auto s1 = split_manifest(m, {0.5, 0.25, 0.25}, 7);
  auto s2 = split_manifest(m, {0.5, 0.25, 0.25}, 7);
  for (size_t i = 0; i < s1.records.size(); ++i)
    EXPECT_EQ(s1.records[i].split, s2.records[i].split);
  auto s3 = split_manifest(m, {0.5, 0.25, 0.25}, 8);
  bool any_differs = false;
  for (size_t i = 0; i < s1.records.size(); ++i)
    if (s1.records[i].split != s3.records[i].split) any_differs = true;
  EXPECT_TRUE(any_differs);
}

TEST(Split, ThousandRecordCounts) {
  Manifest m;
  for (int k = 0; k < 1000; ++k) {
    UtteranceRecord r;
    r.id = "r" + std::to_string(k);
    r.phones = {"aa"};
    r.durations = {1};
    r.pitch = {1.0};
    r.energy = {1.0};
    m.records.push_back(std::move(r));
  }
  auto out = split_manifest(m, {0.8, 0.1, 0.1}, 3);
  EXPECT_EQ(out.split_view("train").size(), 800u);
  EXPECT_EQ(out.split_view("val").size(), 100u);
  EXPECT_EQ(out.split_view("test").size(), 100u);
}

TEST(Split, BadInputsRejected) {
  Manifest empty;
  EXPECT_THROW(split_manifest(empty, {1, 0, 0}, 1), ArgumentError);
  auto m = tiny_manifest();
  EXPECT_THROW(split_manifest(m, {0.5, 0.2, 0.2}, 1), ArgumentError);
}

}  // namespace
}  // namespace prosofuse

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

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numeric>
#include <vector>

#include "prosofuse/dsp/contour.hpp"
#include "prosofuse/dsp/metrics.hpp"
#include "prosofuse/dsp/pitch.hpp"
#include "prosofuse/dsp/resample.hpp"
#include "prosofuse/dsp/stft.hpp"
#include "prosofuse/dsp/wav.hpp"
#include "prosofuse/rng.hpp"

namespace prosofuse {
namespace {

Waveform<double> sine(double hz, double seconds, int rate,
                      double amp = 0.5) {
  Waveform<double> w;
  w.sample_rate = rate;
  const auto n = static_cast<index_t>(seconds * rate);
  w.samples.resize(n);
  for (index_t i = 0; i < n; ++i)
    w.samples[i] = amp * std::sin(2.0 * M_PI * hz * i / rate);
  return w;
}

Waveform<double> silence(index_t n, int rate) {
  Waveform<double> w;
  w.sample_rate = rate;
  w.samples.assign(n, 0.0);
  return w;
}

TEST(Resample, SameRateIsBitwiseIdentity) {
  RngState rng(1);
  Waveform<double> w;
  w.sample_rate = 22050;
  for (int i = 0; i < 1000; ++i) w.samples.push_back(rng.uniform(-1, 1));
  auto y = resample(w, 22050);
  ASSERT_EQ(y.samples.size(), w.samples.size());
  for (size_t i = 0; i < w.samples.size(); ++i)
    EXPECT_EQ(w.samples[i], y.samples[i]);
}

TEST(Resample, DcPreservedExactly) {
  Waveform<double> w;
  w.sample_rate = 44100;
  w.samples.assign(2000, 0.37);
  auto y = resample(w, 22050);
  EXPECT_EQ(y.sample_rate, 22050);
  for (double v : y.samples) EXPECT_NEAR(v, 0.37, 1e-12);
}

TEST(Resample, SinePeakSurvivesRateChange) {
  // 440 Hz at 44100 resampled to 22050; locate the spectral peak of the
  // output with a zero-padded FFT and check it lands within one bin of 440.
  auto w = sine(440.0, 0.5, 44100);
  auto y = resample(w, 22050);
  const size_t nfft = 16384;
  std::vector<std::complex<double>> buf(nfft, 0.0);
  const size_t used = std::min(y.samples.size(), nfft);
  for (size_t i = 0; i < used; ++i) buf[i] = y.samples[i];
  fft_radix2(buf);
  size_t peak = 1;
  for (size_t k = 1; k < nfft / 2; ++k)
    if (std::abs(buf[k]) > std::abs(buf[peak])) peak = k;
  const double bin_hz = 22050.0 / nfft;
  EXPECT_NEAR(peak * bin_hz, 440.0, bin_hz);
}

TEST(Resample, EmptyInputRejected) {
  Waveform<double> w;
  w.sample_rate = 22050;
  EXPECT_THROW(resample(w, 16000), SignalError);
}

TEST(MelSpectrogram, SilenceHitsLogFloor) {
  DspConfig cfg;
  auto mel = mel_spectrogram(silence(4096, 22050), cfg);
  const double expect = std::log(1e-5);
  for (index_t i = 0; i < mel.size(); ++i)
    EXPECT_DOUBLE_EQ(mel.data()[i], expect);
}

TEST(MelSpectrogram, FrameCountFormula) {
  DspConfig cfg;
  auto mel = mel_spectrogram(silence(22050, 22050), cfg);
  EXPECT_EQ(mel.rows(), 87);  // floor(22050/256) + 1
  EXPECT_EQ(mel.cols(), 80);
}

TEST(MelSpectrogram, ShortSignalRejected) {
  DspConfig cfg;
  EXPECT_THROW(mel_spectrogram(silence(100, 22050), cfg), SignalError);
}

// Independent HTK filterbank edges, straight from the mel formulas.
std::vector<double> oracle_mel_edges(const DspConfig& cfg) {
  auto to_mel = [](double f) { return 2595.0 * std::log10(1.0 + f / 700.0); };
  auto to_hz = [](double m) {
    return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0);
  };
  std::vector<double> edges(cfg.mel_bins + 2);
  const double lo = to_mel(cfg.fmin), hi = to_mel(cfg.fmax);
  for (int m = 0; m < cfg.mel_bins + 2; ++m)
    edges[m] = to_hz(lo + (hi - lo) * m / (cfg.mel_bins + 1));
  return edges;
}

TEST(MelSpectrogram, ToneLandsInTheFilterCoveringIt) {
  DspConfig cfg;
  auto mel = mel_spectrogram(sine(1000.0, 0.3, 22050), cfg);
  const auto edges = oracle_mel_edges(cfg);
  const index_t mid = mel.rows() / 2;
  index_t argmax = 0;
  for (index_t m = 1; m < mel.cols(); ++m)
    if (mel(mid, m) > mel(mid, argmax)) argmax = m;
  // The winning filter's triangular support must contain 1 kHz.
  EXPECT_LT(edges[argmax], 1000.0);
  EXPECT_GT(edges[argmax + 2], 1000.0);
}

TEST(MelSpectrogram, ToneAtFilterCenterWinsThatFilter) {
  DspConfig cfg;
  const auto centers = mel_center_frequencies(cfg);
  const int m_target = 30;
  auto mel = mel_spectrogram(sine(centers[m_target], 0.3, 22050), cfg);
  const index_t mid = mel.rows() / 2;
  index_t argmax = 0;
  for (index_t m = 1; m < mel.cols(); ++m)
    if (mel(mid, m) > mel(mid, argmax)) argmax = m;
  EXPECT_EQ(argmax, m_target);
}

TEST(Energy, SilenceIsZero) {
  DspConfig cfg;
  auto e = extract_energy(silence(2048, 22050), cfg);
  for (double v : e) EXPECT_DOUBLE_EQ(v, 0.0);
}

TEST(Energy, LinearInAmplitude) {
  DspConfig cfg;
  auto w1 = sine(300.0, 0.2, 22050, 0.25);
  auto w2 = w1;
  for (auto& s : w2.samples) s *= 2.0;
  auto e1 = extract_energy(w1, cfg);
  auto e2 = extract_energy(w2, cfg);
  ASSERT_EQ(e1.size(), e2.size());
  for (size_t t = 0; t < e1.size(); ++t)
    if (e1[t] > 0) EXPECT_NEAR(e2[t] / e1[t], 2.0, 1e-6);
}

TEST(Energy, MatchesNaiveDftOracle) {
  // Recompute one frame with a from-scratch windowed DFT and L2 norm:
  // independent reflect padding, window and transform.
  DspConfig cfg;
  RngState rng(5);
  Waveform<double> w;
  w.sample_rate = 22050;
  for (int i = 0; i < 2048; ++i) w.samples.push_back(rng.uniform(-0.8, 0.8));
  auto e = extract_energy(w, cfg);

  const index_t frame = 4;
  const index_t len = w.size();
  const index_t start = frame * cfg.hop - cfg.n_fft / 2;
  std::vector<double> block(cfg.n_fft);
  for (index_t j = 0; j < cfg.n_fft; ++j) {
    index_t idx = start + j;
    const index_t period = 2 * (len - 1);
    idx = ((idx % period) + period) % period;
    if (idx >= len) idx = period - idx;
    const double win = 0.5 * (1.0 - std::cos(2.0 * M_PI * j / cfg.n_fft));
    block[j] = w.samples[idx] * win;
  }
  double acc = 0.0;
  for (int k = 0; k <= cfg.n_fft / 2; ++k) {
    double re = 0.0, im = 0.0;
    for (int j = 0; j < cfg.n_fft; ++j) {
      const double ang = -2.0 * M_PI * k * j / cfg.n_fft;
      re += block[j] * std::cos(ang);
      im += block[j] * std::sin(ang);
    }
    acc += re * re + im * im;
  }
  EXPECT_NEAR(e[frame], std::sqrt(acc), 1e-6 * std::sqrt(acc));
}

TEST(Pitch, PureToneTracked) {
  DspConfig cfg;
  auto f0 = extract_pitch(sine(220.0, 1.0, 22050), cfg);
  index_t voiced = 0, close = 0;
  for (double v : f0) {
    if (v > 0) {
      ++voiced;
      if (std::abs(v - 220.0) <= 0.03 * 220.0) ++close;
    }
  }
  EXPECT_GE(voiced, static_cast<index_t>(0.9 * f0.size()));
  EXPECT_EQ(close, voiced);
}

TEST(Pitch, SilenceIsUnvoiced) {
  DspConfig cfg;
  auto f0 = extract_pitch(silence(22050, 22050), cfg);
  for (double v : f0) EXPECT_EQ(v, 0.0);
}

TEST(Pitch, WhiteNoiseMostlyUnvoiced) {
  DspConfig cfg;
  RngState rng(9);
  Waveform<double> w;
  w.sample_rate = 22050;
  for (int i = 0; i < 22050; ++i) w.samples.push_back(rng.uniform(-0.5, 0.5));
  auto f0 = extract_pitch(w, cfg);
  index_t unvoiced = 0;
  for (double v : f0)
    if (v == 0.0) ++unvoiced;
  EXPECT_GE(unvoiced, static_cast<index_t>(0.8 * f0.size()));
}

TEST(Pitch, ChirpMediansRise) {
  // Linear 150 -> 300 Hz sweep; the voiced median of the second half must
  // exceed the first half's.
  DspConfig cfg;
  Waveform<double> w;
  w.sample_rate = 22050;
  const int n = 22050;
  double phase = 0.0;
  for (int i = 0; i < n; ++i) {
    const double hz = 150.0 + 150.0 * i / n;
    phase += 2.0 * M_PI * hz / 22050.0;
    w.samples.push_back(0.5 * std::sin(phase));
  }
  auto f0 = extract_pitch(w, cfg);
  auto median_of = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  std::vector<double> first, second;
  for (size_t t = 0; t < f0.size(); ++t) {
    if (f0[t] > 0) (t < f0.size() / 2 ? first : second).push_back(f0[t]);
  }
  ASSERT_FALSE(first.empty());
  ASSERT_FALSE(second.empty());
  EXPECT_LT(median_of(first), median_of(second));
}

TEST(FrameGrids, MelPitchEnergyAgree) {
  DspConfig cfg;
  RngState rng(13);
  Waveform<double> w;
  w.sample_rate = 22050;
  for (int i = 0; i < 5000; ++i) w.samples.push_back(rng.uniform(-0.3, 0.3));
  auto mel = mel_spectrogram(w, cfg);
  auto f0 = extract_pitch(w, cfg);
  auto en = extract_energy(w, cfg);
  EXPECT_EQ(mel.rows(), 5000 / 256 + 1);
  EXPECT_EQ(static_cast<index_t>(f0.size()), mel.rows());
  EXPECT_EQ(static_cast<index_t>(en.size()), mel.rows());
}

TEST(PhoneAverage, DirectMeans) {
  std::vector<double> c = {1, 2, 3, 4};
  auto out = phone_average(c, {2, 2});
  ASSERT_EQ(out.size(), 2u);
  EXPECT_DOUBLE_EQ(out[0], 1.5);
  EXPECT_DOUBLE_EQ(out[1], 3.5);
}

TEST(PhoneAverage, SinglePhoneIsGlobalMean) {
  std::vector<double> c = {2, 4, 6, 8, 10};
  auto out = phone_average(c, {5});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_DOUBLE_EQ(out[0], 6.0);
}

TEST(PhoneAverage, VoicedOnlyExcludesZeros) {
  std::vector<double> c = {100, 0, 200, 0};
  auto out = phone_average(c, {2, 2}, /*voiced_only=*/true);
  EXPECT_DOUBLE_EQ(out[0], 100.0);
  EXPECT_DOUBLE_EQ(out[1], 200.0);
  auto all_unvoiced = phone_average<double>({0, 0}, {2}, true);
  EXPECT_DOUBLE_EQ(all_unvoiced[0], 0.0);
}

TEST(PhoneAverage, CoverageMismatchRejected) {
  std::vector<double> c = {1, 2, 3};
  EXPECT_THROW(phone_average(c, {2, 2}), AlignmentError);
}

TEST(PhoneAverage, RoundTripMatchesScalarOracle) {
  RngState rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<index_t> durs;
    index_t total = 0;
    const int phones = 1 + static_cast<int>(rng.uniform_int(6));
    for (int p = 0; p < phones; ++p) {
      const index_t d = 1 + rng.uniform_int(5);
      durs.push_back(d);
      total += d;
    }
    std::vector<double> c;
    for (index_t i = 0; i < total; ++i) c.push_back(rng.uniform(-2, 2));
    auto avg = phone_average(c, durs);
    index_t pos = 0;
    for (size_t p = 0; p < durs.size(); ++p) {
      double acc = 0;
      for (index_t j = 0; j < durs[p]; ++j) acc += c[pos + j];
      EXPECT_NEAR(avg[p], acc / durs[p], 1e-12);
      pos += durs[p];
    }
  }
}

TEST(Downsample, ExactDivision) {
  auto out = downsample_average<double>({1, 2, 3, 4, 5, 6}, 2);
  EXPECT_DOUBLE_EQ(out[0], 2.0);
  EXPECT_DOUBLE_EQ(out[1], 5.0);
}

TEST(Downsample, IdentityWhenSameLength) {
  std::vector<double> p = {3.5, -1.0, 7.25};
  auto out = downsample_average(p, 3);
  for (size_t i = 0; i < p.size(); ++i) EXPECT_DOUBLE_EQ(out[i], p[i]);
}

TEST(Downsample, LongerChunksComeFirst) {
  auto out = downsample_average<double>({1, 2, 3, 4, 5}, 2);
  EXPECT_DOUBLE_EQ(out[0], 2.0);   // mean of 1,2,3
  EXPECT_DOUBLE_EQ(out[1], 4.5);   // mean of 4,5
}

TEST(Downsample, BadTargetsRejected) {
  std::vector<double> p = {1, 2, 3};
  EXPECT_THROW(downsample_average(p, 0), ArgumentError);
  EXPECT_THROW(downsample_average(p, 4), ArgumentError);
}

TEST(Downsample, BoundsAndMeanProperties) {
  RngState rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const index_t t = 2 + rng.uniform_int(30);
    const index_t n = 1 + rng.uniform_int(t);
    std::vector<double> p;
    for (index_t i = 0; i < t; ++i) p.push_back(rng.uniform(-5, 5));
    auto out = downsample_average(p, n);
    const double lo = *std::min_element(p.begin(), p.end());
    const double hi = *std::max_element(p.begin(), p.end());
    for (double v : out) {
      EXPECT_GE(v, lo - 1e-12);
      EXPECT_LE(v, hi + 1e-12);
    }
    if (t % n == 0) {
      const double mean_in =
          std::accumulate(p.begin(), p.end(), 0.0) / t;
      const double mean_out =
          std::accumulate(out.begin(), out.end(), 0.0) / n;
      EXPECT_NEAR(mean_in, mean_out, 1e-12);
    }
  }
}

Mat<double> random_logmel(index_t frames, RngState& rng) {
  Mat<double> m(frames, 80);
  for (index_t i = 0; i < m.size(); ++i)
    m.data()[i] = rng.uniform(-11.5, 2.0);
  return m;
}

TEST(Mcd, IdentityIsZero) {
  RngState rng(23);
  auto a = random_logmel(12, rng);
  EXPECT_DOUBLE_EQ(mcd(a, a), 0.0);
}

TEST(Mcd, Symmetric) {
  RngState rng(29);
  auto a = random_logmel(9, rng);
  auto b = random_logmel(14, rng);
  EXPECT_DOUBLE_EQ(mcd(a, b), mcd(b, a));
  EXPECT_GT(mcd(a, b), 0.0);
}

TEST(Mcd, InvariantToConstantLogShift) {
  RngState rng(31);
  auto a = random_logmel(8, rng);
  auto b = random_logmel(8, rng);
  auto b_shift = b;
  for (index_t i = 0; i < b_shift.size(); ++i) b_shift.data()[i] += 0.75;
  EXPECT_NEAR(mcd(a, b), mcd(a, b_shift), 1e-9);
}

TEST(Mcd, EmptyRejected) {
  Mat<double> empty(0, 80), ok(3, 80);
  EXPECT_THROW(mcd(empty, ok), SignalError);
}

TEST(LogF0Rmse, IdentityAndOctave) {
  std::vector<double> a = {110, 0, 220, 440};
  EXPECT_DOUBLE_EQ(log_f0_rmse(a, a), 0.0);
  std::vector<double> b = {220, 0, 440, 880};
  EXPECT_NEAR(log_f0_rmse(a, b), std::log(2.0), 1e-12);
}

TEST(LogF0Rmse, MatchesScalarLoopOracle) {
  RngState rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> a, b;
    for (int i = 0; i < 40; ++i) {
      a.push_back(rng.uniform() < 0.3 ? 0.0 : rng.uniform(80, 400));
      b.push_back(rng.uniform() < 0.3 ? 0.0 : rng.uniform(80, 400));
    }
    bool any = false;
    double acc = 0;
    int cnt = 0;
    for (int i = 0; i < 40; ++i) {
      if (a[i] > 0 && b[i] > 0) {
        const double d = std::log(a[i]) - std::log(b[i]);
        acc += d * d;
        ++cnt;
        any = true;
      }
    }
    if (!any) {
      EXPECT_THROW(log_f0_rmse(a, b), MetricError);
    } else {
      EXPECT_NEAR(log_f0_rmse(a, b), std::sqrt(acc / cnt), 1e-10);
    }
  }
}

TEST(LogF0Rmse, NoMutualVoicingReported) {
  std::vector<double> a = {100, 0}, b = {0, 100};
  EXPECT_THROW(log_f0_rmse(a, b), MetricError);
}

std::vector<double> orthogonal_noise(const std::vector<double>& ref,
                                     RngState& rng) {
  // Random vector made orthogonal to ref and to the all-ones direction so
  // zero-meaning does not disturb the construction.
  const size_t n = ref.size();
  std::vector<double> noise(n);
  for (auto& v : noise) v = rng.normal();
  double mean = std::accumulate(noise.begin(), noise.end(), 0.0) / n;
  for (auto& v : noise) v -= mean;
  double dot = 0, rr = 0;
  for (size_t i = 0; i < n; ++i) {
    dot += noise[i] * ref[i];
    rr += ref[i] * ref[i];
  }
  for (size_t i = 0; i < n; ++i) noise[i] -= dot / rr * ref[i];
  mean = std::accumulate(noise.begin(), noise.end(), 0.0) / n;
  for (auto& v : noise) v -= mean;
  return noise;
}

TEST(SiSnr, TwentyDbFromCalibratedNoise) {
  RngState rng(41);
  std::vector<double> ref(4096);
  for (auto& v : ref) v = rng.normal();
  const double mean = std::accumulate(ref.begin(), ref.end(), 0.0) / ref.size();
  for (auto& v : ref) v -= mean;  // zero-mean reference
  auto noise = orthogonal_noise(ref, rng);
  double pr = 0, pn = 0;
  for (size_t i = 0; i < ref.size(); ++i) {
    pr += ref[i] * ref[i];
    pn += noise[i] * noise[i];
  }
  const double target = std::sqrt(pr / (100.0 * pn));
  std::vector<double> est(ref.size());
  for (size_t i = 0; i < ref.size(); ++i)
    est[i] = ref[i] + target * noise[i];
  EXPECT_NEAR(si_snr(est, ref), 20.0, 1e-9);
}

TEST(SiSnr, ScaleInvariantToTheBit) {
  RngState rng(43);
  std::vector<double> ref(1024), est(1024);
  for (size_t i = 0; i < ref.size(); ++i) {
    ref[i] = rng.normal();
    est[i] = ref[i] + 0.1 * rng.normal();
  }
  const double base = si_snr(est, ref);
  for (const double alpha : {2.0, 0.5, 4.0}) {  // exact binary scalings
    auto scaled = est;
    for (auto& v : scaled) v *= alpha;
    EXPECT_DOUBLE_EQ(si_snr(scaled, ref), base);
  }
}

TEST(SiSnr, SignFlipAbsorbed) {
  RngState rng(47);
  std::vector<double> ref(512), est(512);
  for (size_t i = 0; i < ref.size(); ++i) {
    ref[i] = rng.normal();
    est[i] = ref[i] + 0.2 * rng.normal();
  }
  auto flipped = est;
  for (auto& v : flipped) v = -v;
  EXPECT_DOUBLE_EQ(si_snr(flipped, ref), si_snr(est, ref));
}

TEST(SiSnr, ConstantReferenceRejected) {
  std::vector<double> ref(100, 0.5), est(100, 0.1);
  EXPECT_THROW(si_snr(est, ref), MetricError);
}

TEST(Wav, Float32RoundTripIsBitwise) {
  RngState rng(53);
  Waveform<float> w;
  w.sample_rate = 22050;
  for (int i = 0; i < 777; ++i)
    w.samples.push_back(static_cast<float>(rng.uniform(-1, 1)));
  const std::string path = testing::TempDir() + "pf_rt.wav";
  write_wav(path, w, WavEncoding::kFloat32);
  auto r = read_wav<float>(path);
  EXPECT_EQ(r.sample_rate, 22050);
  ASSERT_EQ(r.samples.size(), w.samples.size());
  for (size_t i = 0; i < w.samples.size(); ++i)
    EXPECT_EQ(w.samples[i], r.samples[i]);
  std::remove(path.c_str());
}

TEST(Wav, Pcm16RoundTripWithinQuantum) {
  RngState rng(59);
  Waveform<double> w;
  w.sample_rate = 16000;
  for (int i = 0; i < 500; ++i) w.samples.push_back(rng.uniform(-0.99, 0.99));
  const std::string path = testing::TempDir() + "pf_pcm.wav";
  write_wav(path, w, WavEncoding::kPcm16);
  auto r = read_wav<double>(path);
  ASSERT_EQ(r.samples.size(), w.samples.size());
  for (size_t i = 0; i < w.samples.size(); ++i)
    EXPECT_NEAR(r.samples[i], w.samples[i], 1.0 / 32768.0);
  std::remove(path.c_str());
}

TEST(Wav, StereoAveragedToMono) {
  // Hand-built two-channel PCM16 file: channels hold +0.25 and -0.25
  // scaled; the reader must average them.
  std::vector<uint8_t> bytes;
  auto u16 = [&](uint16_t v) {
    bytes.push_back(v & 0xff);
    bytes.push_back(v >> 8);
  };
  auto u32 = [&](uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes.push_back((v >> (8 * i)) & 0xff);
  };
  const int frames = 10;
  bytes.insert(bytes.end(), {'R', 'I', 'F', 'F'});
  u32(36 + frames * 4);
  bytes.insert(bytes.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  u32(16);
  u16(1);      // PCM
  u16(2);      // stereo
  u32(8000);
  u32(8000 * 4);
  u16(4);
  u16(16);
  bytes.insert(bytes.end(), {'d', 'a', 't', 'a'});
  u32(frames * 4);
  for (int i = 0; i < frames; ++i) {
    u16(static_cast<uint16_t>(static_cast<int16_t>(8192)));    // +0.25
    u16(static_cast<uint16_t>(static_cast<int16_t>(-8192)));   // -0.25
  }
  const std::string path = testing::TempDir() + "pf_st.wav";
  std::ofstream os(path, std::ios::binary);
  os.write(reinterpret_cast<const char*>(bytes.data()),
           static_cast<std::streamsize>(bytes.size()));
  os.close();
  auto r = read_wav<double>(path);
  ASSERT_EQ(r.samples.size(), static_cast<size_t>(frames));
  for (double v : r.samples) EXPECT_NEAR(v, 0.0, 1e-12);
  std::remove(path.c_str());
}

TEST(Wav, GarbageRejected) {
  const std::string path = testing::TempDir() + "pf_bad.wav";
  std::ofstream os(path, std::ios::binary);
  os << "this is not audio";
  os.close();
  EXPECT_THROW(read_wav<double>(path), FormatError);
  std::remove(path.c_str());
  EXPECT_THROW(read_wav<double>(testing::TempDir() + "pf_missing.wav"),
               IoError);
}

TEST(FloatBuild, MelPipelineRunsInSinglePrecision) {
  DspConfig cfg;
  Waveform<float> w;
  w.sample_rate = 22050;
  for (int i = 0; i < 3000; ++i)
    w.samples.push_back(
        static_cast<float>(0.4 * std::sin(2.0 * M_PI * 200.0 * i / 22050)));
  auto mel = mel_spectrogram(w, cfg);
  auto f0 = extract_pitch(w, cfg);
  auto en = extract_energy(w, cfg);
  EXPECT_EQ(mel.rows(), static_cast<index_t>(f0.size()));
  EXPECT_EQ(f0.size(), en.size());
  mel.require_finite("float mel");
}

}  // namespace
}  // namespace prosofuse

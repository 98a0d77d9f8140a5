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

#ifndef PROSOFUSE_DSP_STFT_HPP_
#define PROSOFUSE_DSP_STFT_HPP_

#include <cmath>
#include <vector>

#include "prosofuse/common.hpp"
#include "prosofuse/dsp/config.hpp"
#include "prosofuse/dsp/fft.hpp"
#include "prosofuse/matrix.hpp"

namespace prosofuse {

// Reflect-101 index mapping: coordinates outside [0, len) bounce off the
// boundaries without repeating the edge sample.
inline index_t reflect_index(index_t i, index_t len) {
  if (len == 1) return 0;
  const index_t period = 2 * (len - 1);
  i = ((i % period) + period) % period;
  return i < len ? i : period - i;
}

// Periodic Hann window of length n.
inline std::vector<double> hann_window(int n) {
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i)
    w[i] = 0.5 * (1.0 - std::cos(2.0 * M_PI * i / n));
  return w;
}

inline index_t frame_count(index_t samples, const DspConfig& cfg) {
  return samples / cfg.hop + 1;
}

// One-sided STFT magnitudes, frames x (n_fft/2 + 1). Frame t is centered on
// sample t*hop of the reflect-padded signal.
template <typename Real>
Mat<Real> stft_magnitude(const Waveform<Real>& w, const DspConfig& cfg) {
  cfg.validate();
  w.require_valid("stft");
  if (w.sample_rate != cfg.sample_rate)
    throw SignalError("stft: waveform rate does not match config");
  const index_t len = w.size();
  if (len < cfg.hop) throw SignalError("stft: signal shorter than one hop");

  const index_t frames = frame_count(len, cfg);
  const index_t bins = cfg.n_fft / 2 + 1;
  const auto window = hann_window(cfg.n_fft);
  const index_t half = cfg.n_fft / 2;

  Mat<Real> out(frames, bins);
  std::vector<double> block(cfg.n_fft);
  for (index_t t = 0; t < frames; ++t) {
    const index_t start = t * cfg.hop - half;
    for (index_t j = 0; j < cfg.n_fft; ++j) {
      const index_t src = reflect_index(start + j, len);
      block[j] = static_cast<double>(w.samples[src]) * window[j];
    }
    const auto mag = magnitude_spectrum(block);
    for (index_t k = 0; k < bins; ++k) out(t, k) = static_cast<Real>(mag[k]);
  }
  return out;
}

// Triangular HTK-mel filterbank, mel_bins x (n_fft/2 + 1), peak weight 1.
template <typename Real>
Mat<Real> mel_filterbank(const DspConfig& cfg) {
  cfg.validate();
  const auto hz_to_mel = [](double hz) {
    return 2595.0 * std::log10(1.0 + hz / 700.0);
  };
  const auto mel_to_hz = [](double mel) {
    return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
  };

  const int bins = cfg.n_fft / 2 + 1;
  const double mel_lo = hz_to_mel(cfg.fmin);
  const double mel_hi = hz_to_mel(cfg.fmax);
  std::vector<double> edges(cfg.mel_bins + 2);
  for (int m = 0; m < cfg.mel_bins + 2; ++m)
    edges[m] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * m / (cfg.mel_bins + 1));

  Mat<Real> fb(cfg.mel_bins, bins);
  for (int m = 0; m < cfg.mel_bins; ++m) {
    const double lo = edges[m], center = edges[m + 1], hi = edges[m + 2];
    for (int k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * cfg.sample_rate / cfg.n_fft;
      double wgt = 0.0;
      if (f > lo && f < hi)
        wgt = f <= center ? (f - lo) / (center - lo) : (hi - f) / (hi - center);
      fb(m, k) = static_cast<Real>(wgt);
    }
  }
  return fb;
}

// Center frequencies (Hz) of the mel filters, for peak-location checks.
inline std::vector<double> mel_center_frequencies(const DspConfig& cfg) {
  const auto hz_to_mel = [](double hz) {
    return 2595.0 * std::log10(1.0 + hz / 700.0);
  };
  const auto mel_to_hz = [](double mel) {
    return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
  };
  const double mel_lo = hz_to_mel(cfg.fmin);
  const double mel_hi = hz_to_mel(cfg.fmax);
  std::vector<double> centers(cfg.mel_bins);
  for (int m = 0; m < cfg.mel_bins; ++m)
    centers[m] =
        mel_to_hz(mel_lo + (mel_hi - mel_lo) * (m + 1) / (cfg.mel_bins + 1));
  return centers;
}

// Log-mel spectrogram, frames x mel_bins, natural log with the configured
// floor applied before the log.
template <typename Real>
Mat<Real> mel_spectrogram(const Waveform<Real>& w, const DspConfig& cfg) {
  const auto mag = stft_magnitude(w, cfg);
  const auto fb = mel_filterbank<Real>(cfg);
  auto mel = matmul_nt(mag, fb);  // frames x mel_bins
  const Real floor = static_cast<Real>(cfg.log_floor);
  for (index_t i = 0; i < mel.size(); ++i)
    mel.data()[i] = std::log(std::max(mel.data()[i], floor));
  return mel;
}

// Per-frame energy: L2 norm of the one-sided STFT magnitude frame.
template <typename Real>
std::vector<Real> extract_energy(const Waveform<Real>& w,
                                 const DspConfig& cfg) {
  const auto mag = stft_magnitude(w, cfg);
  std::vector<Real> energy(mag.rows());
  for (index_t t = 0; t < mag.rows(); ++t) {
    double acc = 0.0;
    for (index_t k = 0; k < mag.cols(); ++k) {
      const double v = static_cast<double>(mag(t, k));
      acc += v * v;
    }
    energy[t] = static_cast<Real>(std::sqrt(acc));
  }
  return energy;
}

}  // namespace prosofuse

#endif  // PROSOFUSE_DSP_STFT_HPP_

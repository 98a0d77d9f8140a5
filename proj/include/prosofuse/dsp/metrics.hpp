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

#ifndef PROSOFUSE_DSP_METRICS_HPP_
#define PROSOFUSE_DSP_METRICS_HPP_

#include <cmath>
#include <limits>
#include <vector>

#include "prosofuse/common.hpp"
#include "prosofuse/dsp/config.hpp"
#include "prosofuse/matrix.hpp"

namespace prosofuse {

namespace metrics_detail {

// Orthonormal DCT-II of each row, keeping coefficients 1..n_keep.
template <typename Real>
Mat<double> cepstra(const Mat<Real>& logmel, int n_keep) {
  const index_t frames = logmel.rows();
  const index_t bins = logmel.cols();
  Mat<double> out(frames, n_keep);
  const double s = std::sqrt(2.0 / bins);
  for (index_t t = 0; t < frames; ++t) {
    for (int k = 1; k <= n_keep; ++k) {
      double acc = 0.0;
      for (index_t n = 0; n < bins; ++n)
        acc += static_cast<double>(logmel(t, n)) *
               std::cos(M_PI * (n + 0.5) * k / bins);
      out(t, k - 1) = s * acc;
    }
  }
  return out;
}

inline double frame_distance(const Mat<double>& a, index_t i,
                             const Mat<double>& b, index_t j) {
  double acc = 0.0;
  for (index_t d = 0; d < a.cols(); ++d) {
    const double diff = a(i, d) - b(j, d);
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

}  // namespace metrics_detail

// Mel-cepstral distortion in dB between two log-mel spectrograms. Cepstra
// c_1..c_13 (orthonormal DCT-II per frame), frames aligned by DTW with the
// symmetric step, value averaged over the backtracked path.
template <typename Real>
double mcd(const Mat<Real>& a, const Mat<Real>& b) {
  if (a.rows() == 0 || b.rows() == 0)
    throw SignalError("mcd: empty spectrogram");
  if (a.cols() != b.cols())
    throw DimensionError("mcd: mel bin counts differ");
  constexpr int kCoeffs = 13;
  const auto ca = metrics_detail::cepstra(a, kCoeffs);
  const auto cb = metrics_detail::cepstra(b, kCoeffs);

  const index_t n = ca.rows(), m = cb.rows();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  Mat<double> dist(n, m), acc(n, m);
  for (index_t i = 0; i < n; ++i)
    for (index_t j = 0; j < m; ++j)
      dist(i, j) = metrics_detail::frame_distance(ca, i, cb, j);

  for (index_t i = 0; i < n; ++i) {
    for (index_t j = 0; j < m; ++j) {
      double best = 0.0;
      if (i > 0 || j > 0) {
        best = kInf;
        if (i > 0 && j > 0) best = std::min(best, acc(i - 1, j - 1));
        if (i > 0) best = std::min(best, acc(i - 1, j));
        if (j > 0) best = std::min(best, acc(i, j - 1));
      }
      acc(i, j) = dist(i, j) + best;
    }
  }

  // Backtrack, preferring the diagonal on ties.
  const double k_db = 10.0 * std::sqrt(2.0) / std::log(10.0);
  double total = 0.0;
  index_t steps = 0, i = n - 1, j = m - 1;
  while (true) {
    total += k_db * dist(i, j);
    ++steps;
    if (i == 0 && j == 0) break;
    if (i > 0 && j > 0) {
      const double diag = acc(i - 1, j - 1);
      const double up = acc(i - 1, j);
      const double left = acc(i, j - 1);
      if (diag <= up && diag <= left) {
        --i; --j;
      } else if (up <= left) {
        --i;
      } else {
        --j;
      }
    } else if (i > 0) {
      --i;
    } else {
      --j;
    }
  }
  return total / steps;
}

// RMSE of natural-log f0 over frames voiced in both contours.
template <typename Real>
double log_f0_rmse(const std::vector<Real>& a, const std::vector<Real>& b) {
  if (a.size() != b.size())
    throw DimensionError("log_f0_rmse: contour lengths differ");
  double acc = 0.0;
  index_t count = 0;
  for (size_t t = 0; t < a.size(); ++t) {
    if (a[t] > Real(0) && b[t] > Real(0)) {
      const double d = std::log(static_cast<double>(a[t])) -
                       std::log(static_cast<double>(b[t]));
      acc += d * d;
      ++count;
    }
  }
  if (count == 0)
    throw MetricError("log_f0_rmse: no frame voiced in both contours");
  return std::sqrt(acc / count);
}

// Scale-invariant signal-to-noise ratio in dB. Both signals are zero-meaned,
// the estimate is projected onto the reference, and the ratio of projected
// power to residual power is reported. Accumulation runs in double.
template <typename Real>
double si_snr(const std::vector<Real>& est, const std::vector<Real>& ref) {
  if (est.size() != ref.size())
    throw DimensionError("si_snr: signal lengths differ");
  if (est.empty()) throw MetricError("si_snr: empty signals");
  const size_t n = est.size();

  double mean_e = 0.0, mean_r = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mean_e += static_cast<double>(est[i]);
    mean_r += static_cast<double>(ref[i]);
  }
  mean_e /= n;
  mean_r /= n;

  double dot_er = 0.0, dot_rr = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double e = static_cast<double>(est[i]) - mean_e;
    const double r = static_cast<double>(ref[i]) - mean_r;
    dot_er += e * r;
    dot_rr += r * r;
  }
  if (dot_rr == 0.0) throw MetricError("si_snr: reference is constant");

  const double alpha = dot_er / dot_rr;
  double p_target = 0.0, p_resid = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double e = static_cast<double>(est[i]) - mean_e;
    const double r = static_cast<double>(ref[i]) - mean_r;
    const double t = alpha * r;
    p_target += t * t;
    const double d = e - t;
    p_resid += d * d;
  }
  return 10.0 * std::log10(p_target / p_resid);
}

}  // namespace prosofuse

#endif  // PROSOFUSE_DSP_METRICS_HPP_

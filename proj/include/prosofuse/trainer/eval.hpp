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

#ifndef PROSOFUSE_TRAINER_EVAL_HPP_
#define PROSOFUSE_TRAINER_EVAL_HPP_

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "prosofuse/common.hpp"
#include "prosofuse/dsp/metrics.hpp"
#include "prosofuse/model/adaptor.hpp"
#include "prosofuse/model/ffnn.hpp"
#include "prosofuse/model/tts.hpp"
#include "prosofuse/trainer/config.hpp"
#include "prosofuse/trainer/dataset.hpp"

namespace prosofuse {

namespace trainer_detail {

template <typename Real>
double mat_mse(const Mat<Real>& pred, const Mat<Real>& target) {
  if (!pred.same_shape(target))
    throw DimensionError("mse: prediction and target shapes differ");
  double acc = 0.0;
  for (index_t i = 0; i < pred.size(); ++i) {
    const double d = static_cast<double>(pred.data()[i]) -
                     static_cast<double>(target.data()[i]);
    acc += d * d;
  }
  return acc / static_cast<double>(pred.size());
}

// d/dpred of mat_mse, times an external scale (1/batch for batch means).
template <typename Real>
Mat<Real> mat_mse_grad(const Mat<Real>& pred, const Mat<Real>& target,
                       double scale) {
  Mat<Real> g(pred.rows(), pred.cols());
  const double k = 2.0 * scale / static_cast<double>(pred.size());
  for (index_t i = 0; i < pred.size(); ++i) {
    g.data()[i] = static_cast<Real>(k * (static_cast<double>(pred.data()[i]) -
                                         static_cast<double>(target.data()[i])));
  }
  return g;
}

template <typename Real>
std::vector<Real> col_to_vector(const Mat<Real>& m) {
  std::vector<Real> v(static_cast<std::size_t>(m.rows()));
  for (index_t i = 0; i < m.rows(); ++i) v[static_cast<std::size_t>(i)] = m(i, 0);
  return v;
}

}  // namespace trainer_detail

// MSE of the predictor that always answers a sequence's own mean: averaged
// over sequences this is the mean per-sequence population variance. Empty
// sequences are skipped with a warning to `warn` when given.
inline double mean_baseline(const std::vector<std::vector<double>>& seqs,
                            std::ostream* warn = nullptr) {
  double acc = 0.0;
  index_t used = 0;
  for (const auto& s : seqs) {
    if (s.empty()) {
      if (warn) *warn << "mean_baseline: skipping empty sequence\n";
      continue;
    }
    double mean = 0.0;
    for (const double x : s) mean += x;
    mean /= static_cast<double>(s.size());
    double var = 0.0;
    for (const double x : s) var += (x - mean) * (x - mean);
    acc += var / static_cast<double>(s.size());
    ++used;
  }
  if (used == 0) throw MetricError("mean_baseline: no nonempty sequences");
  return acc / static_cast<double>(used);
}

enum class BaselineTarget { kPitch, kEnergy, kLogDuration };

// Phone-level contours of a split as baseline sequences.
inline std::vector<std::vector<double>> baseline_sequences(
    const Manifest& m, const std::string& split, BaselineTarget target) {
  std::vector<std::vector<double>> seqs;
  for (const UtteranceRecord* r : m.split_view(split)) {
    std::vector<double> s;
    switch (target) {
      case BaselineTarget::kPitch:
        s = r->pitch;
        break;
      case BaselineTarget::kEnergy:
        s = r->energy;
        break;
      case BaselineTarget::kLogDuration:
        s.reserve(r->durations.size());
        for (const index_t d : r->durations)
          s.push_back(std::log(static_cast<double>(d)));
        break;
    }
    seqs.push_back(std::move(s));
  }
  return seqs;
}

// Baseline over the chunk-averaged regressor targets (column 0 pitch,
// column 1 energy), the sequences the regressor itself is scored on.
template <typename Real>
std::vector<std::vector<double>> baseline_sequences(
    const std::vector<FfnnExample<Real>>& examples, index_t col) {
  std::vector<std::vector<double>> seqs;
  for (const auto& ex : examples) {
    std::vector<double> s(static_cast<std::size_t>(ex.target.rows()));
    for (index_t i = 0; i < ex.target.rows(); ++i)
      s[static_cast<std::size_t>(i)] = static_cast<double>(ex.target(i, col));
    seqs.push_back(std::move(s));
  }
  return seqs;
}

// Per-frame MSE of the regressor over a split, one report column per
// target, averaged over utterances.
template <typename Real>
EvalReport evaluate_ffnn(Ffnn<Real>& model,
                         const std::vector<FfnnExample<Real>>& examples,
                         std::int64_t step = 0) {
  if (examples.empty()) throw ArgumentError("evaluate_ffnn: empty split");
  EvalReport rep;
  rep.variant = "ffnn";
  rep.step = step;
  for (const auto& ex : examples) {
    RngState rng = RngState::derive(0, 0);  // eval mode draws nothing
    const auto out = model.forward(ex.visual, rng, false);
    double p = 0.0, e = 0.0;
    for (index_t i = 0; i < out.rows(); ++i) {
      const double dp = static_cast<double>(out(i, 0)) -
                        static_cast<double>(ex.target(i, 0));
      const double de = static_cast<double>(out(i, 1)) -
                        static_cast<double>(ex.target(i, 1));
      p += dp * dp;
      e += de * de;
    }
    rep.pitch_mse += p / static_cast<double>(out.rows());
    rep.energy_mse += e / static_cast<double>(out.rows());
    ++rep.utterances;
  }
  rep.pitch_mse /= static_cast<double>(rep.utterances);
  rep.energy_mse /= static_cast<double>(rep.utterances);
  rep.validate();
  return rep;
}

// Phone-level prediction MSEs in the units the targets carry (normalized
// after the prep pipeline, raw for synthetic corpora). Duration MSE is in
// the log domain, matching the training loss. Dropout is off; nothing here
// depends on frame expansion, so no durations are applied.
template <typename Real>
EvalReport evaluate_ped(TtsModel<Real>& model,
                        const std::vector<SeqExample<Real>>& examples,
                        std::int64_t step = 0) {
  if (examples.empty()) throw ArgumentError("evaluate_ped: empty split");
  EvalReport rep;
  rep.variant = variant_name(model.config().variant);
  rep.step = step;
  for (const auto& ex : examples) {
    RngState rng = RngState::derive(0, 0);
    const Mat<Real>* vis = ex.visual.size() > 0 ? &ex.visual : nullptr;
    const auto ped = model.run_ped(ex.phones, vis, rng, false);
    rep.pitch_mse += trainer_detail::mat_mse(ped.pitch, ex.pitch_t);
    rep.energy_mse += trainer_detail::mat_mse(ped.energy, ex.energy_t);
    rep.duration_mse += trainer_detail::mat_mse(ped.log_duration, ex.logdur_t);
    ++rep.utterances;
  }
  rep.pitch_mse /= static_cast<double>(rep.utterances);
  rep.energy_mse /= static_cast<double>(rep.utterances);
  rep.duration_mse /= static_cast<double>(rep.utterances);
  rep.validate();
  return rep;
}

// Full synthesis evaluation. MCD runs against the ground-truth mel through
// the alignment path, so predicted-duration length drift is fine. The
// log-F0 comparison needs frame-aligned contours, which only gt_ped
// guarantees; outside that mode it is reported as skipped. Utterances whose
// contours share no positive frames (unvoiced or non-Hz units) are skipped
// too, and the report says so when none were usable.
template <typename Real>
EvalReport evaluate_tts(TtsModel<Real>& model,
                        const std::vector<SeqExample<Real>>& examples,
                        bool gt_ped, std::int64_t step = 0) {
  if (examples.empty()) throw ArgumentError("evaluate_tts: empty split");
  EvalReport rep;
  rep.variant = variant_name(model.config().variant);
  rep.gt_ped = gt_ped;
  rep.step = step;
  index_t with_mel = 0;
  index_t voiced = 0;
  double f0_acc = 0.0;
  for (const auto& ex : examples) {
    RngState rng = RngState::derive(0, 0);
    const Mat<Real>* vis = ex.visual.size() > 0 ? &ex.visual : nullptr;
    auto fwd = model.run_tts(ex.phones, vis, &ex.targets, rng, false, gt_ped);
    rep.pitch_mse += trainer_detail::mat_mse(fwd.ped.pitch, ex.pitch_t);
    rep.energy_mse += trainer_detail::mat_mse(fwd.ped.energy, ex.energy_t);
    rep.duration_mse +=
        trainer_detail::mat_mse(fwd.ped.log_duration, ex.logdur_t);
    if (ex.mel.size() > 0) {
      rep.mcd += mcd(fwd.mel, ex.mel);
      ++with_mel;
    }
    if (gt_ped) {
      const auto pred = trainer_detail::col_to_vector(
          length_regulate(fwd.ped.pitch, fwd.ped.durations));
      const auto ref = trainer_detail::col_to_vector(
          length_regulate(ex.pitch_t, ex.targets.durations));
      try {
        f0_acc += log_f0_rmse(pred, ref);
        ++voiced;
      } catch (const MetricError&) {
        // no positive pair in this utterance; skip it
      }
    }
    ++rep.utterances;
  }
  rep.pitch_mse /= static_cast<double>(rep.utterances);
  rep.energy_mse /= static_cast<double>(rep.utterances);
  rep.duration_mse /= static_cast<double>(rep.utterances);
  if (with_mel > 0) {
    rep.mcd /= static_cast<double>(with_mel);
    rep.has_mcd = true;
  }
  if (!gt_ped) {
    rep.log_f0_skip_reason = "predicted durations: contours not frame-aligned";
  } else if (voiced == 0) {
    rep.log_f0_skip_reason = "no utterance with positive pitch in both contours";
  } else {
    rep.log_f0_rmse = f0_acc / static_cast<double>(voiced);
    rep.has_log_f0 = true;
  }
  rep.validate();
  return rep;
}

}  // namespace prosofuse

#endif  // PROSOFUSE_TRAINER_EVAL_HPP_

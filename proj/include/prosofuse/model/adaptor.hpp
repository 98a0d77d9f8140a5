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

#ifndef PROSOFUSE_MODEL_ADAPTOR_HPP_
#define PROSOFUSE_MODEL_ADAPTOR_HPP_

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "prosofuse/common.hpp"
#include "prosofuse/layers.hpp"
#include "prosofuse/matrix.hpp"
#include "prosofuse/model/config.hpp"

namespace prosofuse {

// Phone-level predictions of the variance adaptor. pitch/energy/log_duration
// are column vectors over phone positions; durations holds the frame counts
// the length regulator actually used.
template <typename Real>
struct PedPrediction {
  Mat<Real> pitch;
  Mat<Real> energy;
  Mat<Real> log_duration;
  std::vector<index_t> durations;
};

// Ground-truth phone-level targets for teacher forcing and losses.
template <typename Real>
struct PedTargets {
  std::vector<Real> pitch;
  std::vector<Real> energy;
  std::vector<index_t> durations;
};

// One variance predictor: [conv1d(k) -> ReLU -> LayerNorm -> dropout] x2
// followed by a linear projection to one value per phone position.
template <typename Real>
class VariancePredictor {
 public:
  VariancePredictor(const ModelConfig& cfg, RngState& rng)
      : conv1_(cfg.d_model, cfg.predictor_hidden, cfg.predictor_kernel, rng),
        ln1_(cfg.predictor_hidden),
        drop1_(cfg.predictor_dropout),
        conv2_(cfg.predictor_hidden, cfg.predictor_hidden, cfg.predictor_kernel,
               rng),
        ln2_(cfg.predictor_hidden),
        drop2_(cfg.predictor_dropout),
        out_(cfg.predictor_hidden, 1, rng) {}

  Mat<Real> forward(const Mat<Real>& h, RngState& rng, bool training) {
    auto a = drop1_.forward(ln1_.forward(relu1_.forward(conv1_.forward(h))),
                            rng, training);
    auto b = drop2_.forward(ln2_.forward(relu2_.forward(conv2_.forward(a))),
                            rng, training);
    return out_.forward(b);
  }

  Mat<Real> backward(const Mat<Real>& d_out) {
    auto d_b = out_.backward(d_out);
    auto d_a = conv2_.backward(
        relu2_.backward(ln2_.backward(drop2_.backward(d_b))));
    return conv1_.backward(
        relu1_.backward(ln1_.backward(drop1_.backward(d_a))));
  }

  void collect(const std::string& prefix, ParamRefs<Real>& out) {
    conv1_.collect(prefix + ".conv1", out);
    ln1_.collect(prefix + ".ln1", out);
    conv2_.collect(prefix + ".conv2", out);
    ln2_.collect(prefix + ".ln2", out);
    out_.collect(prefix + ".out", out);
  }

 private:
  Conv1d<Real> conv1_;
  Relu<Real> relu1_;
  LayerNorm<Real> ln1_;
  Dropout<Real> drop1_;
  Conv1d<Real> conv2_;
  Relu<Real> relu2_;
  LayerNorm<Real> ln2_;
  Dropout<Real> drop2_;
  Linear<Real> out_;
};

// Repeats row i of h durations[i] times. Output rows = sum of durations.
template <typename Real>
Mat<Real> length_regulate(const Mat<Real>& h,
                          const std::vector<index_t>& durations) {
  if (static_cast<index_t>(durations.size()) != h.rows()) {
    throw DimensionError("length_regulate: one duration per phone required");
  }
  index_t total = 0;
  for (index_t d : durations) {
    if (d < 1) throw DimensionError("length_regulate: duration < 1");
    total += d;
  }
  Mat<Real> out(total, h.cols());
  index_t row = 0;
  for (index_t i = 0; i < h.rows(); ++i) {
    for (index_t r = 0; r < durations[static_cast<size_t>(i)]; ++r, ++row) {
      for (index_t j = 0; j < h.cols(); ++j) out(row, j) = h(i, j);
    }
  }
  return out;
}

// Adjoint of length_regulate: frame gradients sum back over each span.
template <typename Real>
Mat<Real> length_regulate_backward(const Mat<Real>& d_frames, index_t phones,
                                   const std::vector<index_t>& durations) {
  Mat<Real> d_h(phones, d_frames.cols());
  index_t row = 0;
  for (index_t i = 0; i < phones; ++i) {
    for (index_t r = 0; r < durations[static_cast<size_t>(i)]; ++r, ++row) {
      for (index_t j = 0; j < d_frames.cols(); ++j) {
        d_h(i, j) += d_frames(row, j);
      }
    }
  }
  if (row != d_frames.rows()) {
    throw DimensionError("length_regulate_backward: span total mismatch");
  }
  return d_h;
}

// Variance adaptor. Pitch, energy and duration predictors all read the same
// phone-level hidden sequence. Pitch and energy predictions are quantized to
// the configured bins over [-4, 4] and looked up in embedding tables that are
// added back to h; quantization carries no gradient, so the predictors learn
// from their regression losses alone. Length regulation teacher-forces target
// durations in training mode and otherwise uses round(exp(pred)) clamped to
// at least one frame. gt_ped substitutes ground-truth pitch/energy for the
// embedding lookups (the predicted values are still reported).
template <typename Real>
class VarianceAdaptor {
 public:
  VarianceAdaptor(const ModelConfig& cfg, RngState& rng)
      : bins_(cfg.quant_bins),
        pitch_pred_(cfg, rng),
        energy_pred_(cfg, rng),
        dur_pred_(cfg, rng),
        pitch_emb_(cfg.quant_bins, cfg.d_model, rng),
        energy_emb_(cfg.quant_bins, cfg.d_model, rng) {}

  // Runs the three predictors only. Enough for the standalone PED studies;
  // the embedding and length-regulation stages are skipped.
  PedPrediction<Real> predict_ped(const Mat<Real>& h, RngState& rng,
                                  bool training) {
    PedPrediction<Real> ped;
    ped.pitch = pitch_pred_.forward(h, rng, training);
    ped.energy = energy_pred_.forward(h, rng, training);
    ped.log_duration = dur_pred_.forward(h, rng, training);
    phones_ = h.rows();
    return ped;
  }

  std::pair<PedPrediction<Real>, Mat<Real>> forward(
      const Mat<Real>& h, const PedTargets<Real>* targets, RngState& rng,
      bool training, bool gt_ped = false) {
    if ((training || gt_ped) && targets == nullptr) {
      throw UsageError("variance_adaptor: mode requires targets");
    }
    PedPrediction<Real> ped = predict_ped(h, rng, training);

    const index_t n = h.rows();
    pitch_bins_.resize(static_cast<size_t>(n));
    energy_bins_.resize(static_cast<size_t>(n));
    for (index_t i = 0; i < n; ++i) {
      const Real pv = gt_ped ? targets->pitch[static_cast<size_t>(i)]
                             : ped.pitch(i, 0);
      const Real ev = gt_ped ? targets->energy[static_cast<size_t>(i)]
                             : ped.energy(i, 0);
      pitch_bins_[static_cast<size_t>(i)] =
          quantize_bin(static_cast<double>(pv), bins_);
      energy_bins_[static_cast<size_t>(i)] =
          quantize_bin(static_cast<double>(ev), bins_);
    }
    auto h2 = add(h, pitch_emb_.forward(pitch_bins_));
    add_inplace(h2, energy_emb_.forward(energy_bins_));

    if (training || gt_ped) {
      ped.durations = targets->durations;
    } else {
      ped.durations.resize(static_cast<size_t>(n));
      for (index_t i = 0; i < n; ++i) {
        const double frames = std::round(
            std::exp(static_cast<double>(ped.log_duration(i, 0))));
        ped.durations[static_cast<size_t>(i)] =
            std::max<index_t>(1, static_cast<index_t>(frames));
      }
    }
    durations_ = ped.durations;
    auto frames = length_regulate(h2, ped.durations);
    return {std::move(ped), std::move(frames)};
  }

  // d_frames comes from the decoder path, d_pitch/d_energy/d_logdur from the
  // regression losses. Any of the four may be empty (0x0) when that branch is
  // detached; at least one must be present.
  Mat<Real> backward(const Mat<Real>& d_frames, const Mat<Real>& d_pitch,
                     const Mat<Real>& d_energy, const Mat<Real>& d_logdur) {
    Mat<Real> d_h;
    auto acc = [&d_h](Mat<Real> g) {
      if (d_h.rows() == 0) {
        d_h = std::move(g);
      } else {
        add_inplace(d_h, g);
      }
    };
    if (d_frames.rows() > 0) {
      auto d_h2 = length_regulate_backward(d_frames, phones_, durations_);
      pitch_emb_.backward(d_h2);
      energy_emb_.backward(d_h2);
      acc(std::move(d_h2));
    }
    if (d_pitch.rows() > 0) acc(pitch_pred_.backward(d_pitch));
    if (d_energy.rows() > 0) acc(energy_pred_.backward(d_energy));
    if (d_logdur.rows() > 0) acc(dur_pred_.backward(d_logdur));
    if (d_h.rows() == 0) {
      throw UsageError("variance_adaptor: backward with no gradients");
    }
    return d_h;
  }

  void collect(const std::string& prefix, ParamRefs<Real>& out) {
    pitch_pred_.collect(prefix + ".pitch", out);
    energy_pred_.collect(prefix + ".energy", out);
    dur_pred_.collect(prefix + ".duration", out);
    pitch_emb_.collect(prefix + ".pitch_emb", out);
    energy_emb_.collect(prefix + ".energy_emb", out);
  }

 private:
  index_t bins_;
  VariancePredictor<Real> pitch_pred_;
  VariancePredictor<Real> energy_pred_;
  VariancePredictor<Real> dur_pred_;
  Embedding<Real> pitch_emb_;
  Embedding<Real> energy_emb_;
  std::vector<index_t> pitch_bins_;
  std::vector<index_t> energy_bins_;
  std::vector<index_t> durations_;
  index_t phones_ = 0;
};

}  // namespace prosofuse

#endif  // PROSOFUSE_MODEL_ADAPTOR_HPP_

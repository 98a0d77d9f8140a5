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

#ifndef PROSOFUSE_MODEL_TTS_HPP_
#define PROSOFUSE_MODEL_TTS_HPP_

#include <memory>
#include <utility>
#include <vector>

#include "prosofuse/common.hpp"
#include "prosofuse/layers.hpp"
#include "prosofuse/matrix.hpp"
#include "prosofuse/model/adaptor.hpp"
#include "prosofuse/model/config.hpp"
#include "prosofuse/model/decoder.hpp"
#include "prosofuse/model/encoder.hpp"
#include "prosofuse/model/fusion.hpp"
#include "prosofuse/rng.hpp"

namespace prosofuse {

// The full synthesis model. Allocation follows the variant: the text-only
// variant has no visual branch at all, the pooling variant adds the visual
// encoder but fuses without parameters, and the cross-attention variant owns
// the fusion block as well. The fused sequence H feeds both the variance
// adaptor and (length-regulated) the decoder.
//
// Parameter registration order is fixed by construction and collect() order;
// optimizer state and checkpoints rely on it.
template <typename Real>
class TtsModel {
 public:
  TtsModel(const ModelConfig& cfg, uint64_t seed) : cfg_(cfg) {
    cfg_.validate();
    RngState rng = RngState::derive(seed, 0xB00);
    text_enc_ = std::make_unique<TextEncoder<Real>>(cfg_, rng);
    if (cfg_.variant != Variant::kTextOnly) {
      vis_enc_ = std::make_unique<VisualEncoder<Real>>(cfg_, rng);
    }
    if (cfg_.variant == Variant::kCrossAttnFusion) {
      fusion_ = std::make_unique<FusionBlock<Real>>(cfg_, rng);
    }
    adaptor_ = std::make_unique<VarianceAdaptor<Real>>(cfg_, rng);
    decoder_ = std::make_unique<MelDecoder<Real>>(cfg_, rng);
  }

  const ModelConfig& config() const { return cfg_; }

  ParamRefs<Real> params() {
    ParamRefs<Real> refs;
    text_enc_->collect("text_enc", refs);
    if (vis_enc_) vis_enc_->collect("vis_enc", refs);
    if (fusion_) fusion_->collect("fusion", refs);
    adaptor_->collect("adaptor", refs);
    decoder_->collect("decoder", refs);
    return refs;
  }

  void zero_grads() {
    for (auto& [name, p] : params()) p->zero_grad();
  }

  // Encodes phones (and, for fusion variants, visual frames) into the
  // phone-level hidden sequence H. The text-only variant never touches the
  // visual argument.
  Mat<Real> encode(const std::vector<index_t>& phones, const Mat<Real>* visual,
                   RngState& rng, bool training) {
    auto t = text_enc_->forward(phones, rng, training);
    if (cfg_.variant == Variant::kTextOnly) return t;
    if (visual == nullptr || visual->rows() < 1) {
      throw UsageError("encode: fusion variant requires visual features");
    }
    auto v = vis_enc_->forward(*visual, rng, training);
    if (cfg_.variant == Variant::kPoolFusion) return pool_.forward(t, v);
    return fusion_->forward(t, v, rng, training);
  }

  void encode_backward(const Mat<Real>& d_h) {
    if (cfg_.variant == Variant::kTextOnly) {
      text_enc_->backward(d_h);
      return;
    }
    Mat<Real> d_t, d_v;
    if (cfg_.variant == Variant::kPoolFusion) {
      std::tie(d_t, d_v) = pool_.backward(d_h);
    } else {
      std::tie(d_t, d_v) = fusion_->backward(d_h);
    }
    vis_enc_->backward(d_v);
    text_enc_->backward(d_t);
  }

  // Encoder + predictors only, for the standalone PED experiments. The
  // decoder and the embedding/length-regulation stages stay untouched, so
  // backward_ped trains exactly encoder, fusion and predictor weights.
  PedPrediction<Real> run_ped(const std::vector<index_t>& phones,
                              const Mat<Real>* visual, RngState& rng,
                              bool training) {
    auto h = encode(phones, visual, rng, training);
    return adaptor_->predict_ped(h, rng, training);
  }

  void backward_ped(const Mat<Real>& d_pitch, const Mat<Real>& d_energy,
                    const Mat<Real>& d_logdur) {
    Mat<Real> none;
    encode_backward(adaptor_->backward(none, d_pitch, d_energy, d_logdur));
  }

  struct TtsForward {
    PedPrediction<Real> ped;
    Mat<Real> mel;
  };

  // Full pass to mel frames. Training teacher-forces target durations;
  // gt_ped additionally swaps ground-truth pitch/energy into the embedding
  // stage (inference with oracle prosody).
  TtsForward run_tts(const std::vector<index_t>& phones,
                     const Mat<Real>* visual, const PedTargets<Real>* targets,
                     RngState& rng, bool training, bool gt_ped = false) {
    auto h = encode(phones, visual, rng, training);
    auto [ped, frames] = adaptor_->forward(h, targets, rng, training, gt_ped);
    auto mel = decoder_->forward(frames, rng, training);
    return {std::move(ped), std::move(mel)};
  }

  void backward_tts(const Mat<Real>& d_mel, const Mat<Real>& d_pitch,
                    const Mat<Real>& d_energy, const Mat<Real>& d_logdur) {
    auto d_frames = decoder_->backward(d_mel);
    encode_backward(adaptor_->backward(d_frames, d_pitch, d_energy, d_logdur));
  }

 private:
  ModelConfig cfg_;
  std::unique_ptr<TextEncoder<Real>> text_enc_;
  std::unique_ptr<VisualEncoder<Real>> vis_enc_;
  std::unique_ptr<FusionBlock<Real>> fusion_;
  PoolFuse<Real> pool_;
  std::unique_ptr<VarianceAdaptor<Real>> adaptor_;
  std::unique_ptr<MelDecoder<Real>> decoder_;
};

}  // namespace prosofuse

#endif  // PROSOFUSE_MODEL_TTS_HPP_

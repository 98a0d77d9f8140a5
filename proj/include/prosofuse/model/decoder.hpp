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

#ifndef PROSOFUSE_MODEL_DECODER_HPP_
#define PROSOFUSE_MODEL_DECODER_HPP_

#include <memory>
#include <string>
#include <vector>

#include "prosofuse/common.hpp"
#include "prosofuse/layers.hpp"
#include "prosofuse/matrix.hpp"
#include "prosofuse/model/blocks.hpp"
#include "prosofuse/model/config.hpp"
#include "prosofuse/model/positional.hpp"

namespace prosofuse {

// Mel decoder: positions, block stack, linear projection to the mel bins.
template <typename Real>
class MelDecoder {
 public:
  MelDecoder(const ModelConfig& cfg, RngState& rng)
      : out_(cfg.d_model, cfg.mel_bins, rng) {
    blocks_.reserve(static_cast<size_t>(cfg.decoder_layers));
    for (index_t i = 0; i < cfg.decoder_layers; ++i) {
      blocks_.push_back(std::make_unique<FftBlock<Real>>(
          cfg.d_model, cfg.heads, cfg.ffn_hidden, cfg.conv_kernel,
          cfg.encoder_dropout, rng));
    }
  }

  Mat<Real> forward(const Mat<Real>& frames, RngState& rng, bool training) {
    if (frames.rows() < 1) throw DimensionError("decode_mel: empty input");
    Mat<Real> h = frames;
    add_positional(h);
    for (auto& b : blocks_) h = b->forward(h, rng, training);
    return out_.forward(h);
  }

  Mat<Real> backward(const Mat<Real>& d_mel) {
    auto d = out_.backward(d_mel);
    for (auto it = blocks_.rbegin(); it != blocks_.rend(); ++it) {
      d = (*it)->backward(d);
    }
    return d;
  }

  void collect(const std::string& prefix, ParamRefs<Real>& out) {
    for (size_t i = 0; i < blocks_.size(); ++i) {
      blocks_[i]->collect(prefix + ".block" + std::to_string(i), out);
    }
    out_.collect(prefix + ".out", out);
  }

 private:
  std::vector<std::unique_ptr<FftBlock<Real>>> blocks_;
  Linear<Real> out_;
};

}  // namespace prosofuse

#endif  // PROSOFUSE_MODEL_DECODER_HPP_

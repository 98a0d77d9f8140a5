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

#ifndef PROSOFUSE_MODEL_ENCODER_HPP_
#define PROSOFUSE_MODEL_ENCODER_HPP_

#include <memory>
#include <string>
#include <vector>

#include "prosofuse/layers.hpp"
#include "prosofuse/matrix.hpp"
#include "prosofuse/model/blocks.hpp"
#include "prosofuse/model/config.hpp"
#include "prosofuse/model/positional.hpp"

namespace prosofuse {

// Phone-side encoder: embedding lookup, sinusoidal positions, then a stack
// of feed-forward transformer blocks.
template <typename Real>
class TextEncoder {
 public:
  TextEncoder(const ModelConfig& cfg, RngState& rng)
      : emb_(cfg.vocab, cfg.d_model, rng) {
    blocks_.reserve(static_cast<size_t>(cfg.encoder_layers));
    for (index_t i = 0; i < cfg.encoder_layers; ++i) {
      blocks_.push_back(std::make_unique<FftBlock<Real>>(
          cfg.d_model, cfg.heads, cfg.ffn_hidden, cfg.conv_kernel,
          cfg.encoder_dropout, rng));
    }
  }

  Mat<Real> forward(const std::vector<index_t>& phones, RngState& rng,
                    bool training) {
    auto h = emb_.forward(phones);
    add_positional(h);
    for (auto& b : blocks_) h = b->forward(h, rng, training);
    return h;
  }

  // Positional terms are constants, so the embedding sees d_out unchanged
  // through the addition.
  void backward(const Mat<Real>& d_out) {
    Mat<Real> d = d_out;
    for (auto it = blocks_.rbegin(); it != blocks_.rend(); ++it) {
      d = (*it)->backward(d);
    }
    emb_.backward(d);
  }

  void collect(const std::string& prefix, ParamRefs<Real>& out) {
    emb_.collect(prefix + ".emb", out);
    for (size_t i = 0; i < blocks_.size(); ++i) {
      blocks_[i]->collect(prefix + ".block" + std::to_string(i), out);
    }
  }

 private:
  Embedding<Real> emb_;
  std::vector<std::unique_ptr<FftBlock<Real>>> blocks_;
};

// Visual-side encoder: linear projection of the frame features into the
// model width, positions, then the same block stack.
template <typename Real>
class VisualEncoder {
 public:
  VisualEncoder(const ModelConfig& cfg, RngState& rng)
      : proj_(cfg.visual_dim, cfg.d_model, rng) {
    blocks_.reserve(static_cast<size_t>(cfg.encoder_layers));
    for (index_t i = 0; i < cfg.encoder_layers; ++i) {
      blocks_.push_back(std::make_unique<FftBlock<Real>>(
          cfg.d_model, cfg.heads, cfg.ffn_hidden, cfg.conv_kernel,
          cfg.encoder_dropout, rng));
    }
  }

  Mat<Real> forward(const Mat<Real>& visual, RngState& rng, bool training) {
    auto h = proj_.forward(visual);
    add_positional(h);
    for (auto& b : blocks_) h = b->forward(h, rng, training);
    return h;
  }

  Mat<Real> backward(const Mat<Real>& d_out) {
    Mat<Real> d = d_out;
    for (auto it = blocks_.rbegin(); it != blocks_.rend(); ++it) {
      d = (*it)->backward(d);
    }
    return proj_.backward(d);
  }

  void collect(const std::string& prefix, ParamRefs<Real>& out) {
    proj_.collect(prefix + ".proj", out);
    for (size_t i = 0; i < blocks_.size(); ++i) {
      blocks_[i]->collect(prefix + ".block" + std::to_string(i), out);
    }
  }

 private:
  Linear<Real> proj_;
  std::vector<std::unique_ptr<FftBlock<Real>>> blocks_;
};

}  // namespace prosofuse

#endif  // PROSOFUSE_MODEL_ENCODER_HPP_

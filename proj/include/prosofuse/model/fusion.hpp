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

#ifndef PROSOFUSE_MODEL_FUSION_HPP_
#define PROSOFUSE_MODEL_FUSION_HPP_

#include <string>
#include <utility>

#include "prosofuse/layers.hpp"
#include "prosofuse/matrix.hpp"
#include "prosofuse/model/attention.hpp"
#include "prosofuse/model/config.hpp"

namespace prosofuse {

// Cross-modal fusion block. Text states query the visual states through
// multi-head attention; a position-wise feed-forward refines the result.
// Both sublayers are residual with post-norm, so the output keeps the text
// length no matter how many visual frames attend.
//
//   H1 = LN1(T + MHA(T, V))
//   H2 = LN2(H1 + Dropout(W2 ReLU(W1 H1)))
template <typename Real>
class FusionBlock {
 public:
  FusionBlock(const ModelConfig& cfg, RngState& rng)
      : attn_(cfg.d_model, cfg.heads, cfg.fusion_dropout, rng),
        ln1_(cfg.d_model),
        lin1_(cfg.d_model, cfg.fusion_ffn_hidden, rng),
        lin2_(cfg.fusion_ffn_hidden, cfg.d_model, rng),
        drop_(cfg.fusion_dropout),
        ln2_(cfg.d_model) {}

  Mat<Real> forward(const Mat<Real>& text, const Mat<Real>& visual,
                    RngState& rng, bool training) {
    auto a = attn_.forward(text, visual, rng, training);
    auto h1 = ln1_.forward(add(text, a));
    auto f = drop_.forward(lin2_.forward(relu_.forward(lin1_.forward(h1))),
                           rng, training);
    return ln2_.forward(add(h1, f));
  }

  // Returns gradients for (text, visual).
  std::pair<Mat<Real>, Mat<Real>> backward(const Mat<Real>& d_out) {
    auto d_sum2 = ln2_.backward(d_out);
    auto d_h1 =
        lin1_.backward(relu_.backward(lin2_.backward(drop_.backward(d_sum2))));
    add_inplace(d_h1, d_sum2);
    auto d_sum1 = ln1_.backward(d_h1);
    auto [d_text, d_visual] = attn_.backward(d_sum1);
    add_inplace(d_text, d_sum1);
    return {std::move(d_text), std::move(d_visual)};
  }

  void collect(const std::string& prefix, ParamRefs<Real>& out) {
    attn_.collect(prefix + ".attn", out);
    ln1_.collect(prefix + ".ln1", out);
    lin1_.collect(prefix + ".lin1", out);
    lin2_.collect(prefix + ".lin2", out);
    ln2_.collect(prefix + ".ln2", out);
  }

 private:
  MultiHeadAttention<Real> attn_;
  LayerNorm<Real> ln1_;
  Linear<Real> lin1_;
  Relu<Real> relu_;
  Linear<Real> lin2_;
  Dropout<Real> drop_;
  LayerNorm<Real> ln2_;
};

// Parameter-free pooling baseline: every text position receives the mean
// visual state. Keeps the text length by construction.
template <typename Real>
struct PoolFuse {
  Mat<Real> forward(const Mat<Real>& text, const Mat<Real>& visual) {
    detail::require(text.cols() == visual.cols(),
                    "pool_fuse: text and visual widths differ");
    visual_rows_ = visual.rows();
    auto mean = colmean(visual);
    Mat<Real> out = text;
    for (index_t i = 0; i < out.rows(); ++i) {
      for (index_t j = 0; j < out.cols(); ++j) out(i, j) += mean(0, j);
    }
    return out;
  }

  // d_text = d_out; d_visual spreads the column sums of d_out evenly over
  // the visual rows.
  std::pair<Mat<Real>, Mat<Real>> backward(const Mat<Real>& d_out) {
    auto d_cols = colsum(d_out);
    Mat<Real> d_visual(visual_rows_, d_out.cols());
    const Real inv = Real(1) / Real(visual_rows_);
    for (index_t i = 0; i < visual_rows_; ++i) {
      for (index_t j = 0; j < d_out.cols(); ++j) {
        d_visual(i, j) = d_cols(0, j) * inv;
      }
    }
    return {d_out, std::move(d_visual)};
  }

  index_t visual_rows_ = 0;
};

}  // namespace prosofuse

#endif  // PROSOFUSE_MODEL_FUSION_HPP_

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

#ifndef PROSOFUSE_MODEL_BLOCKS_HPP_
#define PROSOFUSE_MODEL_BLOCKS_HPP_

#include <string>

#include "prosofuse/layers.hpp"
#include "prosofuse/matrix.hpp"
#include "prosofuse/model/attention.hpp"

namespace prosofuse {

// Feed-forward transformer block of the base model family: self-attention
// and a 1-D convolutional feed-forward (kernel k then kernel 1), each with
// dropout, residual connection and post-norm.
template <typename Real>
class FftBlock {
 public:
  FftBlock(index_t d_model, index_t heads, index_t ffn_hidden,
           index_t conv_kernel, double dropout, RngState& rng)
      : attn_(d_model, heads, dropout, rng),
        ln1_(d_model),
        conv1_(d_model, ffn_hidden, conv_kernel, rng),
        conv2_(ffn_hidden, d_model, 1, rng),
        drop_(dropout),
        ln2_(d_model) {}

  Mat<Real> forward(const Mat<Real>& x, RngState& rng, bool training) {
    auto a = attn_.forward(x, x, rng, training);
    h1_ = ln1_.forward(add(x, a));
    auto f = conv2_.forward(relu_.forward(conv1_.forward(h1_)));
    f = drop_.forward(f, rng, training);
    return ln2_.forward(add(h1_, f));
  }

  Mat<Real> backward(const Mat<Real>& d_out) {
    auto d_sum2 = ln2_.backward(d_out);
    auto d_f = drop_.backward(d_sum2);
    auto d_h1 = conv1_.backward(relu_.backward(conv2_.backward(d_f)));
    add_inplace(d_h1, d_sum2);
    auto d_sum1 = ln1_.backward(d_h1);
    auto [d_q, d_kv] = attn_.backward(d_sum1);
    add_inplace(d_q, d_kv);
    add_inplace(d_q, d_sum1);
    return d_q;
  }

  void collect(const std::string& prefix, ParamRefs<Real>& out) {
    attn_.collect(prefix + ".attn", out);
    ln1_.collect(prefix + ".ln1", out);
    conv1_.collect(prefix + ".conv1", out);
    conv2_.collect(prefix + ".conv2", out);
    ln2_.collect(prefix + ".ln2", out);
  }

 private:
  MultiHeadAttention<Real> attn_;
  LayerNorm<Real> ln1_;
  Conv1d<Real> conv1_;
  Relu<Real> relu_;
  Conv1d<Real> conv2_;
  Dropout<Real> drop_;
  LayerNorm<Real> ln2_;
  Mat<Real> h1_;
};

}  // namespace prosofuse

#endif  // PROSOFUSE_MODEL_BLOCKS_HPP_

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

#ifndef PROSOFUSE_MODEL_ATTENTION_HPP_
#define PROSOFUSE_MODEL_ATTENTION_HPP_

#include <cmath>
#include <string>
#include <vector>

#include "prosofuse/layers.hpp"
#include "prosofuse/matrix.hpp"

namespace prosofuse {

// The literal fusion equation: text rows query visual rows with no learned
// projections. Returns the attended output and the weights.
template <typename Real>
struct Eq1Result {
  Mat<Real> output;   // L x d
  Mat<Real> weights;  // L x n, rows stochastic
};

template <typename Real>
Eq1Result<Real> eq1_attention(const Mat<Real>& t, const Mat<Real>& v) {
  if (t.cols() != v.cols())
    throw DimensionError("eq1_attention: dimensions differ, " +
                         t.shape_str() + " vs " + v.shape_str());
  const Real inv_sqrt_d =
      static_cast<Real>(1.0 / std::sqrt(static_cast<double>(v.cols())));
  auto scores = matmul_nt(t, v);
  scale_inplace(scores, inv_sqrt_d);
  Eq1Result<Real> r;
  r.weights = softmax_rows(scores);
  r.output = matmul(r.weights, v);
  return r;
}

namespace attention_detail {

template <typename Real>
Mat<Real> col_block(const Mat<Real>& m, index_t c0, index_t width) {
  Mat<Real> out(m.rows(), width);
  for (index_t i = 0; i < m.rows(); ++i)
    for (index_t j = 0; j < width; ++j) out(i, j) = m(i, c0 + j);
  return out;
}

template <typename Real>
void put_col_block(Mat<Real>& m, index_t c0, const Mat<Real>& block) {
  for (index_t i = 0; i < block.rows(); ++i)
    for (index_t j = 0; j < block.cols(); ++j) m(i, c0 + j) = block(i, j);
}

}  // namespace attention_detail

// Learned multi-head attention: full-width Q/K/V/O projections with biases,
// per-head width d/heads, scaled dot-product weights, concatenation, output
// projection, then dropout. Queries come from the first argument; keys and
// values from the second (pass the same matrix for self-attention).
template <typename Real>
class MultiHeadAttention {
 public:
  MultiHeadAttention(index_t d_model, index_t heads, double dropout,
                     RngState& rng)
      : d_(d_model),
        heads_(heads),
        dh_(d_model / heads),
        wq_(d_model, d_model, rng),
        wk_(d_model, d_model, rng),
        wv_(d_model, d_model, rng),
        wo_(d_model, d_model, rng),
        drop_(dropout) {
    if (heads < 1 || d_model % heads != 0)
      throw ConfigError("attention: d_model must be a multiple of heads");
  }

  Mat<Real> forward(const Mat<Real>& q_in, const Mat<Real>& kv_in,
                    RngState& rng, bool training) {
    q_ = wq_.forward(q_in);
    k_ = wk_.forward(kv_in);
    v_ = wv_.forward(kv_in);
    attn_.clear();
    Mat<Real> ctx(q_in.rows(), d_);
    const Real inv_sqrt =
        static_cast<Real>(1.0 / std::sqrt(static_cast<double>(dh_)));
    for (index_t h = 0; h < heads_; ++h) {
      const auto qh = attention_detail::col_block(q_, h * dh_, dh_);
      const auto kh = attention_detail::col_block(k_, h * dh_, dh_);
      const auto vh = attention_detail::col_block(v_, h * dh_, dh_);
      auto scores = matmul_nt(qh, kh);
      scale_inplace(scores, inv_sqrt);
      attn_.push_back(softmax_rows(scores));
      attention_detail::put_col_block(ctx, h * dh_, matmul(attn_.back(), vh));
    }
    auto out = wo_.forward(ctx);
    return drop_.forward(out, rng, training);
  }

  // Returns (d_q_in, d_kv_in). For self-attention add both into the input
  // gradient.
  std::pair<Mat<Real>, Mat<Real>> backward(const Mat<Real>& d_out) {
    auto d_proj = drop_.backward(d_out);
    auto d_ctx = wo_.backward(d_proj);
    Mat<Real> dq(q_.rows(), d_), dk(k_.rows(), d_), dv(v_.rows(), d_);
    const Real inv_sqrt =
        static_cast<Real>(1.0 / std::sqrt(static_cast<double>(dh_)));
    for (index_t h = 0; h < heads_; ++h) {
      const auto qh = attention_detail::col_block(q_, h * dh_, dh_);
      const auto kh = attention_detail::col_block(k_, h * dh_, dh_);
      const auto vh = attention_detail::col_block(v_, h * dh_, dh_);
      const auto d_ctx_h = attention_detail::col_block(d_ctx, h * dh_, dh_);
      auto d_attn = matmul_nt(d_ctx_h, vh);
      auto d_vh = matmul_tn(attn_[h], d_ctx_h);
      auto d_scores = softmax_rows_backward(attn_[h], d_attn);
      scale_inplace(d_scores, inv_sqrt);
      attention_detail::put_col_block(dq, h * dh_, matmul(d_scores, kh));
      attention_detail::put_col_block(dk, h * dh_, matmul_tn(d_scores, qh));
      attention_detail::put_col_block(dv, h * dh_, d_vh);
    }
    auto d_q_in = wq_.backward(dq);
    auto d_kv_in = wk_.backward(dk);
    add_inplace(d_kv_in, wv_.backward(dv));
    return {std::move(d_q_in), std::move(d_kv_in)};
  }

  void collect(const std::string& prefix, ParamRefs<Real>& out) {
    wq_.collect(prefix + ".wq", out);
    wk_.collect(prefix + ".wk", out);
    wv_.collect(prefix + ".wv", out);
    wo_.collect(prefix + ".wo", out);
  }

  // Per-head attention weights of the last forward (for tests).
  const std::vector<Mat<Real>>& last_weights() const { return attn_; }

  Linear<Real>& wq() { return wq_; }
  Linear<Real>& wk() { return wk_; }
  Linear<Real>& wv() { return wv_; }
  Linear<Real>& wo() { return wo_; }

 private:
  index_t d_, heads_, dh_;
  Linear<Real> wq_, wk_, wv_, wo_;
  Dropout<Real> drop_;
  Mat<Real> q_, k_, v_;
  std::vector<Mat<Real>> attn_;
};

}  // namespace prosofuse

#endif  // PROSOFUSE_MODEL_ATTENTION_HPP_

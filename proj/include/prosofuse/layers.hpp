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
//
// Differentiable layers with explicit forward/backward passes. There is no
// autodiff graph: each layer caches what its own backward needs, and the
// caller runs backwards in reverse forward order. Parameter gradients
// accumulate until the optimizer consumes them.

#ifndef PROSOFUSE_LAYERS_HPP_
#define PROSOFUSE_LAYERS_HPP_

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "prosofuse/matrix.hpp"
#include "prosofuse/rng.hpp"

namespace prosofuse {

/// A learnable tensor: value plus same-shaped gradient accumulator.
template <typename Real>
struct Param {
  Mat<Real> value;
  Mat<Real> grad;

  Param() = default;
  explicit Param(Mat<Real> v)
      : value(std::move(v)), grad(value.rows(), value.cols()) {}

  void zero_grad() { grad.zero(); }
};

/// Named references to every parameter of a model, in registration order.
/// The order is part of the determinism contract (optimizer state and
/// checkpoints index into it).
template <typename Real>
using ParamRefs = std::vector<std::pair<std::string, Param<Real>*>>;

/// Xavier/Glorot uniform init, the default for projection weights.
template <typename Real>
Mat<Real> xavier_uniform(index_t fan_out, index_t fan_in, RngState& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  return Mat<Real>::random_uniform(fan_out, fan_in, Real(-limit), Real(limit),
                                   rng);
}

/// y = x W^T + b, b broadcast per row.
template <typename Real>
class Linear {
 public:
  Linear() = default;
  Linear(index_t in, index_t out, RngState& rng)
      : w_(xavier_uniform<Real>(out, in, rng)), b_(Mat<Real>(1, out)) {}

  Param<Real>& weight() { return w_; }
  Param<Real>& bias() { return b_; }

  void collect(const std::string& prefix, ParamRefs<Real>& out) {
    out.emplace_back(prefix + ".weight", &w_);
    out.emplace_back(prefix + ".bias", &b_);
  }

  Mat<Real> forward(const Mat<Real>& x) {
    if (x.cols() != w_.value.cols()) {
      throw DimensionError("Linear: input " + x.shape_str() + " vs weight " +
                           w_.value.shape_str());
    }
    x_ = x;
    Mat<Real> y = matmul_nt(x, w_.value);
    for (index_t i = 0; i < y.rows(); ++i) {
      Real* r = y.row(i);
      for (index_t j = 0; j < y.cols(); ++j) r[j] += b_.value(0, j);
    }
    return y;
  }

  Mat<Real> backward(const Mat<Real>& dy) {
    add_inplace(w_.grad, matmul_tn(dy, x_));
    add_inplace(b_.grad, colsum(dy));
    return matmul(dy, w_.value);
  }

 private:
  Param<Real> w_;  // out x in
  Param<Real> b_;  // 1 x out
  Mat<Real> x_;
};

/// Per-row normalization to zero mean / unit variance, then affine.
/// A zero-variance row normalizes to exactly zero, so the output is beta.
template <typename Real>
class LayerNorm {
 public:
  LayerNorm() = default;
  explicit LayerNorm(index_t dim, Real eps = Real(1e-5))
      : gamma_(Mat<Real>::filled(1, dim, Real(1))), beta_(Mat<Real>(1, dim)),
        eps_(eps) {
    if (eps <= Real(0)) throw ConfigError("LayerNorm: eps must be positive");
  }

  Param<Real>& gamma() { return gamma_; }
  Param<Real>& beta() { return beta_; }

  void collect(const std::string& prefix, ParamRefs<Real>& out) {
    out.emplace_back(prefix + ".gamma", &gamma_);
    out.emplace_back(prefix + ".beta", &beta_);
  }

  Mat<Real> forward(const Mat<Real>& x) {
    const index_t d = gamma_.value.cols();
    if (x.cols() != d) throw DimensionError("LayerNorm: dim mismatch");
    xhat_ = Mat<Real>(x.rows(), d);
    inv_std_.assign(static_cast<std::size_t>(x.rows()), Real(0));
    Mat<Real> y(x.rows(), d);
    for (index_t i = 0; i < x.rows(); ++i) {
      const Real* xi = x.row(i);
      Real mean = 0;
      for (index_t j = 0; j < d; ++j) mean += xi[j];
      mean /= static_cast<Real>(d);
      Real var = 0;
      for (index_t j = 0; j < d; ++j) {
        const Real c = xi[j] - mean;
        var += c * c;
      }
      var /= static_cast<Real>(d);
      const Real inv = Real(1) / std::sqrt(var + eps_);
      inv_std_[static_cast<std::size_t>(i)] = inv;
      Real* xh = xhat_.row(i);
      Real* yi = y.row(i);
      for (index_t j = 0; j < d; ++j) {
        xh[j] = (xi[j] - mean) * inv;
        yi[j] = gamma_.value(0, j) * xh[j] + beta_.value(0, j);
      }
    }
    return y;
  }

  Mat<Real> backward(const Mat<Real>& dy) {
    const index_t d = gamma_.value.cols();
    Mat<Real> dx(dy.rows(), d);
    for (index_t i = 0; i < dy.rows(); ++i) {
      const Real* dyi = dy.row(i);
      const Real* xh = xhat_.row(i);
      const Real inv = inv_std_[static_cast<std::size_t>(i)];
      Real sum_dxhat = 0, sum_dxhat_xhat = 0;
      for (index_t j = 0; j < d; ++j) {
        const Real dxh = dyi[j] * gamma_.value(0, j);
        sum_dxhat += dxh;
        sum_dxhat_xhat += dxh * xh[j];
        gamma_.grad(0, j) += dyi[j] * xh[j];
        beta_.grad(0, j) += dyi[j];
      }
      Real* dxi = dx.row(i);
      const Real n = static_cast<Real>(d);
      for (index_t j = 0; j < d; ++j) {
        const Real dxh = dyi[j] * gamma_.value(0, j);
        dxi[j] = inv * (dxh - sum_dxhat / n - xh[j] * sum_dxhat_xhat / n);
      }
    }
    return dx;
  }

 private:
  Param<Real> gamma_;
  Param<Real> beta_;
  Real eps_{Real(1e-5)};
  Mat<Real> xhat_;
  std::vector<Real> inv_std_;
};

/// Inverted dropout: kept entries scale by 1/(1-rate), so eval mode is the
/// bitwise identity and needs no rescaling. Eval mode and rate 0 consume no
/// randomness.
template <typename Real>
class Dropout {
 public:
  Dropout() = default;
  explicit Dropout(Real rate) : rate_(rate) {
    if (rate < Real(0) || rate >= Real(1)) {
      throw ConfigError("Dropout: rate must be in [0, 1)");
    }
  }

  Mat<Real> forward(const Mat<Real>& x, RngState& rng, bool training) {
    if (!training || rate_ == Real(0)) {
      identity_ = true;
      return x;
    }
    identity_ = false;
    const Real keep_scale = Real(1) / (Real(1) - rate_);
    mask_ = Mat<Real>(x.rows(), x.cols());
    Mat<Real> y(x.rows(), x.cols());
    for (index_t i = 0; i < x.size(); ++i) {
      const bool keep = rng.uniform() >= static_cast<double>(rate_);
      mask_.data()[i] = keep ? keep_scale : Real(0);
      y.data()[i] = x.data()[i] * mask_.data()[i];
    }
    return y;
  }

  Mat<Real> backward(const Mat<Real>& dy) {
    if (identity_) return dy;
    return hadamard(dy, mask_);
  }

 private:
  Real rate_{0};
  bool identity_{true};
  Mat<Real> mask_;
};

template <typename Real>
class Relu {
 public:
  Mat<Real> forward(const Mat<Real>& x) {
    mask_ = Mat<Real>(x.rows(), x.cols());
    Mat<Real> y(x.rows(), x.cols());
    for (index_t i = 0; i < x.size(); ++i) {
      const bool pos = x.data()[i] > Real(0);
      mask_.data()[i] = pos ? Real(1) : Real(0);
      y.data()[i] = pos ? x.data()[i] : Real(0);
    }
    return y;
  }

  Mat<Real> backward(const Mat<Real>& dy) { return hadamard(dy, mask_); }

 private:
  Mat<Real> mask_;
};

/// 1-D convolution over a sequence (rows = positions, cols = channels),
/// 'same' zero padding, odd kernel. Weight layout is out x (in * k) so the
/// forward is one im2col plus a Linear-style product.
template <typename Real>
class Conv1d {
 public:
  Conv1d() = default;
  Conv1d(index_t in, index_t out, index_t kernel, RngState& rng)
      : in_(in), out_(out), k_(kernel),
        w_(xavier_uniform<Real>(out, in * kernel, rng)),
        b_(Mat<Real>(1, out)) {
    if (kernel % 2 == 0) throw ConfigError("Conv1d: kernel must be odd");
  }

  void collect(const std::string& prefix, ParamRefs<Real>& out) {
    out.emplace_back(prefix + ".weight", &w_);
    out.emplace_back(prefix + ".bias", &b_);
  }

  Mat<Real> forward(const Mat<Real>& x) {
    if (x.cols() != in_) {
      throw DimensionError("Conv1d: input channels " +
                           std::to_string(x.cols()) + " != " +
                           std::to_string(in_));
    }
    const index_t len = x.rows();
    const index_t half = k_ / 2;
    cols_ = Mat<Real>(len, in_ * k_);
    for (index_t t = 0; t < len; ++t) {
      Real* dst = cols_.row(t);
      for (index_t dk = 0; dk < k_; ++dk) {
        const index_t src = t + dk - half;
        if (src < 0 || src >= len) continue;
        const Real* xr = x.row(src);
        for (index_t c = 0; c < in_; ++c) dst[dk * in_ + c] = xr[c];
      }
    }
    Mat<Real> y = matmul_nt(cols_, w_.value);
    for (index_t i = 0; i < y.rows(); ++i) {
      Real* r = y.row(i);
      for (index_t j = 0; j < out_; ++j) r[j] += b_.value(0, j);
    }
    return y;
  }

  Mat<Real> backward(const Mat<Real>& dy) {
    add_inplace(w_.grad, matmul_tn(dy, cols_));
    add_inplace(b_.grad, colsum(dy));
    Mat<Real> dcols = matmul(dy, w_.value);
    const index_t len = dy.rows();
    const index_t half = k_ / 2;
    Mat<Real> dx(len, in_);
    for (index_t t = 0; t < len; ++t) {
      const Real* src = dcols.row(t);
      for (index_t dk = 0; dk < k_; ++dk) {
        const index_t pos = t + dk - half;
        if (pos < 0 || pos >= len) continue;
        Real* dxr = dx.row(pos);
        for (index_t c = 0; c < in_; ++c) dxr[c] += src[dk * in_ + c];
      }
    }
    return dx;
  }

 private:
  index_t in_{0}, out_{0}, k_{1};
  Param<Real> w_;  // out x (in * k)
  Param<Real> b_;
  Mat<Real> cols_;
};

/// Lookup table; gradients scatter-add into the rows that were used.
template <typename Real>
class Embedding {
 public:
  Embedding() = default;
  Embedding(index_t vocab, index_t dim, RngState& rng)
      : table_(Mat<Real>::random_normal(
            vocab, dim, Real(1.0 / std::sqrt(static_cast<double>(dim))), rng)) {
  }

  Param<Real>& table() { return table_; }

  void collect(const std::string& prefix, ParamRefs<Real>& out) {
    out.emplace_back(prefix + ".table", &table_);
  }

  Mat<Real> forward(const std::vector<index_t>& ids) {
    ids_ = ids;
    Mat<Real> y(static_cast<index_t>(ids.size()), table_.value.cols());
    for (index_t i = 0; i < y.rows(); ++i) {
      const index_t id = ids[static_cast<std::size_t>(i)];
      if (id < 0 || id >= table_.value.rows()) {
        throw VocabError("Embedding: id " + std::to_string(id) +
                         " outside vocabulary of " +
                         std::to_string(table_.value.rows()));
      }
      const Real* src = table_.value.row(id);
      Real* dst = y.row(i);
      for (index_t j = 0; j < y.cols(); ++j) dst[j] = src[j];
    }
    return y;
  }

  void backward(const Mat<Real>& dy) {
    for (index_t i = 0; i < dy.rows(); ++i) {
      const index_t id = ids_[static_cast<std::size_t>(i)];
      Real* g = table_.grad.row(id);
      const Real* src = dy.row(i);
      for (index_t j = 0; j < dy.cols(); ++j) g[j] += src[j];
    }
  }

 private:
  Param<Real> table_;
  std::vector<index_t> ids_;
};

}  // namespace prosofuse

#endif  // PROSOFUSE_LAYERS_HPP_

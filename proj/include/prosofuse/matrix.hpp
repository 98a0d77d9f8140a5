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

#ifndef PROSOFUSE_MATRIX_HPP_
#define PROSOFUSE_MATRIX_HPP_

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "prosofuse/common.hpp"
#include "prosofuse/rng.hpp"

namespace prosofuse {

/// Dense row-major matrix. The scalar type is the build/config precision
/// switch: gradient checking instantiates double, training float. There is
/// one matrix type per precision context, not two domain types.
template <typename Real>
class Mat {
 public:
  Mat() = default;

  /// Zero-initialized r x c matrix.
  Mat(index_t r, index_t c) : rows_(r), cols_(c), data_(check_dims(r, c)) {}

  static Mat filled(index_t r, index_t c, Real v) {
    Mat m(r, c);
    std::fill(m.data_.begin(), m.data_.end(), v);
    return m;
  }

  static Mat identity(index_t n) {
    Mat m(n, n);
    for (index_t i = 0; i < n; ++i) m(i, i) = Real(1);
    return m;
  }

  /// Adopts a flat row-major buffer. In checked mode non-finite values are
  /// rejected here, which is the construction-time gate for data entering
  /// the numerical core from outside.
  static Mat from_data(index_t r, index_t c, std::vector<Real> d) {
    if (static_cast<index_t>(d.size()) != r * c) {
      throw DimensionError("Mat::from_data: buffer length " +
                           std::to_string(d.size()) + " != " +
                           std::to_string(r) + "x" + std::to_string(c));
    }
    Mat m;
    m.rows_ = r;
    m.cols_ = c;
    m.data_ = std::move(d);
    if constexpr (kChecked) m.require_finite("Mat::from_data");
    return m;
  }

  static Mat from_rows(std::initializer_list<std::initializer_list<Real>> rs) {
    const index_t r = static_cast<index_t>(rs.size());
    const index_t c = r > 0 ? static_cast<index_t>(rs.begin()->size()) : 0;
    std::vector<Real> d;
    d.reserve(static_cast<std::size_t>(r * c));
    for (const auto& row : rs) {
      if (static_cast<index_t>(row.size()) != c) {
        throw DimensionError("Mat::from_rows: ragged rows");
      }
      d.insert(d.end(), row.begin(), row.end());
    }
    return from_data(r, c, std::move(d));
  }

  static Mat random_uniform(index_t r, index_t c, Real lo, Real hi,
                            RngState& rng) {
    Mat m(r, c);
    for (auto& v : m.data_) v = static_cast<Real>(rng.uniform(lo, hi));
    return m;
  }

  static Mat random_normal(index_t r, index_t c, Real stddev, RngState& rng) {
    Mat m(r, c);
    for (auto& v : m.data_) v = static_cast<Real>(stddev * rng.normal());
    return m;
  }

  index_t rows() const { return rows_; }
  index_t cols() const { return cols_; }
  index_t size() const { return rows_ * cols_; }
  bool empty() const { return data_.empty(); }

  Real& operator()(index_t i, index_t j) { return data_[idx(i, j)]; }
  Real operator()(index_t i, index_t j) const { return data_[idx(i, j)]; }

  Real* data() { return data_.data(); }
  const Real* data() const { return data_.data(); }
  Real* row(index_t i) { return data_.data() + i * cols_; }
  const Real* row(index_t i) const { return data_.data() + i * cols_; }

  const std::vector<Real>& values() const { return data_; }

  bool same_shape(const Mat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_;
  }

  void fill(Real v) { std::fill(data_.begin(), data_.end(), v); }
  void zero() { fill(Real(0)); }

  bool all_finite() const {
    for (Real v : data_) {
      if (!std::isfinite(static_cast<double>(v))) return false;
    }
    return true;
  }

  void require_finite(const char* where) const {
    if (!all_finite()) {
      throw EvaluationError(std::string(where) + ": non-finite value");
    }
  }

  std::string shape_str() const {
    std::ostringstream os;
    os << rows_ << "x" << cols_;
    return os.str();
  }

 private:
  static std::size_t check_dims(index_t r, index_t c) {
    if (r < 0 || c < 0) throw DimensionError("Mat: negative dimension");
    return static_cast<std::size_t>(r * c);
  }
  std::size_t idx(index_t i, index_t j) const {
    return static_cast<std::size_t>(i * cols_ + j);
  }

  index_t rows_{0};
  index_t cols_{0};
  std::vector<Real> data_;
};

namespace detail {
inline void require(bool cond, const char* msg) {
  if (!cond) throw DimensionError(msg);
}
}  // namespace detail

/// Standard product, i-k-j loop order so the inner loop streams rows of b.
/// Checked mode validates the output for finiteness.
template <typename Real>
Mat<Real> matmul(const Mat<Real>& a, const Mat<Real>& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: " + a.shape_str() + " * " + b.shape_str());
  }
  Mat<Real> c(a.rows(), b.cols());
  const index_t m = a.rows(), k = a.cols(), n = b.cols();
  for (index_t i = 0; i < m; ++i) {
    Real* ci = c.row(i);
    const Real* ai = a.row(i);
    for (index_t p = 0; p < k; ++p) {
      const Real aip = ai[p];
      const Real* bp = b.row(p);
      for (index_t j = 0; j < n; ++j) ci[j] += aip * bp[j];
    }
  }
  if constexpr (kChecked) c.require_finite("matmul");
  return c;
}

/// a * b^T without materializing the transpose.
template <typename Real>
Mat<Real> matmul_nt(const Mat<Real>& a, const Mat<Real>& b) {
  if (a.cols() != b.cols()) {
    throw DimensionError("matmul_nt: " + a.shape_str() + " * " +
                         b.shape_str() + "^T");
  }
  Mat<Real> c(a.rows(), b.rows());
  const index_t m = a.rows(), k = a.cols(), n = b.rows();
  for (index_t i = 0; i < m; ++i) {
    const Real* ai = a.row(i);
    Real* ci = c.row(i);
    for (index_t j = 0; j < n; ++j) {
      const Real* bj = b.row(j);
      Real acc = 0;
      for (index_t p = 0; p < k; ++p) acc += ai[p] * bj[p];
      ci[j] = acc;
    }
  }
  if constexpr (kChecked) c.require_finite("matmul_nt");
  return c;
}

/// a^T * b without materializing the transpose.
template <typename Real>
Mat<Real> matmul_tn(const Mat<Real>& a, const Mat<Real>& b) {
  if (a.rows() != b.rows()) {
    throw DimensionError("matmul_tn: " + a.shape_str() + "^T * " +
                         b.shape_str());
  }
  Mat<Real> c(a.cols(), b.cols());
  const index_t m = a.cols(), k = a.rows(), n = b.cols();
  for (index_t p = 0; p < k; ++p) {
    const Real* ap = a.row(p);
    const Real* bp = b.row(p);
    for (index_t i = 0; i < m; ++i) {
      const Real api = ap[i];
      Real* ci = c.row(i);
      for (index_t j = 0; j < n; ++j) ci[j] += api * bp[j];
    }
  }
  if constexpr (kChecked) c.require_finite("matmul_tn");
  return c;
}

template <typename Real>
Mat<Real> transpose(const Mat<Real>& a) {
  Mat<Real> t(a.cols(), a.rows());
  for (index_t i = 0; i < a.rows(); ++i)
    for (index_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

template <typename Real>
Mat<Real> add(const Mat<Real>& a, const Mat<Real>& b) {
  detail::require(a.same_shape(b), "add: shape mismatch");
  Mat<Real> c = a;
  for (index_t i = 0; i < c.size(); ++i) c.data()[i] += b.data()[i];
  return c;
}

template <typename Real>
void add_inplace(Mat<Real>& a, const Mat<Real>& b) {
  detail::require(a.same_shape(b), "add_inplace: shape mismatch");
  for (index_t i = 0; i < a.size(); ++i) a.data()[i] += b.data()[i];
}

/// a += s * b
template <typename Real>
void axpy(Mat<Real>& a, Real s, const Mat<Real>& b) {
  detail::require(a.same_shape(b), "axpy: shape mismatch");
  for (index_t i = 0; i < a.size(); ++i) a.data()[i] += s * b.data()[i];
}

template <typename Real>
Mat<Real> sub(const Mat<Real>& a, const Mat<Real>& b) {
  detail::require(a.same_shape(b), "sub: shape mismatch");
  Mat<Real> c = a;
  for (index_t i = 0; i < c.size(); ++i) c.data()[i] -= b.data()[i];
  return c;
}

template <typename Real>
Mat<Real> scale(const Mat<Real>& a, Real s) {
  Mat<Real> c = a;
  for (index_t i = 0; i < c.size(); ++i) c.data()[i] *= s;
  return c;
}

template <typename Real>
void scale_inplace(Mat<Real>& a, Real s) {
  for (index_t i = 0; i < a.size(); ++i) a.data()[i] *= s;
}

template <typename Real>
Mat<Real> hadamard(const Mat<Real>& a, const Mat<Real>& b) {
  detail::require(a.same_shape(b), "hadamard: shape mismatch");
  Mat<Real> c = a;
  for (index_t i = 0; i < c.size(); ++i) c.data()[i] *= b.data()[i];
  return c;
}

/// 1 x cols vector of column sums.
template <typename Real>
Mat<Real> colsum(const Mat<Real>& a) {
  Mat<Real> s(1, a.cols());
  for (index_t i = 0; i < a.rows(); ++i) {
    const Real* r = a.row(i);
    for (index_t j = 0; j < a.cols(); ++j) s(0, j) += r[j];
  }
  return s;
}

template <typename Real>
Mat<Real> colmean(const Mat<Real>& a) {
  Mat<Real> s = colsum(a);
  if (a.rows() > 0) scale_inplace(s, Real(1) / static_cast<Real>(a.rows()));
  return s;
}

template <typename Real>
Real max_abs(const Mat<Real>& a) {
  Real m = 0;
  for (index_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a.data()[i]));
  return m;
}

template <typename Real>
Real sum(const Mat<Real>& a) {
  Real s = 0;
  for (index_t i = 0; i < a.size(); ++i) s += a.data()[i];
  return s;
}

/// Row-wise softmax, stabilized by subtracting each row's max. Rows of the
/// result are nonnegative and sum to one for any finite input.
template <typename Real>
Mat<Real> softmax_rows(const Mat<Real>& m) {
  Mat<Real> y(m.rows(), m.cols());
  for (index_t i = 0; i < m.rows(); ++i) {
    const Real* x = m.row(i);
    Real* out = y.row(i);
    Real mx = x[0];
    for (index_t j = 1; j < m.cols(); ++j) mx = std::max(mx, x[j]);
    Real denom = 0;
    for (index_t j = 0; j < m.cols(); ++j) {
      out[j] = std::exp(x[j] - mx);
      denom += out[j];
    }
    const Real inv = Real(1) / denom;
    for (index_t j = 0; j < m.cols(); ++j) out[j] *= inv;
  }
  return y;
}

/// Backward of softmax_rows: given y = softmax(x) and dL/dy, returns dL/dx.
/// Per row: dx = y .* (dy - <dy, y>).
template <typename Real>
Mat<Real> softmax_rows_backward(const Mat<Real>& y, const Mat<Real>& dy) {
  detail::require(y.same_shape(dy), "softmax_rows_backward: shape mismatch");
  Mat<Real> dx(y.rows(), y.cols());
  for (index_t i = 0; i < y.rows(); ++i) {
    const Real* yi = y.row(i);
    const Real* dyi = dy.row(i);
    Real dot = 0;
    for (index_t j = 0; j < y.cols(); ++j) dot += dyi[j] * yi[j];
    Real* dxi = dx.row(i);
    for (index_t j = 0; j < y.cols(); ++j) dxi[j] = yi[j] * (dyi[j] - dot);
  }
  return dx;
}

}  // namespace prosofuse

#endif  // PROSOFUSE_MATRIX_HPP_

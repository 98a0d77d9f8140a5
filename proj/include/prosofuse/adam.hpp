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

#ifndef PROSOFUSE_ADAM_HPP_
#define PROSOFUSE_ADAM_HPP_

#include <cmath>
#include <vector>

#include "prosofuse/layers.hpp"

namespace prosofuse {

/// Bias-corrected Adam over a fixed parameter list. Moments are kept per
/// parameter in registration order; epsilon is added outside the square
/// root, so a first step with gradient g moves by -lr * g / (|g| + eps).
/// Gradients are zeroed after every step.
template <typename Real>
class AdamState {
 public:
  AdamState() = default;
  explicit AdamState(const ParamRefs<Real>& params, Real lr = Real(1e-3),
                     Real beta1 = Real(0.9), Real beta2 = Real(0.98),
                     Real eps = Real(1e-9))
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
    if (beta1 < Real(0) || beta1 >= Real(1) || beta2 < Real(0) ||
        beta2 >= Real(1)) {
      throw ConfigError("AdamState: betas must be in [0, 1)");
    }
    m_.reserve(params.size());
    v_.reserve(params.size());
    for (const auto& [name, p] : params) {
      m_.emplace_back(p->value.rows(), p->value.cols());
      v_.emplace_back(p->value.rows(), p->value.cols());
    }
  }

  std::int64_t step_count() const { return step_; }
  void set_step_count(std::int64_t s) { step_ = s; }
  Real lr() const { return lr_; }
  void set_lr(Real lr) { lr_ = lr; }

  std::vector<Mat<Real>>& first_moments() { return m_; }
  std::vector<Mat<Real>>& second_moments() { return v_; }
  const std::vector<Mat<Real>>& first_moments() const { return m_; }
  const std::vector<Mat<Real>>& second_moments() const { return v_; }

  void step(const ParamRefs<Real>& params) {
    if (params.size() != m_.size()) {
      throw DimensionError("AdamState: parameter list changed size");
    }
    ++step_;
    const Real bc1 = Real(1) - std::pow(beta1_, static_cast<Real>(step_));
    const Real bc2 = Real(1) - std::pow(beta2_, static_cast<Real>(step_));
    for (std::size_t k = 0; k < params.size(); ++k) {
      Param<Real>& p = *params[k].second;
      Mat<Real>& m = m_[k];
      Mat<Real>& v = v_[k];
      if (!p.value.same_shape(m)) {
        throw DimensionError("AdamState: moment shape mismatch for " +
                             params[k].first);
      }
      for (index_t i = 0; i < p.value.size(); ++i) {
        const Real g = p.grad.data()[i];
        Real& mi = m.data()[i];
        Real& vi = v.data()[i];
        mi = beta1_ * mi + (Real(1) - beta1_) * g;
        vi = beta2_ * vi + (Real(1) - beta2_) * g * g;
        const Real mhat = mi / bc1;
        const Real vhat = vi / bc2;
        p.value.data()[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
      }
      p.zero_grad();
    }
  }

 private:
  Real lr_{Real(1e-3)};
  Real beta1_{Real(0.9)};
  Real beta2_{Real(0.98)};
  Real eps_{Real(1e-9)};
  std::int64_t step_{0};
  std::vector<Mat<Real>> m_;
  std::vector<Mat<Real>> v_;
};

}  // namespace prosofuse

#endif  // PROSOFUSE_ADAM_HPP_

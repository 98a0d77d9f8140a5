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

#ifndef PROSOFUSE_GRADCHECK_HPP_
#define PROSOFUSE_GRADCHECK_HPP_

#include <cmath>
#include <functional>
#include <string>

#include "prosofuse/layers.hpp"

namespace prosofuse {

/// Finite-difference validation of analytic gradients. Meant for the
/// 64-bit instantiation; float loses too many digits for the central
/// difference to be a useful referee.
///
/// `loss_fn` evaluates the scalar objective at the current parameter
/// values; `grad_fn` zeroes gradients, then populates them analytically
/// (typically forward + backward). Every parameter element is perturbed by
/// +/- eps, and the relative error uses denominator max(|a|, |n|, floor).
/// The floor absorbs directions where the true derivative is an exact zero
/// by symmetry (e.g. key biases under softmax): there the central
/// difference returns rounding noise around 1e-11, which only means
/// something when compared against a floor above it.
template <typename Real>
Real grad_check(const ParamRefs<Real>& params,
                const std::function<Real()>& loss_fn,
                const std::function<void()>& grad_fn, Real eps,
                std::string* worst_name = nullptr, Real floor = Real(1e-6)) {
  grad_fn();
  Real max_rel = 0;
  for (const auto& [name, p] : params) {
    for (index_t i = 0; i < p->value.size(); ++i) {
      const Real saved = p->value.data()[i];
      p->value.data()[i] = saved + eps;
      const Real fp = loss_fn();
      p->value.data()[i] = saved - eps;
      const Real fm = loss_fn();
      p->value.data()[i] = saved;
      if (!std::isfinite(fp) || !std::isfinite(fm)) {
        throw EvaluationError("grad_check: non-finite objective at " + name);
      }
      const Real numeric = (fp - fm) / (Real(2) * eps);
      const Real analytic = p->grad.data()[i];
      const Real denom =
          std::max({std::abs(analytic), std::abs(numeric), floor});
      const Real rel = std::abs(analytic - numeric) / denom;
      if (rel > max_rel) {
        max_rel = rel;
        if (worst_name) *worst_name = name + "[" + std::to_string(i) + "]";
      }
    }
  }
  return max_rel;
}

}  // namespace prosofuse

#endif  // PROSOFUSE_GRADCHECK_HPP_

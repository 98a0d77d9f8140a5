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

#ifndef PROSOFUSE_MODEL_FFNN_HPP_
#define PROSOFUSE_MODEL_FFNN_HPP_

#include <string>

#include "prosofuse/common.hpp"
#include "prosofuse/layers.hpp"
#include "prosofuse/matrix.hpp"

namespace prosofuse {

// Feed-forward regressor from visual features to (pitch, energy) pairs:
// two ReLU hidden layers with dropout, then a linear head to 2 outputs.
// Rows are independent, so a whole feature matrix goes through at once.
template <typename Real>
class Ffnn {
 public:
  Ffnn(index_t d_f, RngState& rng, index_t hidden = 256, double dropout = 0.5)
      : d_f_(d_f),
        hidden_(hidden),
        lin1_(d_f, hidden, rng),
        drop1_(dropout),
        lin2_(hidden, hidden, rng),
        drop2_(dropout),
        out_(hidden, 2, rng) {}

  index_t feature_dim() const { return d_f_; }

  // Architecture fingerprint for checkpoint compatibility checks.
  uint32_t config_hash() const {
    return fnv1a32("ffnn|" + std::to_string(d_f_) + "|" +
                   std::to_string(hidden_));
  }

  Mat<Real> forward(const Mat<Real>& v, RngState& rng, bool training) {
    auto a = drop1_.forward(relu1_.forward(lin1_.forward(v)), rng, training);
    auto b = drop2_.forward(relu2_.forward(lin2_.forward(a)), rng, training);
    return out_.forward(b);
  }

  Mat<Real> backward(const Mat<Real>& d_out) {
    auto d_b = out_.backward(d_out);
    auto d_a = lin2_.backward(relu2_.backward(drop2_.backward(d_b)));
    return lin1_.backward(relu1_.backward(drop1_.backward(d_a)));
  }

  void collect(const std::string& prefix, ParamRefs<Real>& out) {
    lin1_.collect(prefix + ".lin1", out);
    lin2_.collect(prefix + ".lin2", out);
    out_.collect(prefix + ".out", out);
  }

  ParamRefs<Real> params() {
    ParamRefs<Real> refs;
    collect("ffnn", refs);
    return refs;
  }

 private:
  index_t d_f_;
  index_t hidden_;
  Linear<Real> lin1_;
  Relu<Real> relu1_;
  Dropout<Real> drop1_;
  Linear<Real> lin2_;
  Relu<Real> relu2_;
  Dropout<Real> drop2_;
  Linear<Real> out_;
};

}  // namespace prosofuse

#endif  // PROSOFUSE_MODEL_FFNN_HPP_

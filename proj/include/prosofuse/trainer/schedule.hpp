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

#ifndef PROSOFUSE_TRAINER_SCHEDULE_HPP_
#define PROSOFUSE_TRAINER_SCHEDULE_HPP_

#include <algorithm>
#include <cmath>

#include "prosofuse/common.hpp"

namespace prosofuse {

// Inverse-square-root warmup schedule:
//
//   lr = d_model^(-1/2) * min(step^(-1/2), step * warmup^(-3/2))
//
// The two branches cross at step == warmup, which is therefore the peak.
// Steps are 1-based; step 0 would put the linear ramp at lr 0 and is a
// caller bug.
inline double lr_schedule(std::int64_t step, index_t d_model, index_t warmup) {
  if (step < 1) throw ArgumentError("lr_schedule: step must be >= 1");
  if (d_model < 1) throw ArgumentError("lr_schedule: d_model must be >= 1");
  if (warmup < 1) throw ArgumentError("lr_schedule: warmup must be >= 1");
  const double s = static_cast<double>(step);
  const double w = static_cast<double>(warmup);
  return 1.0 / std::sqrt(static_cast<double>(d_model)) *
         std::min(1.0 / std::sqrt(s), s / (w * std::sqrt(w)));
}

}  // namespace prosofuse

#endif  // PROSOFUSE_TRAINER_SCHEDULE_HPP_

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

#ifndef PROSOFUSE_TRAINER_CONFIG_HPP_
#define PROSOFUSE_TRAINER_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "prosofuse/common.hpp"

namespace prosofuse {

// Fixed learning rate (regressor experiments) or inverse-square-root warmup
// (sequence models).
enum class LrMode { kFixed, kNoam };

struct TrainConfig {
  index_t batch_size = 32;
  index_t max_steps = 1;
  uint64_t seed = 0;
  LrMode lr_mode = LrMode::kFixed;
  double fixed_lr = 1e-5;
  index_t warmup = 4000;
  // Every how many steps the eval callback runs; 0 disables it.
  index_t eval_every = 0;
  // Written once at the end of training when nonempty.
  std::string checkpoint_path;
  // Line-delimited step log (one JSON object per step) when nonempty.
  std::string log_path;

  void validate() const {
    if (batch_size < 1) throw ConfigError("TrainConfig: batch_size must be >= 1");
    if (max_steps < 1) throw ConfigError("TrainConfig: max_steps must be >= 1");
    if (lr_mode == LrMode::kNoam && warmup < 1)
      throw ConfigError("TrainConfig: warmup must be >= 1");
    if (lr_mode == LrMode::kFixed && !(fixed_lr > 0.0))
      throw ConfigError("TrainConfig: fixed_lr must be > 0");
  }
};

// One evaluation row: per-target MSEs always, synthesis metrics when mel
// ground truth is available. Metrics that could not be computed keep their
// has_* flag false and say why.
struct EvalReport {
  std::string variant;
  bool gt_ped = false;
  std::int64_t step = 0;
  index_t utterances = 0;

  double pitch_mse = 0.0;
  double energy_mse = 0.0;
  double duration_mse = 0.0;  // log-domain, matching the training loss

  bool has_mcd = false;
  double mcd = 0.0;
  bool has_log_f0 = false;
  double log_f0_rmse = 0.0;
  std::string log_f0_skip_reason;

  void validate() const {
    for (const double v : {pitch_mse, energy_mse, duration_mse, mcd,
                           log_f0_rmse}) {
      if (!std::isfinite(v) || v < 0.0)
        throw EvaluationError("EvalReport: metric not finite and >= 0");
    }
  }
};

// One optimization step: named loss terms in a fixed order plus their sum.
struct StepRecord {
  std::int64_t step = 0;
  double total = 0.0;
  std::vector<std::pair<std::string, double>> terms;
  double lr = 0.0;
  double wall_ms = 0.0;
};

struct TrainHistory {
  std::vector<StepRecord> steps;
  std::vector<EvalReport> evals;

  double final_total() const {
    if (steps.empty()) throw UsageError("TrainHistory: no steps recorded");
    return steps.back().total;
  }
};

}  // namespace prosofuse

#endif  // PROSOFUSE_TRAINER_CONFIG_HPP_

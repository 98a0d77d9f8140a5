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

#ifndef PROSOFUSE_TRAINER_TRAINER_HPP_
#define PROSOFUSE_TRAINER_TRAINER_HPP_

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "prosofuse/adam.hpp"
#include "prosofuse/common.hpp"
#include "prosofuse/model/checkpoint.hpp"
#include "prosofuse/model/ffnn.hpp"
#include "prosofuse/model/tts.hpp"
#include "prosofuse/trainer/batch.hpp"
#include "prosofuse/trainer/config.hpp"
#include "prosofuse/trainer/dataset.hpp"
#include "prosofuse/trainer/eval.hpp"
#include "prosofuse/trainer/schedule.hpp"

namespace prosofuse {

using EvalFn = std::function<EvalReport(std::int64_t step)>;

namespace trainer_detail {

// Shared optimization loop. Everything that makes a run reproducible lives
// here: batch composition and the dropout stream are pure functions of
// (seed, step), so a run resumed from a checkpoint at step k replays steps
// k+1..max exactly as the uninterrupted run would. `run_batch` does the
// forward/backward work for one batch and accumulates gradients scaled by
// 1/batch, so one Adam step applies the mean of per-utterance losses.
//
// Steps are counted by the optimizer: entry at adam.step_count(), exit at
// max_steps. A checkpoint already at max_steps trains zero steps.
template <typename Real, typename BatchFn, typename SaveFn, typename IdFn>
TrainHistory train_loop(const TrainConfig& cfg, index_t n, index_t d_model,
                        const ParamRefs<Real>& params, AdamState<Real>& adam,
                        BatchFn&& run_batch, SaveFn&& save, IdFn&& id_of,
                        const EvalFn& eval_fn) {
  cfg.validate();
  if (n < 1) throw ArgumentError("train: empty dataset");
  const std::int64_t start = adam.step_count();
  std::ofstream log;
  if (!cfg.log_path.empty()) {
    log.open(cfg.log_path, start == 0 ? std::ios::trunc : std::ios::app);
    if (!log) throw IoError("cannot open training log " + cfg.log_path);
  }
  for (const auto& [name, p] : params) p->zero_grad();

  TrainHistory hist;
  for (std::int64_t s = start; s < cfg.max_steps; ++s) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto batch = batch_for_step(cfg.seed, s, n, cfg.batch_size);
    const auto batch_ids = [&] {
      std::string ids;
      for (const index_t bi : batch) {
        if (!ids.empty()) ids += ", ";
        ids += id_of(bi);
      }
      return ids;
    };
    RngState rng = RngState::derive(
        cfg.seed, kStreamStepBase + static_cast<std::uint64_t>(s));
    const double lr = cfg.lr_mode == LrMode::kFixed
                          ? cfg.fixed_lr
                          : lr_schedule(s + 1, d_model, cfg.warmup);
    adam.set_lr(static_cast<Real>(lr));

    StepRecord rec;
    try {
      rec = run_batch(batch, rng);
    } catch (const EvaluationError& e) {
      // checked-mode matmul scans trip on non-finite activations before any
      // loss exists; keep the diagnosis but name the step and batch
      throw EvaluationError(std::string(e.what()) + " at step " +
                            std::to_string(s + 1) + " (batch: " + batch_ids() +
                            ")");
    }
    rec.step = s + 1;
    rec.lr = lr;
    bool finite = std::isfinite(rec.total);
    for (const auto& [key, v] : rec.terms) finite = finite && std::isfinite(v);
    if (!finite) {
      throw EvaluationError("train: non-finite loss at step " +
                            std::to_string(s + 1) + " (batch: " + batch_ids() +
                            ")");
    }
    adam.step(params);
    rec.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    if (log.is_open()) {
      nlohmann::ordered_json line;
      line["step"] = rec.step;
      for (const auto& [key, v] : rec.terms) line[key] = v;
      line["total"] = rec.total;
      line["lr"] = rec.lr;
      log << line.dump() << "\n";
    }
    hist.steps.push_back(std::move(rec));
    if (eval_fn && cfg.eval_every > 0 && (s + 1) % cfg.eval_every == 0) {
      hist.evals.push_back(eval_fn(s + 1));
    }
  }
  if (log.is_open()) log.flush();
  if (!cfg.checkpoint_path.empty()) save(cfg.checkpoint_path);
  return hist;
}

}  // namespace trainer_detail

// Regressor training: per-utterance MSE of (pitch, energy) rows against the
// chunk-averaged targets, averaged over the batch.
template <typename Real>
TrainHistory train_ffnn(Ffnn<Real>& model, AdamState<Real>& adam,
                        const std::vector<FfnnExample<Real>>& examples,
                        const TrainConfig& cfg, const EvalFn& eval_fn = {}) {
  const ParamRefs<Real> params = model.params();
  auto run_batch = [&](const std::vector<index_t>& batch, RngState& rng) {
    const double inv_b = 1.0 / static_cast<double>(batch.size());
    StepRecord rec;
    for (const index_t bi : batch) {
      const auto& ex = examples[static_cast<std::size_t>(bi)];
      const auto out = model.forward(ex.visual, rng, true);
      const double loss = trainer_detail::mat_mse(out, ex.target);
      rec.total += loss * inv_b;
      if (!std::isfinite(loss)) return rec;  // loop aborts; skip backward
      model.backward(trainer_detail::mat_mse_grad(out, ex.target, inv_b));
    }
    return rec;
  };
  auto save = [&](const std::string& path) {
    save_checkpoint(path, params, &adam, model.config_hash());
  };
  auto id_of = [&](index_t i) -> const std::string& {
    return examples[static_cast<std::size_t>(i)].id;
  };
  return trainer_detail::train_loop(cfg,
                                    static_cast<index_t>(examples.size()),
                                    model.feature_dim(), params, adam,
                                    run_batch, save, id_of, eval_fn);
}

// Prosody-predictor training with the decoder detached: pitch, energy and
// log-duration MSEs flow back through the predictors, fusion and encoders
// only. The decoder and the embedding/length-regulation stages take no
// gradient, so this isolates the predictor comparison across variants.
template <typename Real>
TrainHistory train_ped(TtsModel<Real>& model, AdamState<Real>& adam,
                       const std::vector<SeqExample<Real>>& examples,
                       const TrainConfig& cfg, const EvalFn& eval_fn = {}) {
  const ParamRefs<Real> params = model.params();
  auto run_batch = [&](const std::vector<index_t>& batch, RngState& rng) {
    const double inv_b = 1.0 / static_cast<double>(batch.size());
    StepRecord rec;
    double pitch = 0.0, energy = 0.0, duration = 0.0;
    for (const index_t bi : batch) {
      const auto& ex = examples[static_cast<std::size_t>(bi)];
      const Mat<Real>* vis = ex.visual.size() > 0 ? &ex.visual : nullptr;
      const auto ped = model.run_ped(ex.phones, vis, rng, true);
      const double l_p = trainer_detail::mat_mse(ped.pitch, ex.pitch_t);
      const double l_e = trainer_detail::mat_mse(ped.energy, ex.energy_t);
      const double l_d = trainer_detail::mat_mse(ped.log_duration, ex.logdur_t);
      pitch += l_p * inv_b;
      energy += l_e * inv_b;
      duration += l_d * inv_b;
      if (!std::isfinite(l_p + l_e + l_d)) break;  // loop aborts; skip backward
      model.backward_ped(
          trainer_detail::mat_mse_grad(ped.pitch, ex.pitch_t, inv_b),
          trainer_detail::mat_mse_grad(ped.energy, ex.energy_t, inv_b),
          trainer_detail::mat_mse_grad(ped.log_duration, ex.logdur_t, inv_b));
    }
    rec.terms = {{"pitch", pitch}, {"energy", energy}, {"duration", duration}};
    rec.total = pitch + energy + duration;
    return rec;
  };
  auto save = [&](const std::string& path) {
    save_checkpoint(path, params, &adam, model.config().hash());
  };
  auto id_of = [&](index_t i) -> const std::string& {
    return examples[static_cast<std::size_t>(i)].id;
  };
  return trainer_detail::train_loop(cfg,
                                    static_cast<index_t>(examples.size()),
                                    model.config().d_model, params, adam,
                                    run_batch, save, id_of, eval_fn);
}

// Full synthesis training: teacher-forced durations align the decoded mel
// with the target, and the total is the unweighted sum of mel, pitch,
// energy and log-duration MSEs.
template <typename Real>
TrainHistory train_tts(TtsModel<Real>& model, AdamState<Real>& adam,
                       const std::vector<SeqExample<Real>>& examples,
                       const TrainConfig& cfg, const EvalFn& eval_fn = {}) {
  for (const auto& ex : examples) {
    if (ex.mel.size() == 0)
      throw UsageError("train_tts: example " + ex.id + " has no mel target");
  }
  const ParamRefs<Real> params = model.params();
  auto run_batch = [&](const std::vector<index_t>& batch, RngState& rng) {
    const double inv_b = 1.0 / static_cast<double>(batch.size());
    StepRecord rec;
    double mel = 0.0, pitch = 0.0, energy = 0.0, duration = 0.0;
    for (const index_t bi : batch) {
      const auto& ex = examples[static_cast<std::size_t>(bi)];
      const Mat<Real>* vis = ex.visual.size() > 0 ? &ex.visual : nullptr;
      auto fwd = model.run_tts(ex.phones, vis, &ex.targets, rng, true, false);
      const double l_m = trainer_detail::mat_mse(fwd.mel, ex.mel);
      const double l_p = trainer_detail::mat_mse(fwd.ped.pitch, ex.pitch_t);
      const double l_e = trainer_detail::mat_mse(fwd.ped.energy, ex.energy_t);
      const double l_d =
          trainer_detail::mat_mse(fwd.ped.log_duration, ex.logdur_t);
      mel += l_m * inv_b;
      pitch += l_p * inv_b;
      energy += l_e * inv_b;
      duration += l_d * inv_b;
      if (!std::isfinite(l_m + l_p + l_e + l_d)) break;
      model.backward_tts(
          trainer_detail::mat_mse_grad(fwd.mel, ex.mel, inv_b),
          trainer_detail::mat_mse_grad(fwd.ped.pitch, ex.pitch_t, inv_b),
          trainer_detail::mat_mse_grad(fwd.ped.energy, ex.energy_t, inv_b),
          trainer_detail::mat_mse_grad(fwd.ped.log_duration, ex.logdur_t,
                                       inv_b));
    }
    rec.terms = {{"mel", mel},
                 {"pitch", pitch},
                 {"energy", energy},
                 {"duration", duration}};
    rec.total = mel + pitch + energy + duration;
    return rec;
  };
  auto save = [&](const std::string& path) {
    save_checkpoint(path, params, &adam, model.config().hash());
  };
  auto id_of = [&](index_t i) -> const std::string& {
    return examples[static_cast<std::size_t>(i)].id;
  };
  return trainer_detail::train_loop(cfg,
                                    static_cast<index_t>(examples.size()),
                                    model.config().d_model, params, adam,
                                    run_batch, save, id_of, eval_fn);
}

}  // namespace prosofuse

#endif  // PROSOFUSE_TRAINER_TRAINER_HPP_

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

#ifndef PROSOFUSE_MODEL_GRADSUITE_HPP_
#define PROSOFUSE_MODEL_GRADSUITE_HPP_

#include <string>
#include <vector>

#include "prosofuse/gradcheck.hpp"
#include "prosofuse/matrix.hpp"
#include "prosofuse/model/config.hpp"
#include "prosofuse/model/ffnn.hpp"
#include "prosofuse/model/tts.hpp"
#include "prosofuse/rng.hpp"

namespace prosofuse {

// Losses here sit around 1e1, so one ulp of loss difference across the
// central difference is roughly 1e-10; the error floor must sit above that
// or exactly-flat directions (softmax key biases) read as failures.
inline constexpr double kSuiteFloor = 1e-5;

// Default seed for the suite. Finite differences assume local smoothness;
// a seed whose forward pass parks a ReLU row entirely at zero puts the
// following LayerNorm on the kink of sqrt(variance) and the comparison
// stops meaning anything. This seed was verified clean for every case.
inline constexpr uint64_t kSuiteSeed = 7;

struct GradCaseResult {
  std::string name;
  double max_rel = 0.0;
  std::string worst_param;
  bool pass = false;
};

namespace gradsuite_detail {

inline ModelConfig tiny_config(Variant variant) {
  ModelConfig cfg;
  cfg.d_model = 8;
  cfg.heads = 2;
  cfg.encoder_layers = 1;
  cfg.decoder_layers = 1;
  cfg.conv_kernel = 3;
  cfg.ffn_hidden = 8;
  cfg.encoder_dropout = 0.0;
  cfg.fusion_ffn_hidden = 8;
  cfg.fusion_dropout = 0.0;
  cfg.predictor_kernel = 3;
  cfg.predictor_hidden = 6;
  cfg.predictor_dropout = 0.0;
  cfg.quant_bins = 16;
  cfg.mel_bins = 5;
  cfg.visual_dim = 4;
  cfg.vocab = 7;
  cfg.variant = variant;
  return cfg;
}

// Mean-squared error against a fixed target, with its input gradient.
inline double mse_to(const Mat<double>& pred, const Mat<double>& target) {
  auto diff = sub(pred, target);
  double s = 0.0;
  for (index_t i = 0; i < diff.size(); ++i) s += diff.data()[i] * diff.data()[i];
  return s / static_cast<double>(diff.size());
}

inline Mat<double> mse_grad(const Mat<double>& pred, const Mat<double>& target) {
  auto g = sub(pred, target);
  scale_inplace(g, 2.0 / static_cast<double>(g.size()));
  return g;
}

}  // namespace gradsuite_detail

// Full-pass finite-difference check for one variant: total loss is the sum
// of mel, pitch, energy and log-duration MSE terms against fixed random
// targets, teacher-forced durations, dropout off (eval mode) so the
// objective is deterministic.
inline GradCaseResult grad_check_variant(Variant variant, uint64_t seed,
                                         double tolerance = 1e-4) {
  namespace gd = gradsuite_detail;
  const ModelConfig cfg = gd::tiny_config(variant);
  TtsModel<double> model(cfg, seed);

  RngState data_rng = RngState::derive(seed, 0xDA7A);
  const std::vector<index_t> phones = {1, 4, 2, 6};
  const index_t L = static_cast<index_t>(phones.size());
  PedTargets<double> targets;
  targets.durations = {1, 2, 1, 3};
  index_t total_frames = 0;
  for (index_t d : targets.durations) total_frames += d;
  for (index_t i = 0; i < L; ++i) {
    targets.pitch.push_back(data_rng.normal());
    targets.energy.push_back(data_rng.normal());
  }
  const auto visual =
      Mat<double>::random_normal(3, cfg.visual_dim, 1.0, data_rng);
  const auto mel_target =
      Mat<double>::random_normal(total_frames, cfg.mel_bins, 1.0, data_rng);
  Mat<double> pitch_target(L, 1), energy_target(L, 1), logdur_target(L, 1);
  for (index_t i = 0; i < L; ++i) {
    pitch_target(i, 0) = targets.pitch[static_cast<size_t>(i)];
    energy_target(i, 0) = targets.energy[static_cast<size_t>(i)];
    logdur_target(i, 0) =
        std::log(static_cast<double>(targets.durations[static_cast<size_t>(i)]));
  }

  auto params = model.params();
  RngState fwd_rng = RngState::derive(seed, 0xF0);
  auto loss_fn = [&]() {
    RngState rng = fwd_rng;
    // Training mode teacher-forces durations; every dropout rate in the
    // tiny config is zero, so the objective stays deterministic. gt_ped
    // keeps the embedding bins pinned to the constant targets: bins derived
    // from predictions are a step function of the parameters, and a
    // prediction near a bin edge would turn the finite difference into a
    // measurement of the jump. The predicted-bin path carries no gradient
    // by construction, so the check loses nothing.
    auto out = model.run_tts(phones, &visual, &targets, rng, true, true);
    double loss = gd::mse_to(out.mel, mel_target);
    loss += gd::mse_to(out.ped.pitch, pitch_target);
    loss += gd::mse_to(out.ped.energy, energy_target);
    loss += gd::mse_to(out.ped.log_duration, logdur_target);
    return loss;
  };
  auto grad_fn = [&]() {
    model.zero_grads();
    RngState rng = fwd_rng;
    auto out = model.run_tts(phones, &visual, &targets, rng, true, true);
    model.backward_tts(gd::mse_grad(out.mel, mel_target),
                       gd::mse_grad(out.ped.pitch, pitch_target),
                       gd::mse_grad(out.ped.energy, energy_target),
                       gd::mse_grad(out.ped.log_duration, logdur_target));
  };

  GradCaseResult res;
  res.name = std::string("tts_") + variant_name(variant);
  res.max_rel = grad_check<double>(params, loss_fn, grad_fn, 1e-5,
                                   &res.worst_param, kSuiteFloor);
  res.pass = res.max_rel < tolerance;
  return res;
}

inline GradCaseResult grad_check_ffnn(uint64_t seed, double tolerance = 1e-4) {
  namespace gd = gradsuite_detail;
  RngState init_rng = RngState::derive(seed, 0xFF);
  Ffnn<double> net(4, init_rng, 6, 0.0);
  RngState data_rng = RngState::derive(seed, 0xDA7A);
  const auto input = Mat<double>::random_normal(5, 4, 1.0, data_rng);
  const auto target = Mat<double>::random_normal(5, 2, 1.0, data_rng);
  auto params = net.params();
  RngState fwd_rng = RngState::derive(seed, 0xF0);
  auto loss_fn = [&]() {
    RngState rng = fwd_rng;
    return gd::mse_to(net.forward(input, rng, false), target);
  };
  auto grad_fn = [&]() {
    for (auto& [name, p] : params) p->zero_grad();
    RngState rng = fwd_rng;
    auto out = net.forward(input, rng, false);
    net.backward(gd::mse_grad(out, target));
  };
  GradCaseResult res;
  res.name = "ffnn";
  res.max_rel = grad_check<double>(params, loss_fn, grad_fn, 1e-5,
                                   &res.worst_param, kSuiteFloor);
  res.pass = res.max_rel < tolerance;
  return res;
}

// The suite behind the acceptance gradient criterion and the gradcheck
// command: every trainable path at tiny shapes in double precision.
inline std::vector<GradCaseResult> run_gradient_suite(uint64_t seed,
                                                      double tolerance = 1e-4) {
  std::vector<GradCaseResult> results;
  results.push_back(grad_check_variant(Variant::kTextOnly, seed, tolerance));
  results.push_back(grad_check_variant(Variant::kPoolFusion, seed, tolerance));
  results.push_back(
      grad_check_variant(Variant::kCrossAttnFusion, seed, tolerance));
  results.push_back(grad_check_ffnn(seed, tolerance));
  return results;
}

}  // namespace prosofuse

#endif  // PROSOFUSE_MODEL_GRADSUITE_HPP_

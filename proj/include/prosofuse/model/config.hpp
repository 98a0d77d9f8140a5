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

#ifndef PROSOFUSE_MODEL_CONFIG_HPP_
#define PROSOFUSE_MODEL_CONFIG_HPP_

#include <cstdint>
#include <sstream>
#include <string>

#include "prosofuse/common.hpp"

namespace prosofuse {

enum class Variant { kTextOnly, kPoolFusion, kCrossAttnFusion };

inline const char* variant_name(Variant v) {
  switch (v) {
    case Variant::kTextOnly: return "text_only";
    case Variant::kPoolFusion: return "pool_fusion";
    case Variant::kCrossAttnFusion: return "cross_attn_fusion";
  }
  throw InternalError("unknown variant");
}

inline Variant variant_from(const std::string& name) {
  if (name == "text_only") return Variant::kTextOnly;
  if (name == "pool_fusion") return Variant::kPoolFusion;
  if (name == "cross_attn_fusion") return Variant::kCrossAttnFusion;
  throw ArgumentError("unknown variant: " + name);
}

struct ModelConfig {
  index_t d_model = 256;
  index_t heads = 2;
  index_t encoder_layers = 4;
  index_t decoder_layers = 4;
  index_t conv_kernel = 9;       // first conv of each block's conv FFN
  index_t ffn_hidden = 1024;
  double encoder_dropout = 0.1;
  index_t fusion_ffn_hidden = 256;
  double fusion_dropout = 0.2;
  index_t predictor_kernel = 3;
  index_t predictor_hidden = 256;
  double predictor_dropout = 0.5;
  index_t quant_bins = 256;      // pitch/energy embedding bins over [-4, 4]
  index_t mel_bins = 80;
  index_t visual_dim = 16;       // d_f
  index_t vocab = 0;             // phoneme inventory size; must be set
  Variant variant = Variant::kCrossAttnFusion;

  void validate() const {
    if (d_model < 1 || heads < 1 || d_model % heads != 0)
      throw ConfigError("d_model must be a positive multiple of heads");
    if (d_model % 2 != 0)
      throw ConfigError("d_model must be even for sinusoidal positions");
    if (encoder_layers < 1 || decoder_layers < 1)
      throw ConfigError("need at least one encoder and decoder layer");
    if (conv_kernel < 1 || conv_kernel % 2 == 0)
      throw ConfigError("conv_kernel must be odd");
    if (predictor_kernel < 1 || predictor_kernel % 2 == 0)
      throw ConfigError("predictor_kernel must be odd");
    if (ffn_hidden < 1 || fusion_ffn_hidden < 1 || predictor_hidden < 1)
      throw ConfigError("hidden sizes must be positive");
    if (quant_bins < 2) throw ConfigError("quant_bins must be >= 2");
    if (mel_bins < 1) throw ConfigError("mel_bins must be positive");
    if (visual_dim < 1) throw ConfigError("visual_dim must be positive");
    if (vocab < 1) throw ConfigError("vocab must be set");
    for (const double rate :
         {encoder_dropout, fusion_dropout, predictor_dropout})
      if (rate < 0.0 || rate >= 1.0)
        throw ConfigError("dropout rates must lie in [0, 1)");
  }

  // Fingerprint of everything that shapes the parameter set; stored in
  // checkpoints so mismatched loads are refused.
  uint32_t hash() const {
    std::ostringstream os;
    os << d_model << '|' << heads << '|' << encoder_layers << '|'
       << decoder_layers << '|' << conv_kernel << '|' << ffn_hidden << '|'
       << fusion_ffn_hidden << '|' << predictor_kernel << '|'
       << predictor_hidden << '|' << quant_bins << '|' << mel_bins << '|'
       << visual_dim << '|' << vocab << '|' << variant_name(variant);
    return fnv1a32(os.str());
  }
};

// Linear binning of a normalized value over [-4, 4]: -4 -> 0, 0 -> 128
// (half-up), 4 -> bins-1, clamped outside the range.
inline index_t quantize_bin(double x, index_t bins) {
  const auto raw = std::llround((x + 4.0) / 8.0 * (bins - 1));
  if (raw < 0) return 0;
  if (raw >= bins) return bins - 1;
  return static_cast<index_t>(raw);
}

}  // namespace prosofuse

#endif  // PROSOFUSE_MODEL_CONFIG_HPP_

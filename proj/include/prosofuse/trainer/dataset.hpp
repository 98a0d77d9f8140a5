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

#ifndef PROSOFUSE_TRAINER_DATASET_HPP_
#define PROSOFUSE_TRAINER_DATASET_HPP_

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "prosofuse/common.hpp"
#include "prosofuse/data/manifest.hpp"
#include "prosofuse/dsp/contour.hpp"
#include "prosofuse/matrix.hpp"
#include "prosofuse/model/adaptor.hpp"

namespace prosofuse {

// Phone-string to id mapping, built as the sorted set of phones over the
// whole manifest (not a single split, so validation phones are always
// covered). Sorting makes ids reproducible across runs and processes.
class PhoneVocab {
 public:
  static PhoneVocab from_manifest(const Manifest& m) {
    std::set<std::string> seen;
    for (const auto& r : m.records) seen.insert(r.phones.begin(), r.phones.end());
    PhoneVocab v;
    v.names_.assign(seen.begin(), seen.end());
    for (index_t i = 0; i < static_cast<index_t>(v.names_.size()); ++i)
      v.ids_[v.names_[static_cast<std::size_t>(i)]] = i;
    return v;
  }

  index_t id_of(const std::string& phone) const {
    const auto it = ids_.find(phone);
    if (it == ids_.end()) throw VocabError("unknown phone: " + phone);
    return it->second;
  }

  index_t size() const { return static_cast<index_t>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::map<std::string, index_t> ids_;
};

namespace trainer_detail {

template <typename Real>
Mat<Real> widen(const Mat<float>& a) {
  Mat<Real> out(a.rows(), a.cols());
  for (index_t i = 0; i < a.size(); ++i)
    out.data()[i] = static_cast<Real>(a.data()[i]);
  return out;
}

template <typename Real>
Mat<Real> col_mat(const std::vector<Real>& v) {
  Mat<Real> out(static_cast<index_t>(v.size()), 1);
  for (index_t i = 0; i < out.rows(); ++i)
    out(i, 0) = v[static_cast<std::size_t>(i)];
  return out;
}

}  // namespace trainer_detail

// One regressor training pair: visual frames and the per-frame
// (pitch, energy) targets obtained by chunk-averaging the phone-level
// contours down to the visual frame count.
template <typename Real>
struct FfnnExample {
  std::string id;
  Mat<Real> visual;  // n x d_f
  Mat<Real> target;  // n x 2, columns pitch then energy
};

// One sequence-model training example. `visual` stays 0x0 for text-only
// runs and `mel` stays 0x0 unless the decoder is trained. The *_t matrices
// cache the loss targets (duration in the log domain) so the training loop
// does no per-step conversion.
template <typename Real>
struct SeqExample {
  std::string id;
  std::vector<index_t> phones;
  PedTargets<Real> targets;
  Mat<Real> pitch_t;   // L x 1
  Mat<Real> energy_t;  // L x 1
  Mat<Real> logdur_t;  // L x 1
  Mat<Real> visual;
  Mat<Real> mel;
};

template <typename Real>
std::vector<FfnnExample<Real>> make_ffnn_examples(const Manifest& m,
                                                  const std::string& split) {
  std::vector<FfnnExample<Real>> out;
  for (const UtteranceRecord* r : m.split_view(split)) {
    FfnnExample<Real> ex;
    ex.id = r->id;
    ex.visual = trainer_detail::widen<Real>(load_visual(*r));
    const index_t n = ex.visual.rows();
    const index_t t = r->phone_count();
    if (n < 1 || n > t)
      throw AlignmentError("record " + r->id + ": " + std::to_string(n) +
                           " visual frames for " + std::to_string(t) +
                           " phones");
    const auto pitch = downsample_average(r->pitch, n);
    const auto energy = downsample_average(r->energy, n);
    ex.target = Mat<Real>(n, 2);
    for (index_t i = 0; i < n; ++i) {
      ex.target(i, 0) = static_cast<Real>(pitch[static_cast<std::size_t>(i)]);
      ex.target(i, 1) = static_cast<Real>(energy[static_cast<std::size_t>(i)]);
    }
    out.push_back(std::move(ex));
  }
  return out;
}

template <typename Real>
std::vector<SeqExample<Real>> make_seq_examples(const Manifest& m,
                                                const std::string& split,
                                                const PhoneVocab& vocab,
                                                bool need_visual,
                                                bool need_mel) {
  std::vector<SeqExample<Real>> out;
  for (const UtteranceRecord* r : m.split_view(split)) {
    SeqExample<Real> ex;
    ex.id = r->id;
    ex.phones.reserve(r->phones.size());
    for (const auto& p : r->phones) ex.phones.push_back(vocab.id_of(p));
    ex.targets.durations = r->durations;
    ex.targets.pitch.reserve(r->pitch.size());
    for (const double v : r->pitch)
      ex.targets.pitch.push_back(static_cast<Real>(v));
    ex.targets.energy.reserve(r->energy.size());
    for (const double v : r->energy)
      ex.targets.energy.push_back(static_cast<Real>(v));
    ex.pitch_t = trainer_detail::col_mat(ex.targets.pitch);
    ex.energy_t = trainer_detail::col_mat(ex.targets.energy);
    ex.logdur_t = Mat<Real>(r->phone_count(), 1);
    for (index_t i = 0; i < r->phone_count(); ++i)
      ex.logdur_t(i, 0) = static_cast<Real>(
          std::log(static_cast<double>(r->durations[static_cast<std::size_t>(i)])));
    if (need_visual) ex.visual = trainer_detail::widen<Real>(load_visual(*r));
    if (need_mel) {
      ex.mel = trainer_detail::widen<Real>(load_mel(*r));
      if (ex.mel.rows() != r->total_frames())
        throw AlignmentError("record " + r->id + ": mel has " +
                             std::to_string(ex.mel.rows()) + " frames, durations sum to " +
                             std::to_string(r->total_frames()));
    }
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace prosofuse

#endif  // PROSOFUSE_TRAINER_DATASET_HPP_

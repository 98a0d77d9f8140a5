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
//
// Checkpoint container. Layout, all little-endian:
//
//   "PSFZ1"
//   u32 tensor count
//   per tensor: u16 name length, UTF-8 name, u8 ndims, u32 per dim, f32 data
//   u32 config hash
//
// Model weights are stored under their registration names. Optimizer state
// rides along as extra tensors: "adam.m.<name>", "adam.v.<name>" and the
// 1x1 "adam.step". Values pass through float32, so a double-precision model
// does not round-trip bit-exactly; float models do, and resume works for
// both. Writes go to "<path>.tmp" and rename into place.

#ifndef PROSOFUSE_MODEL_CHECKPOINT_HPP_
#define PROSOFUSE_MODEL_CHECKPOINT_HPP_

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "prosofuse/adam.hpp"
#include "prosofuse/common.hpp"
#include "prosofuse/layers.hpp"
#include "prosofuse/matrix.hpp"

namespace prosofuse {
namespace checkpoint_detail {

inline constexpr char kMagic[5] = {'P', 'S', 'F', 'Z', '1'};

template <typename T>
void put(std::string& out, T v) {
  static_assert(std::endian::native == std::endian::little,
                "little-endian host required");
  out.append(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename Real>
void put_tensor(std::string& out, const std::string& name,
                const Mat<Real>& m) {
  if (name.size() > 0xFFFF) throw InternalError("checkpoint: name too long");
  put<uint16_t>(out, static_cast<uint16_t>(name.size()));
  out.append(name);
  put<uint8_t>(out, 2);
  put<uint32_t>(out, static_cast<uint32_t>(m.rows()));
  put<uint32_t>(out, static_cast<uint32_t>(m.cols()));
  for (index_t i = 0; i < m.size(); ++i) {
    put<float>(out, static_cast<float>(m.data()[i]));
  }
}

class Reader {
 public:
  Reader(const std::string& bytes, const std::string& path)
      : bytes_(bytes), path_(path) {}

  template <typename T>
  T get() {
    if (pos_ + sizeof(T) > bytes_.size()) {
      throw CorruptionError("checkpoint " + path_ + ": truncated");
    }
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }

  std::string get_str(size_t n) {
    if (pos_ + n > bytes_.size()) {
      throw CorruptionError("checkpoint " + path_ + ": truncated");
    }
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  size_t pos() const { return pos_; }
  size_t remaining() const { return bytes_.size() - pos_; }

 private:
  const std::string& bytes_;
  std::string path_;
  size_t pos_ = 0;
};

}  // namespace checkpoint_detail

// Snapshot of a checkpoint file as named float matrices.
struct CheckpointData {
  std::vector<std::pair<std::string, Mat<float>>> tensors;
  uint32_t config_hash = 0;

  const Mat<float>* find(const std::string& name) const {
    for (const auto& [n, m] : tensors) {
      if (n == name) return &m;
    }
    return nullptr;
  }
};

inline void write_checkpoint_file(const std::string& path,
                                  const std::string& payload) {
  namespace fs = std::filesystem;
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp);
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out) throw IoError("short write to " + tmp);
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp + " to " + path);
}

template <typename Real>
void save_checkpoint(const std::string& path, const ParamRefs<Real>& params,
                     const AdamState<Real>* adam, uint32_t config_hash) {
  namespace cd = checkpoint_detail;
  std::string out;
  out.append(cd::kMagic, sizeof(cd::kMagic));
  uint32_t count = static_cast<uint32_t>(params.size());
  if (adam != nullptr) {
    count += static_cast<uint32_t>(2 * params.size()) + 1;
  }
  cd::put<uint32_t>(out, count);
  for (const auto& [name, p] : params) {
    cd::put_tensor(out, name, p->value);
  }
  if (adam != nullptr) {
    for (size_t k = 0; k < params.size(); ++k) {
      cd::put_tensor(out, "adam.m." + params[k].first,
                     adam->first_moments()[k]);
    }
    for (size_t k = 0; k < params.size(); ++k) {
      cd::put_tensor(out, "adam.v." + params[k].first,
                     adam->second_moments()[k]);
    }
    Mat<Real> step(1, 1);
    step(0, 0) = static_cast<Real>(adam->step_count());
    cd::put_tensor(out, "adam.step", step);
  }
  cd::put<uint32_t>(out, config_hash);
  write_checkpoint_file(path, out);
}

inline CheckpointData read_checkpoint(const std::string& path) {
  namespace cd = checkpoint_detail;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  cd::Reader r(bytes, path);
  if (r.get_str(sizeof(cd::kMagic)) !=
      std::string(cd::kMagic, sizeof(cd::kMagic))) {
    throw FormatError("checkpoint " + path + ": bad magic");
  }
  const uint32_t count = r.get<uint32_t>();
  CheckpointData data;
  data.tensors.reserve(count);
  for (uint32_t t = 0; t < count; ++t) {
    const uint16_t name_len = r.get<uint16_t>();
    std::string name = r.get_str(name_len);
    const uint8_t ndims = r.get<uint8_t>();
    if (ndims != 2) {
      throw FormatError("checkpoint " + path + ": tensor " + name +
                        " has unsupported rank");
    }
    const uint32_t rows = r.get<uint32_t>();
    const uint32_t cols = r.get<uint32_t>();
    if (static_cast<uint64_t>(rows) * cols > (1u << 31)) {
      throw CorruptionError("checkpoint " + path + ": absurd tensor size");
    }
    Mat<float> m(static_cast<index_t>(rows), static_cast<index_t>(cols));
    for (index_t i = 0; i < m.size(); ++i) m.data()[i] = r.get<float>();
    data.tensors.emplace_back(std::move(name), std::move(m));
  }
  data.config_hash = r.get<uint32_t>();
  if (r.remaining() != 0) {
    throw CorruptionError("checkpoint " + path + ": trailing bytes");
  }
  return data;
}

// Restores parameter values (and optimizer state when present in both file
// and call) from a checkpoint. The config hash must match; shape or name
// mismatches are corruption.
template <typename Real>
void load_checkpoint(const std::string& path, const ParamRefs<Real>& params,
                     AdamState<Real>* adam, uint32_t config_hash) {
  CheckpointData data = read_checkpoint(path);
  if (data.config_hash != config_hash) {
    throw ConfigError("checkpoint " + path +
                      ": config hash mismatch (file was written for a "
                      "different configuration)");
  }
  auto fetch = [&](const std::string& name, Mat<Real>& dst) {
    const Mat<float>* src = data.find(name);
    if (src == nullptr) {
      throw CorruptionError("checkpoint " + path + ": missing tensor " + name);
    }
    if (src->rows() != dst.rows() || src->cols() != dst.cols()) {
      throw CorruptionError("checkpoint " + path + ": tensor " + name +
                            " is " + src->shape_str() + ", expected " +
                            dst.shape_str());
    }
    for (index_t i = 0; i < dst.size(); ++i) {
      dst.data()[i] = static_cast<Real>(src->data()[i]);
    }
  };
  for (const auto& [name, p] : params) {
    fetch(name, p->value);
    p->zero_grad();
  }
  if (adam != nullptr) {
    if (data.find("adam.step") == nullptr) {
      throw CorruptionError("checkpoint " + path + ": no optimizer state");
    }
    for (size_t k = 0; k < params.size(); ++k) {
      fetch("adam.m." + params[k].first, adam->first_moments()[k]);
      fetch("adam.v." + params[k].first, adam->second_moments()[k]);
    }
    Mat<Real> step(1, 1);
    fetch("adam.step", step);
    adam->set_step_count(static_cast<std::int64_t>(step(0, 0)));
  }
}

}  // namespace prosofuse

#endif  // PROSOFUSE_MODEL_CHECKPOINT_HPP_

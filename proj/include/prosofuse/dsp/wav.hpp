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

#ifndef PROSOFUSE_DSP_WAV_HPP_
#define PROSOFUSE_DSP_WAV_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "prosofuse/common.hpp"
#include "prosofuse/dsp/config.hpp"

namespace prosofuse {

namespace wav_detail {

inline uint16_t read_u16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

inline uint32_t read_u32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

inline void write_u16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v & 0xff));
  out.push_back(static_cast<uint8_t>(v >> 8));
}

inline void write_u32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<uint8_t>((v >> (8 * i)) & 0xff));
}

}  // namespace wav_detail

// Reads a RIFF/WAVE file holding 16-bit integer PCM or 32-bit float samples.
// Multichannel audio is averaged down to mono.
template <typename Real>
Waveform<Real> read_wav(const std::string& path) {
  using namespace wav_detail;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open wav file: " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw FormatError("not a RIFF/WAVE file: " + path);

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  bool have_fmt = false;
  const uint8_t* data = nullptr;
  uint32_t data_size = 0;

  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
    const uint32_t size = read_u32(bytes.data() + pos + 4);
    pos += 8;
    if (pos + size > bytes.size())
      throw FormatError("truncated chunk in wav file: " + path);
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (size < 16) throw FormatError("fmt chunk too small: " + path);
      format = read_u16(bytes.data() + pos);
      channels = read_u16(bytes.data() + pos + 2);
      rate = read_u32(bytes.data() + pos + 4);
      bits = read_u16(bytes.data() + pos + 14);
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data = bytes.data() + pos;
      data_size = size;
    }
    pos += size + (size & 1);  // chunks are word-aligned
  }

  if (!have_fmt || data == nullptr)
    throw FormatError("missing fmt or data chunk: " + path);
  if (channels == 0) throw FormatError("zero channels: " + path);
  const bool pcm16 = format == 1 && bits == 16;
  const bool f32 = format == 3 && bits == 32;
  if (!pcm16 && !f32)
    throw FormatError("unsupported wav encoding (want 16-bit PCM or "
                      "32-bit float): " + path);

  const uint32_t bytes_per_sample = bits / 8;
  const uint32_t frame_size = bytes_per_sample * channels;
  const uint32_t n_frames = data_size / frame_size;
  if (n_frames == 0) throw SignalError("wav file holds no samples: " + path);

  Waveform<Real> w;
  w.sample_rate = static_cast<int>(rate);
  w.samples.resize(n_frames);
  for (uint32_t i = 0; i < n_frames; ++i) {
    double acc = 0.0;
    for (uint16_t c = 0; c < channels; ++c) {
      const uint8_t* p = data + i * frame_size + c * bytes_per_sample;
      if (pcm16) {
        const int16_t s = static_cast<int16_t>(read_u16(p));
        acc += s / 32768.0;
      } else {
        float f;
        std::memcpy(&f, p, 4);
        acc += f;
      }
    }
    w.samples[i] = static_cast<Real>(acc / channels);
  }
  w.require_valid("read_wav");
  return w;
}

enum class WavEncoding { kPcm16, kFloat32 };

// Writes a mono RIFF/WAVE file. PCM output rounds and clips to int16.
template <typename Real>
void write_wav(const std::string& path, const Waveform<Real>& w,
               WavEncoding enc = WavEncoding::kPcm16) {
  using namespace wav_detail;
  w.require_valid("write_wav");
  const uint32_t n = static_cast<uint32_t>(w.samples.size());
  const uint16_t bits = enc == WavEncoding::kPcm16 ? 16 : 32;
  const uint16_t fmt = enc == WavEncoding::kPcm16 ? 1 : 3;
  const uint32_t data_size = n * (bits / 8u);

  std::vector<uint8_t> out;
  out.reserve(44 + data_size);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  write_u32(out, 36 + data_size);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  write_u32(out, 16);
  write_u16(out, fmt);
  write_u16(out, 1);  // mono
  write_u32(out, static_cast<uint32_t>(w.sample_rate));
  write_u32(out, static_cast<uint32_t>(w.sample_rate) * (bits / 8u));
  write_u16(out, static_cast<uint16_t>(bits / 8));
  write_u16(out, bits);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  write_u32(out, data_size);

  for (uint32_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(w.samples[i]);
    if (enc == WavEncoding::kPcm16) {
      // Same 1/32768 scale as the reader; the top code clips by one step.
      const double scaled =
          std::clamp(std::llround(x * 32768.0), -32768ll, 32767ll);
      write_u16(out,
                static_cast<uint16_t>(static_cast<int16_t>(scaled)));
    } else {
      const float f = static_cast<float>(x);
      uint32_t u;
      std::memcpy(&u, &f, 4);
      write_u32(out, u);
    }
  }

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open for writing: " + path);
  os.write(reinterpret_cast<const char*>(out.data()),
           static_cast<std::streamsize>(out.size()));
  if (!os) throw IoError("short write: " + path);
}

}  // namespace prosofuse

#endif  // PROSOFUSE_DSP_WAV_HPP_

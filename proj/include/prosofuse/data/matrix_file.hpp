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

#ifndef PROSOFUSE_DATA_MATRIX_FILE_HPP_
#define PROSOFUSE_DATA_MATRIX_FILE_HPP_

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "prosofuse/common.hpp"
#include "prosofuse/matrix.hpp"

namespace prosofuse {

// Binary matrix container: "MAT1", u32 rows, u32 cols (little-endian), then
// rows*cols float32 values row-major. Exact length enforced on load.
static_assert(std::endian::native == std::endian::little,
              "matrix container assumes a little-endian host");

namespace matrix_file_detail {

inline void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  const size_t at = out.size();
  out.resize(at + 4);
  std::memcpy(out.data() + at, &v, 4);
}

}  // namespace matrix_file_detail

template <typename Real>
void save_matrix(const std::string& path, const Mat<Real>& m) {
  std::vector<uint8_t> bytes;
  bytes.reserve(12 + 4 * static_cast<size_t>(m.size()));
  bytes.insert(bytes.end(), {'M', 'A', 'T', '1'});
  matrix_file_detail::put_u32(bytes, static_cast<uint32_t>(m.rows()));
  matrix_file_detail::put_u32(bytes, static_cast<uint32_t>(m.cols()));
  for (index_t i = 0; i < m.size(); ++i) {
    const float f = static_cast<float>(m.data()[i]);
    const size_t at = bytes.size();
    bytes.resize(at + 4);
    std::memcpy(bytes.data() + at, &f, 4);
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open for writing: " + path);
  os.write(reinterpret_cast<const char*>(bytes.data()),
           static_cast<std::streamsize>(bytes.size()));
  if (!os) throw IoError("short write: " + path);
}

template <typename Real>
Mat<Real> load_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open matrix file: " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "MAT1", 4) != 0)
    throw FormatError("bad matrix magic: " + path);
  uint32_t rows, cols;
  std::memcpy(&rows, bytes.data() + 4, 4);
  std::memcpy(&cols, bytes.data() + 8, 4);
  const uint64_t count = static_cast<uint64_t>(rows) * cols;
  if (count > (1ull << 31))
    throw CorruptionError("implausible matrix dimensions: " + path);
  if (bytes.size() != 12 + 4 * count)
    throw CorruptionError("matrix byte length mismatch: " + path);

  Mat<Real> m(static_cast<index_t>(rows), static_cast<index_t>(cols));
  for (uint64_t i = 0; i < count; ++i) {
    float f;
    std::memcpy(&f, bytes.data() + 12 + 4 * i, 4);
    m.data()[i] = static_cast<Real>(f);
  }
  if constexpr (kChecked) m.require_finite(("load_matrix " + path).c_str());
  return m;
}

}  // namespace prosofuse

#endif  // PROSOFUSE_DATA_MATRIX_FILE_HPP_

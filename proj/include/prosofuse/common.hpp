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

#ifndef PROSOFUSE_COMMON_HPP_
#define PROSOFUSE_COMMON_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace prosofuse {

// Checked mode keeps finiteness/shape validation active. It is a build
// switch, default on; define PROSOFUSE_UNCHECKED to drop the scans.
#ifdef PROSOFUSE_UNCHECKED
inline constexpr bool kChecked = false;
#else
inline constexpr bool kChecked = true;
#endif

using index_t = std::int64_t;

// Error taxonomy. Everything user-correctable (bad file, bad flag, bad
// config) derives from UserError; the CLI maps UserError to exit 1 and
// anything else to exit 2.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UserError : Error {
  using Error::Error;
};

struct DimensionError : Error {
  using Error::Error;
};
struct EvaluationError : Error {
  using Error::Error;
};
struct InternalError : Error {
  using Error::Error;
};

struct ConfigError : UserError {
  using UserError::UserError;
};
struct ArgumentError : UserError {
  using UserError::UserError;
};
struct UsageError : UserError {
  using UserError::UserError;
};
struct SignalError : UserError {
  using UserError::UserError;
};
struct AlignmentError : UserError {
  using UserError::UserError;
};
struct FormatError : UserError {
  using UserError::UserError;
};
struct CorruptionError : UserError {
  using UserError::UserError;
};
struct MetricError : UserError {
  using UserError::UserError;
};
struct VocabError : UserError {
  using UserError::UserError;
};
struct IoError : UserError {
  using UserError::UserError;
};

// FNV-1a, used for config hashes that bind cached features and
// checkpoints to the settings that produced them.
inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::uint32_t fnv1a32(const std::string& s) {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : s) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

}  // namespace prosofuse

#endif  // PROSOFUSE_COMMON_HPP_

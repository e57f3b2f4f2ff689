// Copyright 2026 The LISTA Design Space Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LISTA_COMMON_H_
#define LISTA_COMMON_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace lista {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Categories map one-to-one onto CLI exit codes (see cli.h).
enum class ErrorKind {
  kInvalidArgument,  // bad user input or configuration
  kIo,               // filesystem failure
  kFormat,           // wrong magic / version / malformed header
  kChecksum,         // corrupted or truncated file
  kNumeric,          // divergence, non-finite values, non-convergence
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::kInvalidArgument, what);
}

// 64-bit FNV-1a. Used for file checksums and content hashes.
inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;

inline std::uint64_t fnv1a64(std::span<const std::byte> bytes,
                             std::uint64_t h = kFnvOffset) {
  for (std::byte b : bytes) {
    h ^= static_cast<std::uint64_t>(b);
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t fnv1a64(std::string_view s,
                             std::uint64_t h = kFnvOffset) {
  return fnv1a64(std::as_bytes(std::span(s.data(), s.size())), h);
}

// SplitMix64 finalizer over a pair; derives child seeds from parents.
inline std::uint64_t mix_seeds(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string hex64(std::uint64_t v);
/// Shortest decimal form that parses back to exactly v.
std::string format_double(double v);

// Hash of a matrix's shape and raw float64 contents.
std::uint64_t matrix_hash(const Matrix& m, std::uint64_t h = kFnvOffset);

}  // namespace lista

#endif  // LISTA_COMMON_H_

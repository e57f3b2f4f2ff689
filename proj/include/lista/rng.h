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

#ifndef LISTA_RNG_H_
#define LISTA_RNG_H_

#include <array>
#include <cstdint>
#include <string_view>

namespace lista {

// Philox4x32 with 10 rounds (Salmon et al., "Parallel random numbers: as
// easy as 1, 2, 3"). Stateless block function: counter x key -> 128 bits.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;
  static Counter block(Counter ctr, Key key);
};

// Counter-based stream. A (seed, stream) pair names an independent sequence,
// so per-column substreams need no shared state. All distributions are
// implemented here rather than via <random> so a file's header name pins the
// exact sample sequence.
class CounterRng {
 public:
  static constexpr std::string_view kName = "philox4x32-10";

  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1).
  double uniform_open();
  double normal();
  double laplace(double scale);
  // Shape/scale parameterization: mean = shape * scale.
  double gamma(double shape, double scale);
  bool bernoulli(double p) { return uniform() < p; }
  // Unbiased integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  void refill();

  Philox4x32::Key key_;
  std::uint64_t stream_;
  std::uint64_t index_ = 0;
  std::array<std::uint64_t, 2> buf_{};
  int buffered_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace lista

#endif  // LISTA_RNG_H_

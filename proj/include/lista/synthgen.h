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

#ifndef LISTA_SYNTHGEN_H_
#define LISTA_SYNTHGEN_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>

#include "lista/common.h"

namespace lista {

// ---- Dictionary -----------------------------------------------------------

struct GaussianGen {};
struct LowRankGen {
  int rank = 1;
};
struct PerturbedGen {
  std::string base_id;
  double scale = 0.0;
};
using GenSpec = std::variant<GaussianGen, LowRankGen, PerturbedGen>;

// Column-normalized measurement matrix (m rows, n columns).
struct Dictionary {
  int m = 0;
  int n = 0;
  Matrix data;
  GenSpec gen = GaussianGen{};
  std::uint64_t seed = 0;

  // Content hash of the shape and entries, as 16 hex digits.
  std::string id() const { return hex64(matrix_hash(data)); }
};

std::string gen_spec_to_string(const GenSpec& g);

/// Entries i.i.d. N(0, 1/m), then every column scaled to unit norm.
Dictionary sample_dictionary(int m, int n, std::uint64_t seed);

/// D = U V with U ~ N(0, 1/m) (m x r) and V ~ N(0, 1/r) (r x n), columns
/// normalized afterwards.
Dictionary sample_lowrank_dictionary(int m, int r, int n, std::uint64_t seed);

/// Adds i.i.d. Laplace(0, scale) noise to every entry and renormalizes.
Dictionary perturb_dictionary(const Dictionary& base, double scale,
                              std::uint64_t seed);

/// Scales each column to unit Euclidean norm; throws on a zero column.
void normalize_columns(Matrix& d);

// ---- Signals and noise ----------------------------------------------------

struct BernoulliGauss {
  double p = 0.1;
};
// Shape/scale convention: mean = shape * scale.
struct GammaSignal {
  double shape = 1.0;
  double scale = 0.1;
};
using SignalSpec = std::variant<BernoulliGauss, GammaSignal>;

struct NoNoise {};
struct GaussianNoise {
  double snr_db = 40.0;
};
struct SaltPepperNoise {
  double density = 0.01;
};
using NoiseSpec = std::variant<NoNoise, GaussianNoise, SaltPepperNoise>;

// Text forms: "bernoulli:0.1", "gamma:1.0,0.1", "none", "gaussian:20",
// "salt_pepper:0.01". Parsers throw kInvalidArgument on malformed input.
std::string signal_to_string(const SignalSpec& s);
SignalSpec parse_signal(const std::string& text);
std::string noise_to_string(const NoiseSpec& s);
NoiseSpec parse_noise(const std::string& text);

/// n x count matrix; column j is drawn from substream j of the seed.
Matrix sample_signals(int n, int count, const SignalSpec& spec,
                      std::uint64_t seed);

/// B = D X + E. Gaussian noise variance is set from the empirical clean
/// energy so that 10 log10(||DX||^2 / E||E||^2) equals snr_db. Salt and
/// pepper replaces round(density * m * count) distinct entries, the first
/// half with +A and the rest with -A, A = max |DX|.
Matrix synthesize_measurements(const Dictionary& d, const Matrix& x,
                               const NoiseSpec& noise, std::uint64_t seed);

// ---- Dataset ----------------------------------------------------------------

enum class Split { kTrain, kVal, kTest };
std::string split_name(Split s);
Split parse_split(const std::string& text);

struct Dataset {
  std::string dict_id;
  Matrix x_true;  // n x count
  Matrix b;       // m x count
  SignalSpec signal = BernoulliGauss{};
  NoiseSpec noise = NoNoise{};
  std::uint64_t seed = 0;
  Split split = Split::kTrain;
  std::optional<Dictionary> dictionary;  // embedded copy, if any

  int count() const { return static_cast<int>(x_true.cols()); }
  // Hash over every field that influences the numbers.
  std::uint64_t content_hash() const;
};

/// Draws signals and measurements for one split. Signals and noise use
/// independent children of `seed`.
Dataset make_dataset(const Dictionary& d, int count, const SignalSpec& signal,
                     const NoiseSpec& noise, std::uint64_t seed, Split split,
                     bool embed_dictionary = false);

/// Throws kInvalidArgument unless ds was generated from d (id and shapes).
void check_dataset_matches(const Dataset& ds, const Dictionary& d);

// ---- File format ----------------------------------------------------------
//
// "USRD" | u16 version | u32 header length | UTF-8 JSON header |
// float64 LE arrays, row-major, in header order (x_true, b, dictionary) |
// u64 FNV-1a checksum of every preceding byte.

inline constexpr std::uint16_t kDatasetVersion = 1;

void write_dataset(const Dataset& ds, const std::filesystem::path& path);
Dataset read_dataset(const std::filesystem::path& path);

}  // namespace lista

#endif  // LISTA_SYNTHGEN_H_

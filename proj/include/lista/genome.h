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

#ifndef LISTA_GENOME_H_
#define LISTA_GENOME_H_

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "lista/container.h"
#include "lista/numerics.h"

namespace lista {

// How gated earlier outputs are combined into a layer's input.
//   kLwa: learnable weighted sum, one coefficient per connection.
//   kNa:  plain mean of the connected outputs.
//   kMm:  momentum form; each connection x^(k+1-i) enters through a shared
//         matrix W_i scaled by a per-layer step alpha_i^(k).
enum class Fusion { kLwa, kNa, kMm };

std::string_view fusion_name(Fusion f);
Fusion parse_fusion(std::string_view name);

// Architecture encoding for a K-layer unrolled network. Layer j (1-based)
// produces x^(j) from the fused input xt^(j-1); xt^(k) draws on x^(i) for
// i <= k. The connection x^k -> layer k+1 is the default ("side") connection,
// controlled by side_gates[k]; extra ("skip") connections are pairs (i, k)
// with 1 <= i < k <= K-1 meaning x^(i) enters xt^(k).
struct Genome {
  int k_layers = 16;
  Fusion fusion = Fusion::kLwa;
  std::set<std::pair<int, int>> skip_gates;
  // side_gates[j-1] gates the default input of layer j; layer 1's input is
  // x^(0) = 0 and its gate must stay on.
  std::vector<bool> side_gates;
  std::vector<NeuronType> neurons;

  bool operator==(const Genome&) const = default;
};

// Plain LISTA: no extra connections, soft thresholds, LWA fusion.
Genome genome_lista(int k_layers);
// LISTA plus x^(k-1) -> xt^(k) for every k, i.e. the FISTA momentum pair.
Genome genome_lfista(int k_layers);
// Every extra connection enabled.
Genome genome_dense(int k_layers);

// Accepts "lista", "lfista", "dense".
Genome genome_preset(std::string_view name, int k_layers);

int count_extra(const Genome& g);
inline int max_extra(int k_layers) {
  return (k_layers - 1) * (k_layers - 2) / 2;
}

using BigInt = boost::multiprecision::cpp_int;

/// 2^((K-1)(K-2)/2), times 3^K when neurons are searched, times 2^(K-1)
/// when side-connection pruning is searched.
BigInt design_space_size(int k_layers, bool with_neurons, bool with_pruning);

/// Empty when valid; otherwise one human-readable message per violation.
std::vector<std::string> validate_genome(const Genome& g);

/// Sources feeding layer j (1-based), ascending output indices in [1, j-1].
std::vector<int> layer_sources(const Genome& g, int layer);

// Canonical JSON: {"k", "fusion", "skip_gates": [[i,k],...] sorted,
// "side_gates", "neurons"}.
Json genome_to_json(const Genome& g);
// Parses without validating; pair ordering in the input is irrelevant.
Genome genome_from_json(const Json& j);
std::uint64_t genome_hash(const Genome& g);

Genome load_genome(const std::filesystem::path& path);
void save_genome(const Genome& g, const std::filesystem::path& path);

}  // namespace lista

#endif  // LISTA_GENOME_H_

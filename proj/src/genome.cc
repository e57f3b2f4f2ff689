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

#include "lista/genome.h"

namespace lista {

std::string_view fusion_name(Fusion f) {
  switch (f) {
    case Fusion::kLwa:
      return "lwa";
    case Fusion::kNa:
      return "na";
    case Fusion::kMm:
      return "mm";
  }
  return "?";
}

Fusion parse_fusion(std::string_view name) {
  for (Fusion f : {Fusion::kLwa, Fusion::kNa, Fusion::kMm}) {
    if (fusion_name(f) == name) return f;
  }
  fail(ErrorKind::kInvalidArgument, "unknown fusion '" + std::string(name) + "'");
}

namespace {

Genome bare_genome(int k_layers) {
  require(k_layers >= 2, "genome presets need K >= 2");
  Genome g;
  g.k_layers = k_layers;
  g.side_gates.assign(k_layers, true);
  g.neurons.assign(k_layers, NeuronType::kSoftThreshold);
  return g;
}

}  // namespace

Genome genome_lista(int k_layers) { return bare_genome(k_layers); }

Genome genome_lfista(int k_layers) {
  Genome g = bare_genome(k_layers);
  for (int k = 2; k <= k_layers - 1; ++k) g.skip_gates.insert({k - 1, k});
  return g;
}

Genome genome_dense(int k_layers) {
  Genome g = bare_genome(k_layers);
  for (int k = 2; k <= k_layers - 1; ++k) {
    for (int i = 1; i < k; ++i) g.skip_gates.insert({i, k});
  }
  return g;
}

Genome genome_preset(std::string_view name, int k_layers) {
  if (name == "lista") return genome_lista(k_layers);
  if (name == "lfista") return genome_lfista(k_layers);
  if (name == "dense") return genome_dense(k_layers);
  fail(ErrorKind::kInvalidArgument, "unknown preset '" + std::string(name) + "'");
}

int count_extra(const Genome& g) { return static_cast<int>(g.skip_gates.size()); }

BigInt design_space_size(int k_layers, bool with_neurons, bool with_pruning) {
  require(k_layers >= 2, "design_space_size: K must be >= 2");
  BigInt size = BigInt(1) << max_extra(k_layers);
  if (with_neurons) size *= boost::multiprecision::pow(BigInt(3), k_layers);
  if (with_pruning) size <<= (k_layers - 1);
  return size;
}

std::vector<std::string> validate_genome(const Genome& g) {
  std::vector<std::string> out;
  const int kk = g.k_layers;
  if (kk < 2) out.push_back("k_layers must be >= 2 (got " + std::to_string(kk) + ")");
  for (const auto& [i, k] : g.skip_gates) {
    const std::string tag = "[" + std::to_string(i) + "," + std::to_string(k) + "]";
    if (i > k) {
      out.push_back("non-causal connection " + tag);
    } else if (i == k) {
      out.push_back("skip gate " + tag + " duplicates the default connection");
    } else if (i < 1 || k > kk - 1) {
      out.push_back("skip gate " + tag + " out of range for K=" + std::to_string(kk));
    }
  }
  if (static_cast<int>(g.side_gates.size()) != kk) {
    out.push_back("side_gates has " + std::to_string(g.side_gates.size()) +
                  " entries, expected " + std::to_string(kk));
  } else if (kk >= 1 && !g.side_gates[0]) {
    out.push_back("side gate of layer 1 must stay on");
  }
  if (static_cast<int>(g.neurons.size()) != kk) {
    out.push_back("neurons has " + std::to_string(g.neurons.size()) +
                  " entries, expected " + std::to_string(kk));
  }
  return out;
}

std::vector<int> layer_sources(const Genome& g, int layer) {
  std::vector<int> src;
  const int k = layer - 1;
  if (k < 1) return src;
  for (const auto& [i, kk] : g.skip_gates) {
    if (kk == k) src.push_back(i);
  }
  if (g.side_gates[layer - 1]) src.push_back(k);
  return src;  // set order keeps skips ascending; k is the largest
}

Json genome_to_json(const Genome& g) {
  Json skips = Json::array();
  for (const auto& [i, k] : g.skip_gates) skips.push_back({i, k});
  Json side = Json::array();
  for (bool s : g.side_gates) side.push_back(s);
  Json neurons = Json::array();
  for (NeuronType t : g.neurons) neurons.push_back(neuron_name(t));
  Json j;
  j["k"] = g.k_layers;
  j["fusion"] = fusion_name(g.fusion);
  j["skip_gates"] = skips;
  j["side_gates"] = side;
  j["neurons"] = neurons;
  return j;
}

Genome genome_from_json(const Json& j) {
  Genome g;
  try {
    g.k_layers = j.at("k").get<int>();
    g.fusion = parse_fusion(j.value("fusion", std::string("lwa")));
    for (const auto& pair : j.at("skip_gates")) {
      if (!pair.is_array() || pair.size() != 2) {
        fail(ErrorKind::kInvalidArgument, "skip gate entries must be [i, k] pairs");
      }
      g.skip_gates.insert({pair[0].get<int>(), pair[1].get<int>()});
    }
    if (j.contains("side_gates")) {
      for (const auto& s : j["side_gates"]) g.side_gates.push_back(s.get<bool>());
    } else {
      g.side_gates.assign(std::max(g.k_layers, 0), true);
    }
    if (j.contains("neurons")) {
      for (const auto& s : j["neurons"]) {
        const auto t = parse_neuron(s.get<std::string>());
        if (!t) {
          fail(ErrorKind::kInvalidArgument,
               "unknown neuron '" + s.get<std::string>() + "'");
        }
        g.neurons.push_back(*t);
      }
    } else {
      g.neurons.assign(std::max(g.k_layers, 0), NeuronType::kSoftThreshold);
    }
  } catch (const Json::exception& e) {
    fail(ErrorKind::kInvalidArgument, std::string("malformed genome JSON: ") + e.what());
  }
  return g;
}

std::uint64_t genome_hash(const Genome& g) {
  return fnv1a64(genome_to_json(g).dump());
}

Genome load_genome(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    fail(ErrorKind::kInvalidArgument,
         "genome file " + path.string() + " is not JSON: " + e.what());
  }
  return genome_from_json(j);
}

void save_genome(const Genome& g, const std::filesystem::path& path) {
  write_file(path, genome_to_json(g).dump(2) + "\n");
}

}  // namespace lista

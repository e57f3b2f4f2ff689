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

#ifndef LISTA_SEARCH_H_
#define LISTA_SEARCH_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "lista/genome.h"
#include "lista/trainer.h"

namespace lista {

struct SearchSpace {
  int k_layers = 16;
  Fusion fusion = Fusion::kLwa;
  bool search_neurons = false;
  bool search_pruning = false;
  // Evaluate the lista/lfista/dense presets before any sampled genome.
  bool include_presets = false;
};

Json space_to_json(const SearchSpace& s);
SearchSpace space_from_json(const Json& j);
BigInt space_cardinality(const SearchSpace& s);

struct EvalOutcome {
  bool ok = false;
  double val_nmse_db = 0.0;
  std::string error;
  Json report;  // TrainReport summary when produced by training
};

// Trains a genome from scratch with the given seed and scores it. Must be
// safe to call concurrently on distinct genomes.
using Evaluator = std::function<EvalOutcome(const Genome&, std::uint64_t)>;

struct SearchRecord {
  Genome genome;
  std::uint64_t hash = 0;
  double val_nmse_db = 0.0;
  std::uint64_t train_seed = 0;
  Json report;
};

struct SearchFailure {
  Genome genome;
  std::uint64_t hash = 0;
  std::string error;
};

struct SearchResult {
  std::string strategy;
  SearchSpace space;
  std::uint64_t seed = 0;
  Json config;
  std::vector<SearchRecord> ranked;   // ascending NMSE, unique genomes
  std::vector<SearchRecord> history;  // first evaluation of each genome, in order
  std::vector<SearchFailure> failures;
  int budget_used = 0;  // distinct genomes evaluated
};

/// Training seed for a genome: decorrelated across genomes, shared across
/// strategies that use the same search seed.
std::uint64_t genome_train_seed(std::uint64_t search_seed, const Genome& g);

/// Skip gates i.i.d. Bernoulli(0.5); neurons uniform over the three types and
/// side gates (layers >= 2) Bernoulli(0.5) when those dimensions are searched.
Genome sample_genome(const SearchSpace& space, std::uint64_t seed);

/// Changes exactly one searchable gene, chosen uniformly: flips a skip gate,
/// moves one layer to a different neuron type, or flips one side gate.
Genome mutate(const Genome& g, const SearchSpace& space, std::uint64_t seed);

/// Number of differing genes (skip gates, side gates, neurons).
int gene_distance(const Genome& a, const Genome& b);

/// Orders by NMSE, then fewer extra connections, then hash.
void rank_records(std::vector<SearchRecord>& records);

/// Memoizes an evaluator by (genome hash, seed); thread-safe.
class CachedEvaluator {
 public:
  explicit CachedEvaluator(Evaluator inner) : inner_(std::move(inner)) {}
  EvalOutcome operator()(const Genome& g, std::uint64_t seed);
  int distinct_calls() const;

 private:
  Evaluator inner_;
  mutable std::mutex mu_;
  std::map<std::pair<std::uint64_t, std::uint64_t>, EvalOutcome> cache_;
};

/// Evaluator that trains on (train, val) with cfg, overriding cfg.seed.
Evaluator make_training_evaluator(const Dictionary& d, const Dataset& train_ds,
                                  const Dataset& val_ds, const TrainConfig& cfg);

struct SearchOptions {
  std::uint64_t seed = 0;
  int workers = 1;
};

SearchResult random_search(const SearchSpace& space, int budget,
                           const Evaluator& eval, const SearchOptions& opt);

struct EvolutionConfig {
  int population = 64;
  int sample_size = 16;
  int cycles = 0;
};

/// Aging evolution: random initial population; each cycle mutates the best
/// of a uniform sample (without replacement), appends the child and retires
/// the oldest member.
SearchResult evolve(const SearchSpace& space, const EvolutionConfig& cfg,
                    const Evaluator& eval, const SearchOptions& opt);

inline constexpr int kExhaustiveCap = 4096;

/// Every genome of the space, in a fixed order.
std::vector<Genome> enumerate_space(const SearchSpace& space,
                                    int cap = kExhaustiveCap);

SearchResult exhaustive_search(const SearchSpace& space, const Evaluator& eval,
                               const SearchOptions& opt, int cap = kExhaustiveCap);

/// min(50, 20% of the budget), at least 1.
int default_top_k(int budget);

// Per-connection fraction over a genome set. conn(k-1, i-1) is the share of
// genomes in which x^(i) feeds the fused input xt^(k) (i <= k <= K-1); the
// diagonal i == k holds the side connections. neurons(j-1, t) is the share
// of genomes using neuron type t at layer j.
struct FractionMap {
  int k_layers = 0;
  int count = 0;
  Matrix conn;
  Matrix neurons;
};

FractionMap fraction_map(const std::vector<Genome>& genomes);

/// Connection on iff its fraction >= threshold; majority neuron per layer
/// with ties resolved toward soft_threshold.
Genome average_architecture(const std::vector<Genome>& genomes,
                            double threshold = 0.5);

std::vector<Genome> top_genomes(const SearchResult& r, int k);

std::string fraction_csv(const FractionMap& f);
std::string neuron_csv(const FractionMap& f);

// Directory layout: manifest.json, records/<hash>.json, rankings.csv.
void write_search_result(const SearchResult& r, const std::filesystem::path& dir);
SearchResult read_search_result(const std::filesystem::path& dir);

}  // namespace lista

#endif  // LISTA_SEARCH_H_

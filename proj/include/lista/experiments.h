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

#ifndef LISTA_EXPERIMENTS_H_
#define LISTA_EXPERIMENTS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lista/genome.h"
#include "lista/synthgen.h"
#include "lista/trainer.h"

namespace lista {

struct DictSpec {
  int m = 64;
  int n = 128;
  int rank = 0;  // > 0 selects the low-rank generator
  std::uint64_t seed = 1;
  // Laplace scale of the test-time perturbation; the network is still built
  // and trained on the unperturbed dictionary.
  std::optional<double> test_perturb;
  std::uint64_t perturb_seed = 2;
};

struct DataSpec {
  int count = 0;
  SignalSpec signal = BernoulliGauss{0.1};
  NoiseSpec noise = NoNoise{};
  std::uint64_t seed = 0;  // mixed with the repetition seed
};

struct PruningSpec {
  std::string base = "lista";
  int samples = 20;
  std::uint64_t seed = 1;
};

struct ExperimentSpec {
  std::string name = "experiment";
  std::string mode = "compare";  // "compare" or "pruning"
  DictSpec dictionary;
  DataSpec train{20480, BernoulliGauss{0.1}, NoNoise{}, 11};
  DataSpec val{2048, BernoulliGauss{0.1}, NoNoise{}, 12};
  DataSpec test{2048, BernoulliGauss{0.1}, NoNoise{}, 13};
  // Test data deliberately differs from training (noise, signal or
  // dictionary). Checked against the data specs.
  bool mismatch = false;
  int k_layers = 8;
  // Presets ("lista", "lfista", "dense"), optionally with a fusion suffix
  // ("dense:mm"), "file:<path>" genomes, or the untrained baselines "ista"
  // and "fista".
  std::vector<std::string> genomes = {"lista"};
  TrainConfig train_config;
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  PruningSpec pruning;
  int workers = 1;
  std::filesystem::path base_dir;  // resolves relative genome files
};

Json spec_to_json(const ExperimentSpec& s);
/// Missing fields keep their defaults. Throws kFormat on malformed JSON and
/// kInvalidArgument on invalid values.
ExperimentSpec spec_from_json(const Json& j, const std::filesystem::path& base_dir = {});
ExperimentSpec load_spec(const std::filesystem::path& path);
void validate_spec(const ExperimentSpec& s);
std::uint64_t spec_hash(const ExperimentSpec& s);

/// Genome for a label; throws kInvalidArgument (listing violations) or kIo.
Genome resolve_genome(const std::string& label, int k_layers,
                      const std::filesystem::path& base_dir);
bool is_baseline(const std::string& label);

struct ExperimentCell {
  std::string genome;  // label as given in the spec
  std::uint64_t genome_hash = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  double nmse_db = 0.0;  // test split
  double val_nmse_db = 0.0;
  std::string error;
  std::uint64_t train_hash = 0;  // train and val content
  std::uint64_t test_hash = 0;
};

struct GenomeSummary {
  std::string genome;
  int n = 0;  // successful seeds
  double mean_db = 0.0;
  double std_db = 0.0;  // sample standard deviation, 0 when n < 2
};

struct PruningPair {
  std::string pattern;  // side gates as '0'/'1', layer 1 first
  std::uint64_t pruned_hash = 0;
  double pruned_db = 0.0;
  double reconnected_db = 0.0;
  double delta_db = 0.0;  // pruned - reconnected; > 0 when reconnecting helps
};

struct ExperimentReport {
  std::string name;
  std::string mode;
  std::uint64_t spec_hash = 0;
  std::string dict_id;
  std::string test_dict_id;
  // Hash of the specs the training pipeline reads; excludes the test spec.
  std::uint64_t train_spec_hash = 0;
  std::uint64_t test_spec_hash = 0;
  std::vector<ExperimentCell> cells;
  std::vector<GenomeSummary> summaries;
  std::vector<PruningPair> pairs;
  double reconnect_win_rate = 0.0;
};

/// Every genome x seed cell, trained on the train split and scored on test.
ExperimentReport run_experiment(const ExperimentSpec& spec);

/// `samples` distinct side-gate patterns of `base` (layer 1 fixed on, the
/// unpruned pattern excluded), each paired with the reconnected genome.
/// Data and training use the single seed `seed`.
ExperimentReport pruning_study(const Genome& base, int samples,
                               const ExperimentSpec& spec, std::uint64_t seed);

/// Mean and sample standard deviation of successful cells, in dB, in order of
/// first appearance.
std::vector<GenomeSummary> summarize(const std::vector<ExperimentCell>& cells);

enum class ReportFormat { kCsv, kJson };

Json experiment_report_to_json(const ExperimentReport& r);
ExperimentReport experiment_report_from_json(const Json& j);
/// CSV columns: experiment, genome, seed, nmse_db, status.
std::string emit_report(const ExperimentReport& r, ReportFormat f);
void write_report(const ExperimentReport& r, const std::filesystem::path& path,
                  ReportFormat f);

}  // namespace lista

#endif  // LISTA_EXPERIMENTS_H_

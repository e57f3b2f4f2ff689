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

#include "lista/search.h"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <exception>
#include <memory>
#include <set>
#include <sstream>
#include <unordered_set>

#include "lista/rng.h"
#include "lista/runtime.h"

namespace lista {

namespace {

// Flat list of (i, k) skip pairs in canonical order.
std::vector<std::pair<int, int>> all_skip_pairs(int k_layers) {
  std::vector<std::pair<int, int>> pairs;
  for (int k = 2; k <= k_layers - 1; ++k) {
    for (int i = 1; i < k; ++i) pairs.emplace_back(i, k);
  }
  return pairs;
}

Genome base_genome(const SearchSpace& s) {
  Genome g = genome_lista(s.k_layers);
  g.fusion = s.fusion;
  return g;
}

void check_space(const SearchSpace& s) {
  require(s.k_layers >= 2, "search space needs k_layers >= 2");
}

bool record_less(const SearchRecord& a, const SearchRecord& b) {
  if (a.val_nmse_db != b.val_nmse_db) return a.val_nmse_db < b.val_nmse_db;
  const int ea = count_extra(a.genome);
  const int eb = count_extra(b.genome);
  if (ea != eb) return ea < eb;
  return a.hash < b.hash;
}

EvalOutcome safe_eval(const Evaluator& eval, const Genome& g, std::uint64_t seed) {
  try {
    return eval(g, seed);
  } catch (const std::exception& e) {
    EvalOutcome out;
    out.error = e.what();
    return out;
  }
}

// Evaluates genomes on up to `workers` threads; results keep input order.
std::vector<EvalOutcome> eval_batch(const std::vector<Genome>& genomes,
                                    const std::vector<std::uint64_t>& seeds,
                                    const Evaluator& eval, int workers) {
  std::vector<EvalOutcome> out(genomes.size());
  parallel_for(genomes.size(), workers,
               [&](std::size_t i) { out[i] = safe_eval(eval, genomes[i], seeds[i]); });
  return out;
}

// Result store shared by the strategies; the search loop is its only writer.
class Store {
 public:
  Store(std::string strategy, const SearchSpace& space, std::uint64_t seed) {
    res_.strategy = std::move(strategy);
    res_.space = space;
    res_.seed = seed;
  }

  // Returns the record when evaluation succeeded.
  const SearchRecord* add(const Genome& g, std::uint64_t train_seed,
                          const EvalOutcome& out) {
    const std::uint64_t h = genome_hash(g);
    if (!seen_.insert(h).second) return nullptr;
    ++res_.budget_used;
    if (!out.ok) {
      res_.failures.push_back({g, h, out.error});
      return nullptr;
    }
    res_.history.push_back({g, h, out.val_nmse_db, train_seed, out.report});
    return &res_.history.back();
  }

  SearchResult finish(Json config) {
    res_.config = std::move(config);
    res_.ranked = res_.history;
    rank_records(res_.ranked);
    return std::move(res_);
  }

 private:
  SearchResult res_;
  std::unordered_set<std::uint64_t> seen_;
};

std::vector<Genome> preset_genomes(const SearchSpace& s) {
  std::vector<Genome> out;
  for (const char* name : {"lista", "lfista", "dense"}) {
    Genome g = genome_preset(name, s.k_layers);
    g.fusion = s.fusion;
    if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
  }
  return out;
}

// Up to `count` distinct genomes: presets (when enabled) then random draws.
// Stops early when the space is exhausted.
std::vector<Genome> distinct_samples(const SearchSpace& s, int count,
                                     std::uint64_t seed, bool with_presets) {
  std::vector<Genome> out;
  std::unordered_set<std::uint64_t> hashes;
  auto push = [&](const Genome& g) {
    if (static_cast<int>(out.size()) < count && hashes.insert(genome_hash(g)).second) {
      out.push_back(g);
    }
  };
  if (with_presets) {
    for (const auto& g : preset_genomes(s)) push(g);
  }
  const BigInt card = space_cardinality(s);
  const int target = card < count ? static_cast<int>(card) : count;
  // Bounds the collision resampling near exhaustion.
  constexpr std::uint64_t kTries = 10000;
  for (std::uint64_t draw = 0;
       static_cast<int>(out.size()) < target && draw < kTries * (target + 1); ++draw) {
    push(sample_genome(s, mix_seeds(seed, draw)));
  }
  return out;
}

Json outcome_failure(const SearchFailure& f) {
  return Json{{"genome", genome_to_json(f.genome)},
              {"hash", hex64(f.hash)},
              {"error", f.error}};
}

std::uint64_t parse_hex64(const std::string& s) {
  require(!s.empty() && s.size() <= 16, "bad hash '" + s + "'");
  std::size_t used = 0;
  const std::uint64_t v = std::stoull(s, &used, 16);
  require(used == s.size(), "bad hash '" + s + "'");
  return v;
}

}  // namespace

Json space_to_json(const SearchSpace& s) {
  return Json{{"k_layers", s.k_layers},
              {"fusion", std::string(fusion_name(s.fusion))},
              {"search_neurons", s.search_neurons},
              {"search_pruning", s.search_pruning},
              {"include_presets", s.include_presets}};
}

SearchSpace space_from_json(const Json& j) {
  try {
    SearchSpace s;
    s.k_layers = j.value("k_layers", s.k_layers);
    s.fusion = parse_fusion(j.value("fusion", std::string("lwa")));
    s.search_neurons = j.value("search_neurons", false);
    s.search_pruning = j.value("search_pruning", false);
    s.include_presets = j.value("include_presets", false);
    check_space(s);
    return s;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kFormat, std::string("search space: ") + e.what());
  }
}

BigInt space_cardinality(const SearchSpace& s) {
  return design_space_size(s.k_layers, s.search_neurons, s.search_pruning);
}

std::uint64_t genome_train_seed(std::uint64_t search_seed, const Genome& g) {
  return mix_seeds(search_seed, genome_hash(g));
}

Genome sample_genome(const SearchSpace& space, std::uint64_t seed) {
  check_space(space);
  CounterRng rng(seed, 0);
  Genome g = base_genome(space);
  for (const auto& pr : all_skip_pairs(space.k_layers)) {
    if (rng.bernoulli(0.5)) g.skip_gates.insert(pr);
  }
  if (space.search_neurons) {
    for (auto& t : g.neurons) t = kAllNeurons[rng.below(kAllNeurons.size())];
  }
  if (space.search_pruning) {
    for (int j = 2; j <= space.k_layers; ++j) g.side_gates[j - 1] = rng.bernoulli(0.5);
  }
  return g;
}

Genome mutate(const Genome& g, const SearchSpace& space, std::uint64_t seed) {
  const auto pairs = all_skip_pairs(space.k_layers);
  const std::size_t n_skip = pairs.size();
  const std::size_t n_neuron = space.search_neurons ? space.k_layers : 0;
  const std::size_t n_side = space.search_pruning ? space.k_layers - 1 : 0;
  const std::size_t total = n_skip + n_neuron + n_side;
  require(total > 0, "mutate: space has no searchable genes");
  require(g.k_layers == space.k_layers, "mutate: genome depth differs from space");
  CounterRng rng(seed, 1);
  std::size_t at = rng.below(total);
  Genome out = g;
  if (at < n_skip) {
    const auto& pr = pairs[at];
    if (!out.skip_gates.erase(pr)) out.skip_gates.insert(pr);
    return out;
  }
  at -= n_skip;
  if (at < n_neuron) {
    const NeuronType cur = out.neurons[at];
    std::vector<NeuronType> others;
    for (NeuronType t : kAllNeurons) {
      if (t != cur) others.push_back(t);
    }
    out.neurons[at] = others[rng.below(others.size())];
    return out;
  }
  at -= n_neuron;
  out.side_gates[at + 1] = !out.side_gates[at + 1];
  return out;
}

int gene_distance(const Genome& a, const Genome& b) {
  require(a.k_layers == b.k_layers, "gene_distance: depth mismatch");
  std::vector<std::pair<int, int>> diff;
  std::set_symmetric_difference(a.skip_gates.begin(), a.skip_gates.end(),
                                b.skip_gates.begin(), b.skip_gates.end(),
                                std::back_inserter(diff));
  int d = static_cast<int>(diff.size());
  for (int j = 0; j < a.k_layers; ++j) {
    d += a.side_gates[j] != b.side_gates[j];
    d += a.neurons[j] != b.neurons[j];
  }
  return d;
}

void rank_records(std::vector<SearchRecord>& records) {
  std::sort(records.begin(), records.end(), record_less);
}

EvalOutcome CachedEvaluator::operator()(const Genome& g, std::uint64_t seed) {
  const auto key = std::make_pair(genome_hash(g), seed);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  EvalOutcome out = safe_eval(inner_, g, seed);
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.emplace(key, std::move(out)).first->second;
}

int CachedEvaluator::distinct_calls() const {
  std::lock_guard<std::mutex> lock(mu_);
  return static_cast<int>(cache_.size());
}

Evaluator make_training_evaluator(const Dictionary& d, const Dataset& train_ds,
                                  const Dataset& val_ds, const TrainConfig& cfg) {
  validate_config(cfg);
  auto dict = std::make_shared<const Dictionary>(d);
  auto tr = std::make_shared<const Dataset>(train_ds);
  auto va = std::make_shared<const Dataset>(val_ds);
  return [dict, tr, va, cfg](const Genome& g, std::uint64_t seed) {
    TrainConfig c = cfg;
    c.seed = seed;
    EvalOutcome out;
    try {
      const TrainReport r = train(g, *dict, *tr, *va, c);
      out.ok = true;
      out.val_nmse_db = r.val_nmse_db;
      out.report = report_to_json(r);
    } catch (const Error& e) {
      out.error = e.what();
    }
    return out;
  };
}

SearchResult random_search(const SearchSpace& space, int budget,
                           const Evaluator& eval, const SearchOptions& opt) {
  check_space(space);
  require(budget >= 1, "random_search: budget must be >= 1");
  Store store("random", space, opt.seed);
  const auto genomes =
      distinct_samples(space, budget, mix_seeds(opt.seed, 0x5a), space.include_presets);
  std::vector<std::uint64_t> seeds;
  for (const auto& g : genomes) seeds.push_back(genome_train_seed(opt.seed, g));
  const auto outs = eval_batch(genomes, seeds, eval, opt.workers);
  for (std::size_t i = 0; i < genomes.size(); ++i) store.add(genomes[i], seeds[i], outs[i]);
  return store.finish(Json{{"budget", budget}});
}

SearchResult evolve(const SearchSpace& space, const EvolutionConfig& cfg,
                    const Evaluator& eval, const SearchOptions& opt) {
  check_space(space);
  require(cfg.sample_size >= 2 && cfg.population >= cfg.sample_size,
          "evolve: need population >= sample_size >= 2");
  require(cfg.cycles >= 0, "evolve: cycles must be >= 0");
  Store store("evolution", space, opt.seed);

  const auto init = distinct_samples(space, cfg.population, mix_seeds(opt.seed, 0xe0),
                                     space.include_presets);
  std::vector<std::uint64_t> seeds;
  for (const auto& g : init) seeds.push_back(genome_train_seed(opt.seed, g));
  const auto outs = eval_batch(init, seeds, eval, opt.workers);

  std::deque<SearchRecord> population;
  for (std::size_t i = 0; i < init.size(); ++i) {
    store.add(init[i], seeds[i], outs[i]);
    if (outs[i].ok) {
      population.push_back({init[i], genome_hash(init[i]), outs[i].val_nmse_db,
                            seeds[i], outs[i].report});
    }
  }

  for (int c = 0; c < cfg.cycles && !population.empty(); ++c) {
    const std::uint64_t cseed = mix_seeds(mix_seeds(opt.seed, 0xc1), c);
    CounterRng rng(cseed, 0);
    // Partial Fisher-Yates picks the sample without replacement.
    std::vector<std::size_t> idx(population.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    const std::size_t take = std::min<std::size_t>(cfg.sample_size, idx.size());
    for (std::size_t i = 0; i < take; ++i) {
      std::swap(idx[i], idx[i + rng.below(idx.size() - i)]);
    }
    std::size_t best = idx[0];
    for (std::size_t i = 1; i < take; ++i) {
      if (record_less(population[idx[i]], population[best])) best = idx[i];
    }
    const Genome child = mutate(population[best].genome, space, cseed);
    const std::uint64_t tseed = genome_train_seed(opt.seed, child);
    const EvalOutcome out = safe_eval(eval, child, tseed);
    store.add(child, tseed, out);
    if (!out.ok) continue;
    population.push_back({child, genome_hash(child), out.val_nmse_db, tseed, out.report});
    if (static_cast<int>(population.size()) > cfg.population) population.pop_front();
  }
  return store.finish(Json{{"population", cfg.population},
                           {"sample_size", cfg.sample_size},
                           {"cycles", cfg.cycles}});
}

std::vector<Genome> enumerate_space(const SearchSpace& space, int cap) {
  check_space(space);
  const BigInt card = space_cardinality(space);
  if (card > cap) {
    fail(ErrorKind::kInvalidArgument,
         "space has " + card.str() + " genomes, above the exhaustive cap of " +
             std::to_string(cap));
  }
  const auto pairs = all_skip_pairs(space.k_layers);
  const int n_side = space.search_pruning ? space.k_layers - 1 : 0;
  const int n_neuron = space.search_neurons ? space.k_layers : 0;
  const auto total = static_cast<std::uint64_t>(card);
  std::vector<Genome> out;
  out.reserve(total);
  for (std::uint64_t code = 0; code < total; ++code) {
    Genome g = base_genome(space);
    std::uint64_t rest = code;
    for (const auto& pr : pairs) {
      if (rest & 1) g.skip_gates.insert(pr);
      rest >>= 1;
    }
    for (int s = 0; s < n_side; ++s) {
      g.side_gates[s + 1] = !(rest & 1);
      rest >>= 1;
    }
    for (int j = 0; j < n_neuron; ++j) {
      g.neurons[j] = kAllNeurons[rest % 3];
      rest /= 3;
    }
    out.push_back(std::move(g));
  }
  return out;
}

SearchResult exhaustive_search(const SearchSpace& space, const Evaluator& eval,
                               const SearchOptions& opt, int cap) {
  const auto genomes = enumerate_space(space, cap);
  Store store("exhaustive", space, opt.seed);
  std::vector<std::uint64_t> seeds;
  for (const auto& g : genomes) seeds.push_back(genome_train_seed(opt.seed, g));
  const auto outs = eval_batch(genomes, seeds, eval, opt.workers);
  for (std::size_t i = 0; i < genomes.size(); ++i) store.add(genomes[i], seeds[i], outs[i]);
  return store.finish(Json{{"cap", cap}});
}

int default_top_k(int budget) {
  return std::max(1, std::min(50, budget / 5));
}

FractionMap fraction_map(const std::vector<Genome>& genomes) {
  require(!genomes.empty(), "fraction_map: empty genome list");
  const int kk = genomes.front().k_layers;
  FractionMap f;
  f.k_layers = kk;
  f.count = static_cast<int>(genomes.size());
  const int dim = std::max(kk - 1, 0);
  f.conn = Matrix::Zero(dim, dim);
  f.neurons = Matrix::Zero(kk, 3);
  for (const auto& g : genomes) {
    require(g.k_layers == kk, "fraction_map: genomes have different depths");
    for (const auto& [i, k] : g.skip_gates) f.conn(k - 1, i - 1) += 1.0;
    for (int k = 1; k <= dim; ++k) f.conn(k - 1, k - 1) += g.side_gates[k] ? 1.0 : 0.0;
    for (int j = 0; j < kk; ++j) f.neurons(j, static_cast<int>(g.neurons[j])) += 1.0;
  }
  f.conn /= f.count;
  f.neurons /= f.count;
  return f;
}

Genome average_architecture(const std::vector<Genome>& genomes, double threshold) {
  const FractionMap f = fraction_map(genomes);
  for (const auto& g : genomes) {
    require(g.fusion == genomes.front().fusion,
            "average_architecture: genomes have different fusion modes");
  }
  Genome out = genome_lista(f.k_layers);
  out.fusion = genomes.front().fusion;
  for (int k = 1; k <= f.k_layers - 1; ++k) {
    for (int i = 1; i < k; ++i) {
      if (f.conn(k - 1, i - 1) >= threshold) out.skip_gates.emplace(i, k);
    }
    out.side_gates[k] = f.conn(k - 1, k - 1) >= threshold;
  }
  for (int j = 0; j < f.k_layers; ++j) {
    int best = 0;
    for (int t = 1; t < 3; ++t) {
      if (f.neurons(j, t) > f.neurons(j, best)) best = t;
    }
    out.neurons[j] = kAllNeurons[best];
  }
  return out;
}

std::vector<Genome> top_genomes(const SearchResult& r, int k) {
  std::vector<Genome> out;
  for (int i = 0; i < k && i < static_cast<int>(r.ranked.size()); ++i) {
    out.push_back(r.ranked[i].genome);
  }
  return out;
}

std::string fraction_csv(const FractionMap& f) {
  std::ostringstream out;
  out << "target";
  for (int i = 1; i < f.k_layers; ++i) out << ",x" << i;
  out << '\n';
  char buf[32];
  for (int k = 1; k < f.k_layers; ++k) {
    out << k;
    for (int i = 1; i < f.k_layers; ++i) {
      out << ',';
      if (i <= k) {
        std::snprintf(buf, sizeof buf, "%.6g", f.conn(k - 1, i - 1));
        out << buf;
      }
    }
    out << '\n';
  }
  return out.str();
}

std::string neuron_csv(const FractionMap& f) {
  std::ostringstream out;
  out << "layer";
  for (NeuronType t : kAllNeurons) out << ',' << neuron_name(t);
  out << '\n';
  char buf[32];
  for (int j = 0; j < f.k_layers; ++j) {
    out << j + 1;
    for (int t = 0; t < 3; ++t) {
      std::snprintf(buf, sizeof buf, "%.6g", f.neurons(j, t));
      out << ',' << buf;
    }
    out << '\n';
  }
  return out.str();
}

void write_search_result(const SearchResult& r, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir / "records", ec);
  if (ec) fail(ErrorKind::kIo, "cannot create " + (dir / "records").string());

  Json history = Json::array();
  for (const auto& rec : r.history) history.push_back(hex64(rec.hash));
  Json failures = Json::array();
  for (const auto& f : r.failures) failures.push_back(outcome_failure(f));
  const Json manifest{{"strategy", r.strategy},
                      {"seed", r.seed},
                      {"space", space_to_json(r.space)},
                      {"config", r.config},
                      {"budget_used", r.budget_used},
                      {"history", history},
                      {"failures", failures}};
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");

  for (const auto& rec : r.history) {
    const Json j{{"genome", genome_to_json(rec.genome)},
                 {"hash", hex64(rec.hash)},
                 {"val_nmse_db", rec.val_nmse_db},
                 {"train_seed", rec.train_seed},
                 {"report", rec.report}};
    write_file(dir / "records" / (hex64(rec.hash) + ".json"), j.dump(2) + "\n");
  }

  std::ostringstream csv;
  csv.precision(17);
  csv << "rank,genome_hash,nmse_db,extra_connections\n";
  for (std::size_t i = 0; i < r.ranked.size(); ++i) {
    csv << i + 1 << ',' << hex64(r.ranked[i].hash) << ',' << r.ranked[i].val_nmse_db
        << ',' << count_extra(r.ranked[i].genome) << '\n';
  }
  write_file(dir / "rankings.csv", csv.str());
}

SearchResult read_search_result(const std::filesystem::path& dir) {
  const std::string text = read_file(dir / "manifest.json");
  try {
    const Json m = Json::parse(text);
    SearchResult r;
    r.strategy = m.at("strategy").get<std::string>();
    r.seed = m.at("seed").get<std::uint64_t>();
    r.space = space_from_json(m.at("space"));
    r.config = m.at("config");
    r.budget_used = m.at("budget_used").get<int>();
    for (const auto& h : m.at("history")) {
      const std::string name = h.get<std::string>();
      const Json rec = Json::parse(read_file(dir / "records" / (name + ".json")));
      SearchRecord sr;
      sr.genome = genome_from_json(rec.at("genome"));
      sr.hash = parse_hex64(rec.at("hash").get<std::string>());
      if (sr.hash != genome_hash(sr.genome) || sr.hash != parse_hex64(name)) {
        fail(ErrorKind::kFormat, "record " + name + " does not match its genome");
      }
      sr.val_nmse_db = rec.at("val_nmse_db").get<double>();
      sr.train_seed = rec.at("train_seed").get<std::uint64_t>();
      sr.report = rec.at("report");
      r.history.push_back(std::move(sr));
    }
    for (const auto& f : m.at("failures")) {
      SearchFailure sf;
      sf.genome = genome_from_json(f.at("genome"));
      sf.hash = parse_hex64(f.at("hash").get<std::string>());
      sf.error = f.at("error").get<std::string>();
      r.failures.push_back(std::move(sf));
    }
    r.ranked = r.history;
    rank_records(r.ranked);
    return r;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kFormat, "search result " + dir.string() + ": " + e.what());
  }
}

}  // namespace lista

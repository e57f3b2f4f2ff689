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

#include "lista/experiments.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "lista/rng.h"
#include "lista/runtime.h"
#include "lista/solvers.h"

namespace lista {

namespace {

Json data_to_json(const DataSpec& d) {
  return Json{{"count", d.count},
              {"signal", signal_to_string(d.signal)},
              {"noise", noise_to_string(d.noise)},
              {"seed", d.seed}};
}

DataSpec data_from_json(const Json& j, DataSpec d) {
  d.count = j.value("count", d.count);
  if (j.contains("signal")) d.signal = parse_signal(j["signal"].get<std::string>());
  if (j.contains("noise")) d.noise = parse_noise(j["noise"].get<std::string>());
  d.seed = j.value("seed", d.seed);
  return d;
}

Json dict_to_json(const DictSpec& d) {
  Json j{{"m", d.m}, {"n", d.n}, {"rank", d.rank}, {"seed", d.seed}};
  if (d.test_perturb) {
    j["test_perturb"] = *d.test_perturb;
    j["perturb_seed"] = d.perturb_seed;
  }
  return j;
}

DictSpec dict_from_json(const Json& j, DictSpec d) {
  d.m = j.value("m", d.m);
  d.n = j.value("n", d.n);
  d.rank = j.value("rank", d.rank);
  d.seed = j.value("seed", d.seed);
  if (j.contains("test_perturb") && !j["test_perturb"].is_null()) {
    d.test_perturb = j["test_perturb"].get<double>();
  }
  d.perturb_seed = j.value("perturb_seed", d.perturb_seed);
  return d;
}

Dictionary build_dictionary(const DictSpec& d) {
  return d.rank > 0 ? sample_lowrank_dictionary(d.m, d.rank, d.n, d.seed)
                    : sample_dictionary(d.m, d.n, d.seed);
}

struct SeedData {
  Dataset train;
  Dataset val;
  Dataset test;
};

SeedData build_data(const ExperimentSpec& s, const Dictionary& d,
                    const Dictionary& test_d, std::uint64_t rep) {
  auto make = [&](const Dictionary& dict, const DataSpec& ds, Split split) {
    return make_dataset(dict, ds.count, ds.signal, ds.noise, mix_seeds(ds.seed, rep),
                        split);
  };
  return {make(d, s.train, Split::kTrain), make(d, s.val, Split::kVal),
          make(test_d, s.test, Split::kTest)};
}

std::uint64_t pair_hash(std::uint64_t a, std::uint64_t b) { return mix_seeds(a, b); }

double baseline_nmse(const std::string& label, const Dictionary& d, const Dataset& test,
                     int k_layers, double lambda) {
  if (label == "ista") {
    return nmse_db(ista_batch(d.data, test.b, lambda, k_layers), test.x_true);
  }
  Matrix x(d.n, test.count());
  const double l = spectral_sq_norm(d.data);
  for (int c = 0; c < test.count(); ++c) {
    x.col(c) = fista(d.data, test.b.col(c), lambda, k_layers, l).iterates.back();
  }
  return nmse_db(x, test.x_true);
}

std::string side_pattern(const Genome& g) {
  std::string s;
  for (bool on : g.side_gates) s += on ? '1' : '0';
  return s;
}

ExperimentCell run_cell(const std::string& label, const Genome* g, std::uint64_t seed,
                        const Dictionary& d, const SeedData& data,
                        const TrainConfig& base_cfg, int k_layers) {
  ExperimentCell c;
  c.genome = label;
  c.seed = seed;
  c.train_hash = pair_hash(data.train.content_hash(), data.val.content_hash());
  c.test_hash = data.test.content_hash();
  try {
    if (g == nullptr) {
      c.nmse_db = baseline_nmse(label, d, data.test, k_layers, base_cfg.lambda);
      c.val_nmse_db = baseline_nmse(label, d, data.val, k_layers, base_cfg.lambda);
    } else {
      c.genome_hash = genome_hash(*g);
      TrainConfig cfg = base_cfg;
      cfg.seed = seed;
      const TrainReport r = train(*g, d, data.train, data.val, cfg);
      c.val_nmse_db = r.val_nmse_db;
      c.nmse_db = evaluate_nmse(*g, r.final_params, data.test);
    }
    c.ok = true;
  } catch (const Error& e) {
    c.error = e.what();
  }
  return c;
}

ExperimentReport report_header(const ExperimentSpec& s, const Dictionary& d,
                               const Dictionary& test_d) {
  ExperimentReport r;
  r.name = s.name;
  r.mode = s.mode;
  r.spec_hash = spec_hash(s);
  r.dict_id = d.id();
  r.test_dict_id = test_d.id();
  Json train_side{{"dictionary", dict_to_json(s.dictionary)},
                  {"train", data_to_json(s.train)},
                  {"val", data_to_json(s.val)},
                  {"k_layers", s.k_layers},
                  {"train_config", config_to_json(s.train_config)}};
  train_side["dictionary"].erase("test_perturb");
  train_side["dictionary"].erase("perturb_seed");
  r.train_spec_hash = fnv1a64(train_side.dump());
  Json test_side{{"test", data_to_json(s.test)}};
  if (s.dictionary.test_perturb) {
    test_side["test_perturb"] = *s.dictionary.test_perturb;
    test_side["perturb_seed"] = s.dictionary.perturb_seed;
  }
  r.test_spec_hash = fnv1a64(test_side.dump());
  return r;
}

Dictionary test_dictionary(const ExperimentSpec& s, const Dictionary& d) {
  if (!s.dictionary.test_perturb) return d;
  return perturb_dictionary(d, *s.dictionary.test_perturb, s.dictionary.perturb_seed);
}

std::string csv_field(const std::string& v) {
  if (v.find_first_of(",\"\n") == std::string::npos) return v;
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

bool is_baseline(const std::string& label) { return label == "ista" || label == "fista"; }

Genome resolve_genome(const std::string& label, int k_layers,
                      const std::filesystem::path& base_dir) {
  Genome g;
  if (label.rfind("file:", 0) == 0) {
    std::filesystem::path p = label.substr(5);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    g = load_genome(p);
  } else {
    const auto colon = label.find(':');
    g = genome_preset(label.substr(0, colon), k_layers);
    if (colon != std::string::npos) g.fusion = parse_fusion(label.substr(colon + 1));
  }
  const auto violations = validate_genome(g);
  if (!violations.empty()) {
    std::string msg = "genome '" + label + "' is invalid:";
    for (const auto& v : violations) msg += "\n  " + v;
    fail(ErrorKind::kInvalidArgument, msg);
  }
  return g;
}

Json spec_to_json(const ExperimentSpec& s) {
  return Json{{"name", s.name},
              {"mode", s.mode},
              {"dictionary", dict_to_json(s.dictionary)},
              {"train", data_to_json(s.train)},
              {"val", data_to_json(s.val)},
              {"test", data_to_json(s.test)},
              {"mismatch", s.mismatch},
              {"k_layers", s.k_layers},
              {"genomes", s.genomes},
              {"train_config", config_to_json(s.train_config)},
              {"seeds", s.seeds},
              {"pruning",
               {{"base", s.pruning.base},
                {"samples", s.pruning.samples},
                {"seed", s.pruning.seed}}},
              {"workers", s.workers}};
}

ExperimentSpec spec_from_json(const Json& j, const std::filesystem::path& base_dir) {
  ExperimentSpec s;
  s.base_dir = base_dir;
  try {
    s.name = j.value("name", s.name);
    s.mode = j.value("mode", s.mode);
    if (j.contains("dictionary")) s.dictionary = dict_from_json(j["dictionary"], s.dictionary);
    if (j.contains("train")) s.train = data_from_json(j["train"], s.train);
    if (j.contains("val")) s.val = data_from_json(j["val"], s.val);
    if (j.contains("test")) s.test = data_from_json(j["test"], s.test);
    s.mismatch = j.value("mismatch", s.mismatch);
    s.k_layers = j.value("k_layers", s.k_layers);
    s.genomes = j.value("genomes", s.genomes);
    if (j.contains("train_config")) {
      s.train_config = config_from_json(j["train_config"], s.train_config);
    }
    s.seeds = j.value("seeds", s.seeds);
    if (j.contains("pruning")) {
      const Json& p = j["pruning"];
      s.pruning.base = p.value("base", s.pruning.base);
      s.pruning.samples = p.value("samples", s.pruning.samples);
      s.pruning.seed = p.value("seed", s.pruning.seed);
    }
    s.workers = j.value("workers", s.workers);
  } catch (const Json::exception& e) {
    fail(ErrorKind::kFormat, std::string("experiment spec: ") + e.what());
  }
  validate_spec(s);
  return s;
}

ExperimentSpec load_spec(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    fail(ErrorKind::kFormat, path.string() + ": " + e.what());
  }
  return spec_from_json(j, path.parent_path());
}

void validate_spec(const ExperimentSpec& s) {
  require(s.mode == "compare" || s.mode == "pruning",
          "mode must be 'compare' or 'pruning', got '" + s.mode + "'");
  require(s.dictionary.m >= 1 && s.dictionary.n >= 1, "dictionary needs m, n >= 1");
  require(s.dictionary.rank >= 0 && s.dictionary.rank <= std::min(s.dictionary.m, s.dictionary.n),
          "dictionary rank out of range");
  require(!s.dictionary.test_perturb || *s.dictionary.test_perturb > 0.0,
          "test_perturb must be > 0");
  require(s.train.count >= 1 && s.val.count >= 1 && s.test.count >= 1,
          "train, val and test counts must be >= 1");
  require(s.k_layers >= 2, "k_layers must be >= 2");
  require(!s.seeds.empty(), "at least one seed is required");
  require(s.workers >= 1, "workers must be >= 1");
  validate_config(s.train_config);
  const bool differs = noise_to_string(s.train.noise) != noise_to_string(s.test.noise) ||
                       signal_to_string(s.train.signal) != signal_to_string(s.test.signal) ||
                       s.dictionary.test_perturb.has_value();
  if (s.mismatch) {
    require(differs, "mismatch spec needs a distinct test noise/signal or a perturbed dictionary");
  } else {
    require(!differs, "test data differs from training; set \"mismatch\": true");
  }
  // A missing genome file is a spec error, reported before any training.
  auto check_genome = [&](const std::string& label) {
    try {
      resolve_genome(label, s.k_layers, s.base_dir);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kIo) throw;
      fail(ErrorKind::kInvalidArgument, "genome '" + label + "': " + e.what());
    }
  };
  if (s.mode == "compare") {
    require(!s.genomes.empty(), "no genomes to compare");
    for (const auto& label : s.genomes) {
      if (!is_baseline(label)) check_genome(label);
    }
  } else {
    require(s.pruning.samples >= 1, "pruning samples must be >= 1");
    check_genome(s.pruning.base);
  }
}

std::uint64_t spec_hash(const ExperimentSpec& s) {
  Json j = spec_to_json(s);
  j.erase("workers");
  return fnv1a64(j.dump());
}

std::vector<GenomeSummary> summarize(const std::vector<ExperimentCell>& cells) {
  std::vector<GenomeSummary> out;
  std::map<std::string, std::vector<double>> values;
  for (const auto& c : cells) {
    if (!values.count(c.genome)) out.push_back({c.genome});
    auto& v = values[c.genome];
    if (c.ok) v.push_back(c.nmse_db);
  }
  for (auto& s : out) {
    const auto& v = values[s.genome];
    s.n = static_cast<int>(v.size());
    if (v.empty()) continue;
    double sum = 0.0;
    for (double x : v) sum += x;
    s.mean_db = sum / s.n;
    if (s.n >= 2) {
      double ss = 0.0;
      for (double x : v) ss += (x - s.mean_db) * (x - s.mean_db);
      s.std_db = std::sqrt(ss / (s.n - 1));
    }
  }
  return out;
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
  validate_spec(spec);
  if (spec.mode == "pruning") {
    return pruning_study(resolve_genome(spec.pruning.base, spec.k_layers, spec.base_dir),
                         spec.pruning.samples, spec, spec.pruning.seed);
  }
  const Dictionary d = build_dictionary(spec.dictionary);
  const Dictionary test_d = test_dictionary(spec, d);
  ExperimentReport r = report_header(spec, d, test_d);

  std::vector<std::unique_ptr<Genome>> genomes;
  for (const auto& label : spec.genomes) {
    genomes.push_back(is_baseline(label) ? nullptr
                                         : std::make_unique<Genome>(resolve_genome(
                                               label, spec.k_layers, spec.base_dir)));
  }
  std::vector<SeedData> data;
  for (std::uint64_t seed : spec.seeds) data.push_back(build_data(spec, d, test_d, seed));

  const std::size_t ng = spec.genomes.size();
  r.cells.resize(ng * spec.seeds.size());
  parallel_for(r.cells.size(), spec.workers, [&](std::size_t i) {
    const std::size_t gi = i / spec.seeds.size();
    const std::size_t si = i % spec.seeds.size();
    r.cells[i] = run_cell(spec.genomes[gi], genomes[gi].get(), spec.seeds[si], d,
                          data[si], spec.train_config, spec.k_layers);
  });
  r.summaries = summarize(r.cells);
  return r;
}

ExperimentReport pruning_study(const Genome& base, int samples, const ExperimentSpec& spec,
                               std::uint64_t seed) {
  require(samples >= 1, "pruning_study: samples must be >= 1");
  require(validate_genome(base).empty(), "pruning_study: invalid base genome");
  require(base.k_layers >= 2, "pruning_study: base needs at least two layers");
  const int free_gates = base.k_layers - 1;
  const double patterns = std::ldexp(1.0, free_gates) - 1.0;
  require(samples <= patterns, "pruning_study: only " +
                                   std::to_string(static_cast<long long>(patterns)) +
                                   " pruned patterns exist");

  const Dictionary d = build_dictionary(spec.dictionary);
  const Dictionary test_d = test_dictionary(spec, d);
  ExperimentReport r = report_header(spec, d, test_d);
  r.mode = "pruning";
  const SeedData data = build_data(spec, d, test_d, seed);

  Genome full = base;
  std::fill(full.side_gates.begin(), full.side_gates.end(), true);
  std::vector<Genome> pruned;
  std::set<std::string> used{side_pattern(full)};
  for (std::uint64_t draw = 0; static_cast<int>(pruned.size()) < samples; ++draw) {
    CounterRng rng(mix_seeds(seed, 0x9a), draw);
    Genome g = base;
    for (int j = 2; j <= base.k_layers; ++j) g.side_gates[j - 1] = rng.bernoulli(0.5);
    if (used.insert(side_pattern(g)).second) pruned.push_back(std::move(g));
  }

  // Every pruned genome, then the single reconnected genome shared by all pairs.
  std::vector<ExperimentCell> runs(pruned.size() + 1);
  parallel_for(runs.size(), spec.workers, [&](std::size_t i) {
    const Genome& g = i < pruned.size() ? pruned[i] : full;
    runs[i] = run_cell("pattern:" + side_pattern(g), &g, seed, d, data, spec.train_config,
                       spec.k_layers);
  });
  const ExperimentCell& rec = runs.back();
  int wins = 0;
  for (std::size_t i = 0; i < pruned.size(); ++i) {
    r.cells.push_back(runs[i]);
    ExperimentCell paired = rec;
    paired.genome = "reconnected:" + side_pattern(pruned[i]);
    r.cells.push_back(paired);
    if (!runs[i].ok || !rec.ok) continue;
    PruningPair p{side_pattern(pruned[i]), runs[i].genome_hash, runs[i].nmse_db,
                  rec.nmse_db, runs[i].nmse_db - rec.nmse_db};
    wins += p.delta_db > 0.0;
    r.pairs.push_back(std::move(p));
  }
  r.reconnect_win_rate = r.pairs.empty() ? 0.0 : static_cast<double>(wins) / r.pairs.size();
  r.summaries = summarize(r.cells);
  return r;
}

Json experiment_report_to_json(const ExperimentReport& r) {
  Json cells = Json::array();
  for (const auto& c : r.cells) {
    Json j{{"genome", c.genome},
           {"genome_hash", hex64(c.genome_hash)},
           {"seed", c.seed},
           {"status", c.ok ? "ok" : "failed"},
           {"train_hash", hex64(c.train_hash)},
           {"test_hash", hex64(c.test_hash)}};
    if (c.ok) {
      j["nmse_db"] = c.nmse_db;
      j["val_nmse_db"] = c.val_nmse_db;
    } else {
      j["error"] = c.error;
    }
    cells.push_back(std::move(j));
  }
  Json sums = Json::array();
  for (const auto& s : r.summaries) {
    sums.push_back({{"genome", s.genome}, {"n", s.n}, {"mean_db", s.mean_db},
                    {"std_db", s.std_db}});
  }
  Json out{{"name", r.name},
           {"mode", r.mode},
           {"spec_hash", hex64(r.spec_hash)},
           {"dict_id", r.dict_id},
           {"test_dict_id", r.test_dict_id},
           {"train_spec_hash", hex64(r.train_spec_hash)},
           {"test_spec_hash", hex64(r.test_spec_hash)},
           {"cells", cells},
           {"summaries", sums}};
  if (r.mode == "pruning") {
    Json pairs = Json::array();
    for (const auto& p : r.pairs) {
      pairs.push_back({{"pattern", p.pattern}, {"pruned_hash", hex64(p.pruned_hash)},
                       {"pruned_db", p.pruned_db}, {"reconnected_db", p.reconnected_db},
                       {"delta_db", p.delta_db}});
    }
    out["pairs"] = pairs;
    out["reconnect_win_rate"] = r.reconnect_win_rate;
  }
  return out;
}

ExperimentReport experiment_report_from_json(const Json& j) {
  auto hex = [](const Json& v) {
    return static_cast<std::uint64_t>(std::stoull(v.get<std::string>(), nullptr, 16));
  };
  try {
    ExperimentReport r;
    r.name = j.at("name").get<std::string>();
    r.mode = j.at("mode").get<std::string>();
    r.spec_hash = hex(j.at("spec_hash"));
    r.dict_id = j.at("dict_id").get<std::string>();
    r.test_dict_id = j.at("test_dict_id").get<std::string>();
    r.train_spec_hash = hex(j.at("train_spec_hash"));
    r.test_spec_hash = hex(j.at("test_spec_hash"));
    for (const auto& c : j.at("cells")) {
      ExperimentCell cell;
      cell.genome = c.at("genome").get<std::string>();
      cell.genome_hash = hex(c.at("genome_hash"));
      cell.seed = c.at("seed").get<std::uint64_t>();
      cell.ok = c.at("status").get<std::string>() == "ok";
      cell.train_hash = hex(c.at("train_hash"));
      cell.test_hash = hex(c.at("test_hash"));
      if (cell.ok) {
        cell.nmse_db = c.at("nmse_db").get<double>();
        cell.val_nmse_db = c.at("val_nmse_db").get<double>();
      } else {
        cell.error = c.value("error", std::string());
      }
      r.cells.push_back(std::move(cell));
    }
    for (const auto& s : j.at("summaries")) {
      r.summaries.push_back({s.at("genome").get<std::string>(), s.at("n").get<int>(),
                             s.at("mean_db").get<double>(), s.at("std_db").get<double>()});
    }
    if (j.contains("pairs")) {
      for (const auto& p : j["pairs"]) {
        r.pairs.push_back({p.at("pattern").get<std::string>(), hex(p.at("pruned_hash")),
                           p.at("pruned_db").get<double>(),
                           p.at("reconnected_db").get<double>(),
                           p.at("delta_db").get<double>()});
      }
      r.reconnect_win_rate = j.at("reconnect_win_rate").get<double>();
    }
    return r;
  } catch (const std::exception& e) {
    fail(ErrorKind::kFormat, std::string("experiment report: ") + e.what());
  }
}

std::string emit_report(const ExperimentReport& r, ReportFormat f) {
  if (f == ReportFormat::kJson) return experiment_report_to_json(r).dump(2) + "\n";
  std::ostringstream out;
  out << "experiment,genome,seed,nmse_db,status\n";
  for (const auto& c : r.cells) {
    out << csv_field(r.name) << ',' << csv_field(c.genome) << ',' << c.seed << ','
        << (c.ok ? format_double(c.nmse_db) : std::string()) << ','
        << (c.ok ? "ok" : "failed") << '\n';
  }
  return out.str();
}

void write_report(const ExperimentReport& r, const std::filesystem::path& path,
                  ReportFormat f) {
  write_file(path, emit_report(r, f));
}

}  // namespace lista

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

#include "cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "lista/container.h"
#include "lista/experiments.h"
#include "lista/genome.h"
#include "lista/network.h"
#include "lista/search.h"
#include "lista/synthgen.h"
#include "lista/trainer.h"

namespace lista::cli {

namespace {

namespace fs = std::filesystem;

const char* const kCommands[] = {"gen", "train", "search", "avg", "experiment", "report"};

struct Globals {
  std::uint64_t seed = 0;
  int threads = 1;
  std::string out_dir = ".";
  bool test_mode = false;
  std::string config;
};

struct GenOpts {
  int m = 0;
  int n = 0;
  int count = 0;
  std::string signal = "bernoulli:0.1";
  std::string noise = "none";
  std::string split = "train";
  std::string dict;  // dataset file whose embedded dictionary is reused
  std::uint64_t dict_seed = 1;
  int rank = 0;
  double perturb = 0.0;
  std::uint64_t perturb_seed = 2;
  std::string out = "data.usrd";
};

struct TrainOpts {
  std::string genome;
  int k = 8;
  std::string data;
  std::string val;
  int batch = 0;
  double lr = 0.0;
  double lambda = -1.0;
  int steps_per_stage = -1;
  int val_every = 0;
  int patience = 0;
  double min_improve = -1.0;
  int max_epochs = -1;
  int max_steps = -2;
};

struct SearchOpts {
  std::string strategy = "random";
  int budget = 32;
  int population = 64;
  int sample = 16;
  int cycles = 100;
  std::string fusion = "lwa";
  bool search_neurons = false;
  bool search_pruning = false;
  bool include_presets = false;
};

struct AvgOpts {
  std::string results;
  int top = 0;
  int compare_top = 0;
  double threshold = 0.5;
};

struct ExperimentOpts {
  std::string spec;
};

struct ReportOpts {
  std::vector<std::string> inputs;
  std::string out = "summary.csv";
};

void add_globals(CLI::App* sub, Globals& g) {
  sub->add_option("--seed", g.seed, "Master seed")->capture_default_str();
  sub->add_option("--threads", g.threads, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--out-dir", g.out_dir, "Output directory")->capture_default_str();
  sub->add_flag("--test-mode", g.test_mode,
                "Deterministic output: wall times written as 0");
  sub->add_option("--config", g.config, "JSON file of option values; flags win");
}

void add_train_flags(CLI::App* sub, TrainOpts& o) {
  sub->add_option("--k", o.k, "Layers for preset genomes")->capture_default_str();
  sub->add_option("--data", o.data, "Training dataset (.usrd)")->required();
  sub->add_option("--val", o.val, "Validation dataset; default holds out 10% of --data");
  sub->add_option("--batch", o.batch, "Mini-batch size (default 128)");
  sub->add_option("--lr", o.lr, "Base learning rate (default 5e-4)");
  sub->add_option("--lambda", o.lambda, "Lasso weight for the initialization (default 0.4)");
  sub->add_option("--steps-per-stage", o.steps_per_stage,
                  "Step cap per sub-stage; 0 means one epoch");
  sub->add_option("--val-every", o.val_every, "Steps between validations (default 20)");
  sub->add_option("--patience", o.patience, "Stalled validations before stopping (default 5)");
  sub->add_option("--min-improve", o.min_improve, "Required gain in dB (default 0.01)");
  sub->add_option("--max-epochs", o.max_epochs, "Cap on total epochs; 0 disables");
  sub->add_option("--max-steps", o.max_steps, "Cap on total optimizer steps; -1 disables");
}

TrainConfig train_config(const TrainOpts& o, const Globals& g) {
  TrainConfig c;
  if (o.batch > 0) c.batch_size = o.batch;
  if (o.lr > 0) c.lr0 = o.lr;
  if (o.lambda >= 0) c.lambda = o.lambda;
  if (o.steps_per_stage >= 0) c.steps_per_stage = o.steps_per_stage;
  if (o.val_every > 0) c.val_every = o.val_every;
  if (o.patience > 0) c.patience = o.patience;
  if (o.min_improve >= 0) c.min_improve_db = o.min_improve;
  if (o.max_epochs >= 0) c.max_epochs_guard = o.max_epochs;
  if (o.max_steps >= -1) c.max_steps = o.max_steps;
  c.seed = g.seed;
  c.record_wall_time = !g.test_mode;
  validate_config(c);
  return c;
}

std::string file_hash(const std::string& path) {
  return hex64(fnv1a64(read_file(path)));
}

void write_out(const fs::path& path, const std::string& bytes, Json& outputs) {
  write_file(path, bytes);
  outputs[path.filename().string()] = hex64(fnv1a64(bytes));
}

void write_manifest(const Globals& g, const std::string& command, Json options,
                    Json inputs, Json outputs) {
  options["seed"] = g.seed;
  options["test_mode"] = g.test_mode;
  const Json m{{"command", command},
               {"options", std::move(options)},
               {"inputs", std::move(inputs)},
               {"outputs", std::move(outputs)}};
  write_file(fs::path(g.out_dir) / (command + ".manifest.json"), m.dump(2) + "\n");
}

void ensure_out_dir(const Globals& g) {
  std::error_code ec;
  fs::create_directories(g.out_dir, ec);
  if (ec) fail(ErrorKind::kIo, "cannot create output directory " + g.out_dir);
}

Genome genome_arg(const std::string& label, int k) {
  if (is_baseline(label)) {
    fail(ErrorKind::kInvalidArgument, "'" + label + "' is a solver, not a trainable genome");
  }
  return resolve_genome(label, k, {});
}

// Training data, validation data and the dictionary embedded in the former.
struct TrainInputs {
  Dictionary dict;
  Dataset train;
  Dataset val;
  Json hashes;
};

Dataset column_slice(const Dataset& ds, Eigen::Index from, Eigen::Index count, Split split) {
  Dataset out = ds;
  out.x_true = ds.x_true.middleCols(from, count);
  out.b = ds.b.middleCols(from, count);
  out.split = split;
  out.dictionary.reset();
  return out;
}

TrainInputs load_train_inputs(const TrainOpts& o) {
  TrainInputs in;
  Dataset data = read_dataset(o.data);
  in.hashes[o.data] = file_hash(o.data);
  if (!data.dictionary) {
    fail(ErrorKind::kInvalidArgument, o.data + " has no embedded dictionary");
  }
  in.dict = *data.dictionary;
  if (o.val.empty()) {
    require(data.count() >= 2, "need at least 2 samples to hold out validation data");
    const Eigen::Index hold = std::max<Eigen::Index>(1, data.count() / 10);
    const Eigen::Index keep = data.count() - hold;
    in.train = column_slice(data, 0, keep, Split::kTrain);
    in.val = column_slice(data, keep, hold, Split::kVal);
  } else {
    in.val = read_dataset(o.val);
    in.hashes[o.val] = file_hash(o.val);
    check_dataset_matches(in.val, in.dict);
    data.dictionary.reset();
    in.train = std::move(data);
  }
  return in;
}

int cmd_gen(const Globals& g, const GenOpts& o) {
  Dictionary d;
  Json inputs = Json::object();
  if (!o.dict.empty()) {
    const Dataset src = read_dataset(o.dict);
    inputs[o.dict] = file_hash(o.dict);
    if (!src.dictionary) fail(ErrorKind::kInvalidArgument, o.dict + " has no dictionary");
    d = *src.dictionary;
  } else {
    if (o.m < 1 || o.n < 1) {
      fail(ErrorKind::kInvalidArgument, "--m and --n are required without --dict");
    }
    d = o.rank > 0 ? sample_lowrank_dictionary(o.m, o.rank, o.n, o.dict_seed)
                   : sample_dictionary(o.m, o.n, o.dict_seed);
  }
  if (o.perturb > 0) d = perturb_dictionary(d, o.perturb, o.perturb_seed);
  require(o.count >= 1, "--count must be >= 1");
  const Dataset ds = make_dataset(d, o.count, parse_signal(o.signal), parse_noise(o.noise),
                                  g.seed, parse_split(o.split), true);
  ensure_out_dir(g);
  const fs::path path = fs::path(g.out_dir) / o.out;
  write_dataset(ds, path);
  Json outputs{{o.out, file_hash(path.string())}};
  write_manifest(g, "gen",
                 Json{{"m", d.m}, {"n", d.n}, {"count", o.count}, {"signal", o.signal},
                      {"noise", o.noise}, {"split", o.split}, {"dict_id", d.id()},
                      {"dict", gen_spec_to_string(d.gen)}},
                 inputs, outputs);
  std::cout << "wrote " << path.string() << " (" << o.count << " samples, dictionary "
            << d.id() << ")\n";
  return kExitOk;
}

int cmd_train(const Globals& g, const TrainOpts& o) {
  const Genome genome = genome_arg(o.genome, o.k);
  const TrainConfig cfg = train_config(o, g);
  const TrainInputs in = load_train_inputs(o);
  const TrainReport r = train(genome, in.dict, in.train, in.val, cfg);
  ensure_out_dir(g);
  const fs::path dir(g.out_dir);
  Json report = report_to_json(r);
  report["genome"] = genome_to_json(genome);
  report["config"] = config_to_json(cfg);
  report["dict_id"] = in.dict.id();
  Json outputs = Json::object();
  write_out(dir / "report.json", report.dump(2) + "\n", outputs);
  write_params(genome, r.final_params, dir / "params.usrp");
  outputs["params.usrp"] = file_hash((dir / "params.usrp").string());
  write_out(dir / "loss_curve.csv", loss_curve_csv(r), outputs);
  write_manifest(g, "train", Json{{"genome", o.genome}, {"config", config_to_json(cfg)}},
                 in.hashes, outputs);
  std::printf("%s: val NMSE %.2f dB (init %.2f dB) after %d steps\n", o.genome.c_str(),
              r.val_nmse_db, r.init_val_nmse_db, r.steps);
  return kExitOk;
}

int cmd_search(const Globals& g, const SearchOpts& s, const TrainOpts& o) {
  SearchSpace space;
  space.k_layers = o.k;
  space.fusion = parse_fusion(s.fusion);
  space.search_neurons = s.search_neurons;
  space.search_pruning = s.search_pruning;
  space.include_presets = s.include_presets;
  const TrainConfig cfg = train_config(o, g);
  const TrainInputs in = load_train_inputs(o);
  CachedEvaluator cached(make_training_evaluator(in.dict, in.train, in.val, cfg));
  Evaluator eval = [&cached](const Genome& gn, std::uint64_t seed) { return cached(gn, seed); };
  const SearchOptions opt{g.seed, g.threads};

  SearchResult r;
  if (s.strategy == "random") {
    require(s.budget >= 1, "--budget must be >= 1");
    r = random_search(space, s.budget, eval, opt);
  } else if (s.strategy == "evolution") {
    r = evolve(space, {s.population, s.sample, s.cycles}, eval, opt);
  } else if (s.strategy == "exhaustive") {
    r = exhaustive_search(space, eval, opt);
  } else {
    fail(ErrorKind::kInvalidArgument, "unknown strategy '" + s.strategy + "'");
  }
  r.config["train_config"] = config_to_json(cfg);
  r.config["inputs"] = in.hashes;
  r.config["dict_id"] = in.dict.id();
  ensure_out_dir(g);
  write_search_result(r, g.out_dir);
  std::printf("%s search: %d genomes evaluated, %zu failed\n", r.strategy.c_str(),
              r.budget_used, r.failures.size());
  if (!r.ranked.empty()) {
    std::printf("best %s: %.2f dB, %d extra connections\n", hex64(r.ranked[0].hash).c_str(),
                r.ranked[0].val_nmse_db, count_extra(r.ranked[0].genome));
  }
  return kExitOk;
}

int cmd_avg(const Globals& g, const AvgOpts& o) {
  const SearchResult r = read_search_result(o.results);
  const int available = static_cast<int>(r.ranked.size());
  const int top = o.top > 0 ? o.top : default_top_k(r.budget_used);
  auto check_top = [&](int k) {
    if (k > available) {
      fail(ErrorKind::kInvalidArgument, "--top " + std::to_string(k) + " exceeds the " +
                                            std::to_string(available) + " ranked results");
    }
  };
  check_top(top);
  if (o.compare_top > 0) check_top(o.compare_top);
  require(o.threshold >= 0.0 && o.threshold <= 1.0, "--threshold must lie in [0, 1]");

  const auto genomes = top_genomes(r, top);
  const FractionMap f = fraction_map(genomes);
  const Genome avg = average_architecture(genomes, o.threshold);
  ensure_out_dir(g);
  const fs::path dir(g.out_dir);
  Json outputs = Json::object();
  write_out(dir / "avg_genome.json", genome_to_json(avg).dump(2) + "\n", outputs);
  write_out(dir / "fractions.csv", fraction_csv(f), outputs);
  write_out(dir / "neurons.csv", neuron_csv(f), outputs);
  Json options{{"results", o.results}, {"top", top}, {"threshold", o.threshold}};
  std::printf("average of top-%d: %d extra connections, hash %s\n", top, count_extra(avg),
              hex64(genome_hash(avg)).c_str());
  if (o.compare_top > 0) {
    const Genome other = average_architecture(top_genomes(r, o.compare_top), o.threshold);
    const int diff = gene_distance(avg, other);
    int gates = max_extra(avg.k_layers);
    if (r.space.search_pruning) gates += avg.k_layers - 1;
    options["compare_top"] = o.compare_top;
    options["gate_diff"] = diff;
    options["gate_diff_fraction"] = static_cast<double>(diff) / std::max(gates, 1);
    std::printf("top-%d vs top-%d: %d of %d gates differ\n", top, o.compare_top, diff, gates);
  }
  Json inputs{{(fs::path(o.results) / "manifest.json").string(),
               file_hash((fs::path(o.results) / "manifest.json").string())}};
  write_manifest(g, "avg", options, inputs, outputs);
  return kExitOk;
}

int cmd_experiment(const Globals& g, const ExperimentOpts& o, bool threads_given) {
  ExperimentSpec spec = load_spec(o.spec);
  if (threads_given) spec.workers = g.threads;
  spec.train_config.record_wall_time = !g.test_mode;
  const ExperimentReport r = run_experiment(spec);
  ensure_out_dir(g);
  const fs::path dir(g.out_dir);
  Json outputs = Json::object();
  write_out(dir / (spec.name + ".csv"), emit_report(r, ReportFormat::kCsv), outputs);
  write_out(dir / (spec.name + ".json"), emit_report(r, ReportFormat::kJson), outputs);
  write_manifest(g, "experiment", Json{{"spec", o.spec}, {"spec_hash", hex64(r.spec_hash)}},
                 Json{{o.spec, file_hash(o.spec)}}, outputs);
  for (const auto& s : r.summaries) {
    std::printf("%-28s n=%d  mean %8.2f dB  std %.2f\n", s.genome.c_str(), s.n, s.mean_db,
                s.std_db);
  }
  if (r.mode == "pruning") {
    std::printf("reconnecting helps in %.0f%% of %zu pairs\n", 100.0 * r.reconnect_win_rate,
                r.pairs.size());
  }
  return kExitOk;
}

int cmd_report(const Globals& g, const ReportOpts& o) {
  std::ostringstream csv;
  csv << "experiment,genome,n,mean_db,std_db\n";
  Json inputs = Json::object();
  for (const auto& path : o.inputs) {
    const std::string text = read_file(path);
    inputs[path] = hex64(fnv1a64(text));
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::exception& e) {
      fail(ErrorKind::kFormat, path + ": " + e.what());
    }
    const ExperimentReport r = experiment_report_from_json(j);
    std::printf("%s (%s)\n", r.name.c_str(), r.mode.c_str());
    for (const auto& s : r.summaries) {
      csv << r.name << ',' << s.genome << ',' << s.n << ',' << format_double(s.mean_db)
          << ',' << format_double(s.std_db) << '\n';
      std::printf("  %-28s n=%d  mean %8.2f dB  std %.2f\n", s.genome.c_str(), s.n,
                  s.mean_db, s.std_db);
    }
  }
  ensure_out_dir(g);
  Json outputs = Json::object();
  write_out(fs::path(g.out_dir) / o.out, csv.str(), outputs);
  write_manifest(g, "report", Json{{"out", o.out}}, inputs, outputs);
  return kExitOk;
}

// Option values from a JSON config file, as command-line tokens. Top-level
// scalars apply to every command; an object keyed by the command name
// applies to that command only. Later tokens win, so these go first.
std::vector<std::string> config_tokens(const std::string& path, const std::string& command) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::exception& e) {
    fail(ErrorKind::kFormat, "config " + path + ": " + e.what());
  }
  require(j.is_object(), "config " + path + " must hold a JSON object");
  std::vector<std::string> out;
  auto emit = [&out](const std::string& key, const Json& v) {
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (v.is_boolean()) {
      if (v.get<bool>()) out.push_back(flag);
    } else if (v.is_array()) {
      for (const auto& e : v) {
        out.push_back(flag);
        out.push_back(e.is_string() ? e.get<std::string>() : e.dump());
      }
    } else {
      out.push_back(flag);
      out.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    }
  };
  const auto is_command = [](const std::string& k) {
    return std::find(std::begin(kCommands), std::end(kCommands), k) != std::end(kCommands);
  };
  for (const auto& [key, v] : j.items()) {
    if (is_command(key)) continue;
    if (key == "config") fail(ErrorKind::kInvalidArgument, "config files cannot nest");
    emit(key, v);
  }
  if (j.contains(command)) {
    require(j[command].is_object(), "config section '" + command + "' must be an object");
    for (const auto& [key, v] : j[command].items()) emit(key, v);
  }
  return out;
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::kIo:
    case ErrorKind::kChecksum:
      return kExitIo;
    case ErrorKind::kNumeric:
      return kExitNumeric;
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kFormat:
      return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);

  // The command goes first so options may appear on either side of it.
  const auto cmd_it = std::find_if(args.begin(), args.end(), [](const std::string& a) {
    return std::find(std::begin(kCommands), std::end(kCommands), a) != std::end(kCommands);
  });
  std::string command;
  if (cmd_it != args.end()) {
    command = *cmd_it;
    args.erase(cmd_it);
  }

  Globals g;
  GenOpts gen;
  TrainOpts tr;
  SearchOpts se;
  AvgOpts av;
  ExperimentOpts ex;
  ReportOpts rp;

  CLI::App app{"Unrolled sparse-coding networks: data, training, architecture search"};
  app.name("lista");
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  auto* s_gen = app.add_subcommand("gen", "Generate a synthetic dataset");
  add_globals(s_gen, g);
  s_gen->add_option("--m", gen.m, "Measurements per sample");
  s_gen->add_option("--n", gen.n, "Signal dimension");
  s_gen->add_option("--count", gen.count, "Samples")->required();
  s_gen->add_option("--signal", gen.signal, "bernoulli:<p> or gamma:<shape>,<scale>")
      ->capture_default_str();
  s_gen->add_option("--noise", gen.noise, "none, gaussian:<snr_db> or salt_pepper:<density>")
      ->capture_default_str();
  s_gen->add_option("--split", gen.split, "train, val or test")->capture_default_str();
  s_gen->add_option("--dict", gen.dict, "Reuse the dictionary embedded in this dataset");
  s_gen->add_option("--dict-seed", gen.dict_seed, "Dictionary seed")->capture_default_str();
  s_gen->add_option("--rank", gen.rank, "Low-rank dictionary of this rank (0: Gaussian)")
      ->capture_default_str();
  s_gen->add_option("--perturb", gen.perturb, "Laplace perturbation scale of the dictionary")
      ->capture_default_str();
  s_gen->add_option("--perturb-seed", gen.perturb_seed, "Perturbation seed")
      ->capture_default_str();
  s_gen->add_option("--out", gen.out, "Output file name")->capture_default_str();
  s_gen->callback([&] {
    if (gen.dict.empty() && (s_gen->count("--m") == 0 || s_gen->count("--n") == 0)) {
      throw CLI::RequiredError("--m and --n (or --dict)");
    }
  });

  auto* s_train = app.add_subcommand("train", "Train one genome");
  add_globals(s_train, g);
  s_train->add_option("--genome", tr.genome, "lista, lfista, dense[:fusion] or file:<path>")
      ->required();
  add_train_flags(s_train, tr);

  auto* s_search = app.add_subcommand("search", "Search the architecture space");
  add_globals(s_search, g);
  s_search->add_option("--strategy", se.strategy, "random, evolution or exhaustive")
      ->check(CLI::IsMember({"random", "evolution", "exhaustive"}))
      ->capture_default_str();
  s_search->add_option("--budget", se.budget, "Genomes for random search")
      ->capture_default_str();
  s_search->add_option("--population", se.population, "Evolution population")
      ->capture_default_str();
  s_search->add_option("--sample", se.sample, "Evolution tournament size")
      ->capture_default_str();
  s_search->add_option("--cycles", se.cycles, "Evolution cycles")->capture_default_str();
  s_search->add_option("--fusion", se.fusion, "lwa, na or mm")->capture_default_str();
  s_search->add_flag("--search-neurons", se.search_neurons, "Also search neuron types");
  s_search->add_flag("--search-pruning", se.search_pruning, "Also search side-gate pruning");
  s_search->add_flag("--include-presets", se.include_presets,
                     "Evaluate lista/lfista/dense first");
  add_train_flags(s_search, tr);

  auto* s_avg = app.add_subcommand("avg", "Average the top genomes of a search");
  add_globals(s_avg, g);
  s_avg->add_option("--results", av.results, "Search result directory")->required();
  s_avg->add_option("--top", av.top, "Genomes to average (default min(50, 20% of budget))");
  s_avg->add_option("--compare-top", av.compare_top,
                    "Also average this many and count differing gates");
  s_avg->add_option("--threshold", av.threshold, "Connection threshold")
      ->capture_default_str();

  auto* s_exp = app.add_subcommand("experiment", "Run an experiment spec");
  add_globals(s_exp, g);
  s_exp->add_option("--spec", ex.spec, "Experiment spec (JSON)")->required();

  auto* s_rep = app.add_subcommand("report", "Summarize experiment reports");
  add_globals(s_rep, g);
  s_rep->add_option("--input", rp.inputs, "Experiment report JSON (repeatable)")
      ->required()
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  s_rep->add_option("--out", rp.out, "Summary CSV name")->capture_default_str();

  try {
    std::vector<std::string> tokens;
    if (!command.empty()) {
      // Pre-scan for --config so file values can precede the command line.
      std::string config;
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) config = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) config = args[i].substr(9);
      }
      tokens.push_back(command);
      if (!config.empty()) {
        for (auto& t : config_tokens(config, command)) tokens.push_back(std::move(t));
      }
    }
    tokens.insert(tokens.end(), args.begin(), args.end());
    std::reverse(tokens.begin(), tokens.end());
    try {
      app.parse(tokens);
    } catch (const CLI::ParseError& e) {
      return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }
    if (*s_gen) return cmd_gen(g, gen);
    if (*s_train) return cmd_train(g, tr);
    if (*s_search) return cmd_search(g, se, tr);
    if (*s_avg) return cmd_avg(g, av);
    if (*s_exp) return cmd_experiment(g, ex, s_exp->count("--threads") > 0);
    if (*s_rep) return cmd_report(g, rp);
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace lista::cli

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

#include <gtest/gtest.h>

#include <cmath>

#include "lista/rng.h"
#include "lista/solvers.h"
#include "test_util.h"

namespace lista {
namespace {

ExperimentSpec tiny_spec() {
  ExperimentSpec s;
  s.name = "tiny";
  s.dictionary.m = 8;
  s.dictionary.n = 16;
  s.train.count = 256;
  s.val.count = 64;
  s.test.count = 128;
  s.k_layers = 3;
  s.genomes = {"ista", "lista", "lfista"};
  s.seeds = {1, 2};
  s.train_config.steps_per_stage = 20;
  s.train_config.val_every = 5;
  s.train_config.record_wall_time = false;
  return s;
}

TEST(Spec, JsonRoundTrip) {
  ExperimentSpec s = tiny_spec();
  s.dictionary.test_perturb = 0.01;
  s.test.noise = GaussianNoise{20.0};
  s.mismatch = true;
  const ExperimentSpec back = spec_from_json(spec_to_json(s));
  EXPECT_EQ(spec_to_json(back), spec_to_json(s));
  EXPECT_EQ(spec_hash(back), spec_hash(s));
}

TEST(Spec, MissingFieldsKeepDefaults) {
  const ExperimentSpec s = spec_from_json(Json{{"name", "x"}});
  EXPECT_EQ(s.k_layers, 8);
  EXPECT_EQ(s.train.count, 20480);
  EXPECT_EQ(s.seeds, (std::vector<std::uint64_t>{1, 2, 3}));
}

TEST(Spec, HashIgnoresWorkers) {
  ExperimentSpec a = tiny_spec(), b = tiny_spec();
  b.workers = 7;
  EXPECT_EQ(spec_hash(a), spec_hash(b));
  b.seeds = {1};
  EXPECT_NE(spec_hash(a), spec_hash(b));
}

TEST(Spec, Validation) {
  ExperimentSpec s = tiny_spec();
  s.test.noise = GaussianNoise{20.0};
  EXPECT_LISTA_ERROR(validate_spec(s), ErrorKind::kInvalidArgument);  // unflagged mismatch
  s.mismatch = true;
  EXPECT_NO_THROW(validate_spec(s));
  s = tiny_spec();
  s.mismatch = true;
  EXPECT_LISTA_ERROR(validate_spec(s), ErrorKind::kInvalidArgument);  // nothing differs
  s = tiny_spec();
  s.genomes = {"lista", "file:missing.json"};
  EXPECT_LISTA_ERROR(validate_spec(s), ErrorKind::kInvalidArgument);
  s = tiny_spec();
  s.mode = "ablate";
  EXPECT_LISTA_ERROR(validate_spec(s), ErrorKind::kInvalidArgument);
  EXPECT_LISTA_ERROR(spec_from_json(Json{{"k_layers", "eight"}}), ErrorKind::kFormat);
}

TEST(Spec, ResolveGenome) {
  EXPECT_EQ(resolve_genome("dense", 5, {}), genome_dense(5));
  Genome mm = genome_lfista(5);
  mm.fusion = Fusion::kMm;
  EXPECT_EQ(resolve_genome("lfista:mm", 5, {}), mm);
  const auto dir = testing::scratch_dir();
  Genome bad = genome_lista(5);
  bad.side_gates[0] = false;
  write_file(dir / "bad.json", genome_to_json(bad).dump());
  try {
    resolve_genome("file:bad.json", 5, dir);
    ADD_FAILURE() << "accepted an invalid genome";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidArgument);
    EXPECT_NE(std::string(e.what()).find("layer 1"), std::string::npos);
  }
  EXPECT_TRUE(is_baseline("fista"));
  EXPECT_FALSE(is_baseline("lista"));
}

TEST(Report, EmptyCsvIsHeaderOnly) {
  ExperimentReport r;
  r.name = "empty";
  EXPECT_EQ(emit_report(r, ReportFormat::kCsv), "experiment,genome,seed,nmse_db,status\n");
}

TEST(Report, QuotesFieldsWithCommas) {
  ExperimentReport r;
  r.name = "a,b";
  r.cells.push_back({"lista", 0, 1, true, -3.5, -3.0, {}, 0, 0});
  EXPECT_EQ(emit_report(r, ReportFormat::kCsv),
            "experiment,genome,seed,nmse_db,status\n\"a,b\",lista,1,-3.5,ok\n");
}

TEST(Summary, MeanAndSampleStd) {
  std::vector<ExperimentCell> cells;
  for (double v : {-10.0, -12.0, -14.0}) cells.push_back({"a", 0, 0, true, v, 0, {}, 0, 0});
  cells.push_back({"a", 0, 0, false, 99.0, 0, "boom", 0, 0});
  cells.push_back({"b", 0, 0, true, -1.0, 0, {}, 0, 0});
  const auto s = summarize(cells);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].genome, "a");
  EXPECT_EQ(s[0].n, 3);
  EXPECT_DOUBLE_EQ(s[0].mean_db, -12.0);
  EXPECT_DOUBLE_EQ(s[0].std_db, 2.0);
  EXPECT_EQ(s[1].std_db, 0.0);
}

class RunTiny : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { report_ = new ExperimentReport(run_experiment(tiny_spec())); }
  static void TearDownTestSuite() { delete report_; }
  static ExperimentReport* report_;
};
ExperimentReport* RunTiny::report_ = nullptr;

TEST_F(RunTiny, CellGrid) {
  const auto& r = *report_;
  ASSERT_EQ(r.cells.size(), 6u);
  EXPECT_EQ(r.cells[0].genome, "ista");
  EXPECT_EQ(r.cells[1].seed, 2u);
  for (const auto& c : r.cells) EXPECT_TRUE(c.ok) << c.error;
  EXPECT_EQ(r.summaries.size(), 3u);
  EXPECT_EQ(r.dict_id, r.test_dict_id);
  // Seeds vary the data; the dictionary stays fixed.
  EXPECT_NE(r.cells[0].train_hash, r.cells[1].train_hash);
  EXPECT_EQ(r.cells[0].train_hash, r.cells[2].train_hash);
}

// Each cell equals training and scoring by hand with the same inputs.
TEST_F(RunTiny, MatchesDirectPipeline) {
  const ExperimentSpec s = tiny_spec();
  const Dictionary d = sample_dictionary(8, 16, s.dictionary.seed);
  EXPECT_EQ(report_->dict_id, d.id());
  const std::uint64_t rep = 2;
  auto data = [&](const DataSpec& ds, Split split) {
    return make_dataset(d, ds.count, ds.signal, ds.noise, mix_seeds(ds.seed, rep), split);
  };
  const Dataset train_ds = data(s.train, Split::kTrain), val_ds = data(s.val, Split::kVal),
                test_ds = data(s.test, Split::kTest);
  TrainConfig cfg = s.train_config;
  cfg.seed = rep;
  const TrainReport tr = train(genome_lfista(3), d, train_ds, val_ds, cfg);
  const ExperimentCell& cell = report_->cells[5];
  EXPECT_EQ(cell.genome, "lfista");
  EXPECT_EQ(cell.nmse_db, evaluate_nmse(genome_lfista(3), tr.final_params, test_ds));
  EXPECT_EQ(cell.test_hash, test_ds.content_hash());
  EXPECT_EQ(report_->cells[1].nmse_db,
            nmse_db(ista_batch(d.data, test_ds.b, cfg.lambda, 3), test_ds.x_true));
}

TEST_F(RunTiny, JsonRoundTripAndStableBytes) {
  const Json j = experiment_report_to_json(*report_);
  const ExperimentReport back = experiment_report_from_json(j);
  EXPECT_EQ(experiment_report_to_json(back), j);
  EXPECT_EQ(emit_report(back, ReportFormat::kCsv), emit_report(*report_, ReportFormat::kCsv));
  EXPECT_EQ(emit_report(run_experiment(tiny_spec()), ReportFormat::kJson),
            emit_report(*report_, ReportFormat::kJson));
}

TEST(Run, WorkerCountDoesNotChangeResults) {
  ExperimentSpec s = tiny_spec();
  s.genomes = {"lista", "dense"};
  const ExperimentReport a = run_experiment(s);
  s.workers = 3;
  const ExperimentReport b = run_experiment(s);
  EXPECT_EQ(emit_report(a, ReportFormat::kCsv), emit_report(b, ReportFormat::kCsv));
}

TEST(Run, PerturbedTestDictionary) {
  ExperimentSpec s = tiny_spec();
  s.genomes = {"ista"};
  ExperimentSpec p = s;
  p.dictionary.test_perturb = 0.05;
  p.mismatch = true;
  const ExperimentReport a = run_experiment(s), b = run_experiment(p);
  EXPECT_EQ(b.dict_id, a.dict_id);
  EXPECT_NE(b.test_dict_id, b.dict_id);
  EXPECT_EQ(b.train_spec_hash, a.train_spec_hash);
  EXPECT_EQ(b.cells[0].train_hash, a.cells[0].train_hash);
  EXPECT_NE(b.cells[0].test_hash, a.cells[0].test_hash);
  EXPECT_NE(b.spec_hash, a.spec_hash);
}

TEST(Run, NoisyTestKeepsTrainingProvenance) {
  ExperimentSpec s = tiny_spec();
  s.genomes = {"lista"};
  s.seeds = {1};
  ExperimentSpec n = s;
  n.test.noise = GaussianNoise{10.0};
  n.mismatch = true;
  const ExperimentReport a = run_experiment(s), b = run_experiment(n);
  EXPECT_EQ(a.train_spec_hash, b.train_spec_hash);
  EXPECT_NE(a.test_spec_hash, b.test_spec_hash);
  EXPECT_EQ(a.cells[0].val_nmse_db, b.cells[0].val_nmse_db);
  EXPECT_GT(b.cells[0].nmse_db, a.cells[0].nmse_db);
}

TEST(Pruning, PairsAndRows) {
  ExperimentSpec s = tiny_spec();
  s.k_layers = 4;
  s.train_config.steps_per_stage = 10;
  const ExperimentReport r = pruning_study(genome_lista(4), 5, s, 1);
  EXPECT_EQ(r.mode, "pruning");
  ASSERT_EQ(r.cells.size(), 10u);
  ASSERT_EQ(r.pairs.size(), 5u);
  std::set<std::string> patterns;
  int wins = 0;
  for (const auto& p : r.pairs) {
    EXPECT_EQ(p.pattern[0], '1');
    EXPECT_NE(p.pattern, "1111");
    EXPECT_DOUBLE_EQ(p.delta_db, p.pruned_db - p.reconnected_db);
    patterns.insert(p.pattern);
    wins += p.delta_db > 0;
  }
  EXPECT_EQ(patterns.size(), 5u);
  EXPECT_DOUBLE_EQ(r.reconnect_win_rate, wins / 5.0);
  EXPECT_EQ(r.cells[1].genome, "reconnected:" + r.pairs[0].pattern);
  EXPECT_EQ(r.cells[1].nmse_db, r.cells[3].nmse_db);
  EXPECT_LISTA_ERROR(pruning_study(genome_lista(4), 8, s, 1), ErrorKind::kInvalidArgument);
}

TEST(Files, WriteAndLoad) {
  const auto dir = testing::scratch_dir();
  ExperimentSpec s = tiny_spec();
  s.genomes = {"file:g.json"};
  write_file(dir / "g.json", genome_to_json(genome_lfista(3)).dump());
  write_file(dir / "spec.json", spec_to_json(s).dump());
  const ExperimentSpec loaded = load_spec(dir / "spec.json");
  EXPECT_EQ(resolve_genome(loaded.genomes[0], 3, loaded.base_dir), genome_lfista(3));
  ExperimentReport r;
  r.name = "w";
  write_report(r, dir / "w.csv", ReportFormat::kCsv);
  EXPECT_EQ(read_file(dir / "w.csv"), emit_report(r, ReportFormat::kCsv));
}

}  // namespace
}  // namespace lista

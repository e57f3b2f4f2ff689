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

#ifndef LISTA_TRAINER_H_
#define LISTA_TRAINER_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lista/container.h"
#include "lista/network.h"
#include "lista/synthgen.h"

namespace lista {

inline constexpr double kNmseFloorDb = -150.0;

/// 10 log10(sum ||x_hat - x*||^2 / sum ||x*||^2), clamped below at -150 dB.
/// Throws kInvalidArgument on shape mismatch or an all-zero x_star.
double nmse_db(const Matrix& x_hat, const Matrix& x_star);

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct TrainConfig {
  int batch_size = 128;
  double lr0 = 5e-4;
  // Sub-stage 0 trains the new layer's scalars at lr0 * m[0]; the rest
  // fine-tune every layer so far at lr0 * m[s].
  std::vector<double> stage_multipliers = {1.0, 0.2, 0.02};
  int steps_per_stage = 0;  // 0: one epoch, ceil(train / batch)
  int max_epochs_guard = 0;  // cap on total epochs; 0 disables
  int max_steps = -1;        // cap on total optimizer steps; -1 disables
  int val_every = 20;
  int patience = 5;  // validations without a min_improve_db gain
  double min_improve_db = 0.01;
  double lambda = 0.4;
  std::uint64_t seed = 0;
  AdamConfig adam;
  bool record_wall_time = true;  // false writes 0 for reproducible output
};

void validate_config(const TrainConfig& cfg);
Json config_to_json(const TrainConfig& cfg);
TrainConfig config_from_json(const Json& j, TrainConfig base = {});
std::uint64_t config_hash(const TrainConfig& cfg);

struct LossPoint {
  int step;
  double loss;
  int stage;  // global sub-stage index
};

struct TrainReport {
  NetParams final_params;
  std::vector<LossPoint> loss_curve;
  double val_nmse_db = 0.0;
  double init_val_nmse_db = 0.0;
  double wall_time = 0.0;
  std::uint64_t config_hash = 0;
  std::uint64_t genome_hash = 0;
  int steps = 0;
};

// Stage-wise schedule: for k = 1..K, each sub-stage optimizes the loss at
// layer k with a fresh Adam state, validates every val_every steps at depth
// k, stops early after `patience` stalls, and keeps its best-on-validation
// parameters. The returned parameters are never worse on validation (full
// depth) than the initialization.
TrainReport train(const Genome& g, const Dictionary& d, const Dataset& train_ds,
                  const Dataset& val_ds, const TrainConfig& cfg);

/// Validation-style evaluation: NMSE of the full-depth output on ds.
double evaluate_nmse(const Genome& g, const NetParams& p, const Dataset& ds);

/// Max over parameter groups of ||g_analytic - g_fd|| / max(||g_analytic||,
/// ||g_fd||) on one sample. Resamples inputs near activation kinks; throws
/// kNumeric if no kink-free sample is found.
double grad_check(const Genome& g, const Dictionary& d, const NetParams& p,
                  std::uint64_t seed, double eps = 1e-6, int batch = 1);

Json report_to_json(const TrainReport& r);
std::string loss_curve_csv(const TrainReport& r);

}  // namespace lista

#endif  // LISTA_TRAINER_H_

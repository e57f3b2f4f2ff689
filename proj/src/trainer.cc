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

#include "lista/trainer.h"

#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "lista/rng.h"

namespace lista {

double nmse_db(const Matrix& x_hat, const Matrix& x_star) {
  require(x_hat.rows() == x_star.rows() && x_hat.cols() == x_star.cols(),
          "nmse_db: shape mismatch");
  const double energy = x_star.squaredNorm();
  require(energy > 0.0, "nmse_db: reference signal is all zero");
  const double err = (x_hat - x_star).squaredNorm();
  if (err == 0.0) return kNmseFloorDb;
  return std::max(kNmseFloorDb, 10.0 * std::log10(err / energy));
}

void validate_config(const TrainConfig& cfg) {
  require(cfg.batch_size >= 1, "batch_size must be >= 1");
  require(cfg.lr0 > 0.0, "lr0 must be > 0");
  require(!cfg.stage_multipliers.empty(), "stage_multipliers must not be empty");
  for (std::size_t i = 0; i < cfg.stage_multipliers.size(); ++i) {
    require(cfg.stage_multipliers[i] > 0.0, "stage multipliers must be positive");
    if (i > 0) {
      require(cfg.stage_multipliers[i] < cfg.stage_multipliers[i - 1],
              "stage multipliers must be decreasing");
    }
  }
  require(cfg.steps_per_stage >= 0, "steps_per_stage must be >= 0");
  require(cfg.max_epochs_guard >= 0, "max_epochs_guard must be >= 0");
  require(cfg.max_steps >= -1, "max_steps must be >= -1");
  require(cfg.val_every >= 1, "val_every must be >= 1");
  require(cfg.patience >= 1, "patience must be >= 1");
  require(cfg.lambda >= 0.0, "lambda must be >= 0");
}

Json config_to_json(const TrainConfig& cfg) {
  Json j;
  j["batch_size"] = cfg.batch_size;
  j["lr0"] = cfg.lr0;
  j["stage_multipliers"] = cfg.stage_multipliers;
  j["steps_per_stage"] = cfg.steps_per_stage;
  j["max_epochs_guard"] = cfg.max_epochs_guard;
  j["max_steps"] = cfg.max_steps;
  j["val_every"] = cfg.val_every;
  j["patience"] = cfg.patience;
  j["min_improve_db"] = cfg.min_improve_db;
  j["lambda"] = cfg.lambda;
  j["seed"] = cfg.seed;
  j["optimizer"] = {{"name", "adam"},
                    {"beta1", cfg.adam.beta1},
                    {"beta2", cfg.adam.beta2},
                    {"eps", cfg.adam.eps}};
  return j;
}

TrainConfig config_from_json(const Json& j, TrainConfig c) {
  try {
    c.batch_size = j.value("batch_size", c.batch_size);
    c.lr0 = j.value("lr0", c.lr0);
    c.stage_multipliers = j.value("stage_multipliers", c.stage_multipliers);
    c.steps_per_stage = j.value("steps_per_stage", c.steps_per_stage);
    c.max_epochs_guard = j.value("max_epochs_guard", c.max_epochs_guard);
    c.max_steps = j.value("max_steps", c.max_steps);
    c.val_every = j.value("val_every", c.val_every);
    c.patience = j.value("patience", c.patience);
    c.min_improve_db = j.value("min_improve_db", c.min_improve_db);
    c.lambda = j.value("lambda", c.lambda);
    c.seed = j.value("seed", c.seed);
    if (j.contains("optimizer")) {
      const Json& o = j["optimizer"];
      require(o.value("name", std::string("adam")) == "adam",
              "only the adam optimizer is supported");
      c.adam.beta1 = o.value("beta1", c.adam.beta1);
      c.adam.beta2 = o.value("beta2", c.adam.beta2);
      c.adam.eps = o.value("eps", c.adam.eps);
    }
  } catch (const Json::exception& e) {
    fail(ErrorKind::kInvalidArgument, std::string("bad train config: ") + e.what());
  }
  validate_config(c);
  return c;
}

std::uint64_t config_hash(const TrainConfig& cfg) {
  return fnv1a64(config_to_json(cfg).dump());
}

double evaluate_nmse(const Genome& g, const NetParams& p, const Dataset& ds) {
  return nmse_db(infer(g, p, ds.b), ds.x_true);
}

namespace {

// Epoch-wise shuffled mini-batches; the permutation of epoch e comes from
// substream e of the training seed.
class BatchSampler {
 public:
  BatchSampler(const Dataset& ds, int batch, std::uint64_t seed)
      : ds_(ds), batch_(std::min(batch, ds.count())), seed_(seed) {
    order_.resize(static_cast<std::size_t>(ds.count()));
    reshuffle();
  }

  void next(Matrix& b, Matrix& x) {
    if (cursor_ + batch_ > static_cast<int>(order_.size())) reshuffle();
    b.resize(ds_.b.rows(), batch_);
    x.resize(ds_.x_true.rows(), batch_);
    for (int c = 0; c < batch_; ++c) {
      const int col = order_[static_cast<std::size_t>(cursor_ + c)];
      b.col(c) = ds_.b.col(col);
      x.col(c) = ds_.x_true.col(col);
    }
    cursor_ += batch_;
  }

 private:
  void reshuffle() {
    std::iota(order_.begin(), order_.end(), 0);
    CounterRng rng(seed_, epoch_++);
    for (std::size_t i = order_.size(); i > 1; --i) {
      std::swap(order_[i - 1], order_[rng.below(i)]);
    }
    cursor_ = 0;
  }

  const Dataset& ds_;
  int batch_;
  std::uint64_t seed_;
  std::uint64_t epoch_ = 0;
  std::vector<int> order_;
  int cursor_ = 0;
};

class Adam {
 public:
  Adam(const AdamConfig& cfg, NetParams& p) : cfg_(cfg) {
    for (const auto& grp : param_groups(p)) {
      m_.emplace_back(Vector::Zero(static_cast<Eigen::Index>(grp.values.size())));
      v_.emplace_back(Vector::Zero(static_cast<Eigen::Index>(grp.values.size())));
    }
  }

  template <class Pred>
  void step(NetParams& p, NetParams& grad, double lr, Pred trainable) {
    ++t_;
    const double c1 = 1.0 - std::pow(cfg_.beta1, t_);
    const double c2 = 1.0 - std::pow(cfg_.beta2, t_);
    auto pg = param_groups(p);
    auto gg = param_groups(grad);
    for (std::size_t i = 0; i < pg.size(); ++i) {
      if (!trainable(pg[i])) continue;
      Vector& m = m_[i];
      Vector& v = v_[i];
      for (std::size_t e = 0; e < pg[i].values.size(); ++e) {
        const auto ei = static_cast<Eigen::Index>(e);
        const double gval = gg[i].values[e];
        m[ei] = cfg_.beta1 * m[ei] + (1.0 - cfg_.beta1) * gval;
        v[ei] = cfg_.beta2 * v[ei] + (1.0 - cfg_.beta2) * gval * gval;
        pg[i].values[e] -= lr * (m[ei] / c1) / (std::sqrt(v[ei] / c2) + cfg_.eps);
      }
    }
  }

 private:
  AdamConfig cfg_;
  std::vector<Vector> m_, v_;
  int t_ = 0;
};

}  // namespace

TrainReport train(const Genome& g, const Dictionary& d, const Dataset& train_ds,
                  const Dataset& val_ds, const TrainConfig& cfg) {
  validate_config(cfg);
  const auto violations = validate_genome(g);
  require(violations.empty(), "train: invalid genome: " +
                                  (violations.empty() ? "" : violations.front()));
  check_dataset_matches(train_ds, d);
  check_dataset_matches(val_ds, d);

  const auto t0 = std::chrono::steady_clock::now();
  TrainReport rep;
  rep.config_hash = config_hash(cfg);
  rep.genome_hash = genome_hash(g);

  NetParams params = init_params(g, d, cfg.lambda);
  const NetParams init = params;
  rep.init_val_nmse_db = evaluate_nmse(g, params, val_ds);

  const int epoch_steps =
      (train_ds.count() + cfg.batch_size - 1) / cfg.batch_size;
  const int steps = cfg.steps_per_stage > 0 ? cfg.steps_per_stage : epoch_steps;
  long long step_cap =
      cfg.max_epochs_guard > 0
          ? static_cast<long long>(cfg.max_epochs_guard) * epoch_steps
          : -1;
  if (cfg.max_steps >= 0 && (step_cap < 0 || cfg.max_steps < step_cap)) {
    step_cap = cfg.max_steps;
  }

  BatchSampler sampler(train_ds, cfg.batch_size, cfg.seed);
  Matrix bb, xb;
  int stage_index = 0;
  for (int k = 1; k <= g.k_layers; ++k) {
    for (std::size_t s = 0; s < cfg.stage_multipliers.size(); ++s, ++stage_index) {
      const double lr = cfg.lr0 * cfg.stage_multipliers[s];
      auto trainable = [k, s](const ParamGroup& grp) {
        return s == 0 ? grp.layer == k : grp.layer <= k;
      };
      Adam adam(cfg.adam, params);
      double best = nmse_db(infer(g, params, val_ds.b, k), val_ds.x_true);
      NetParams best_params = params;
      int stalls = 0;
      for (int step = 1; step <= steps; ++step) {
        if (step_cap >= 0 && rep.steps >= step_cap) break;
        sampler.next(bb, xb);
        Gradients gr;
        try {
          gr = backward(g, params, bb, xb, k);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::kNumeric) throw;
          fail(ErrorKind::kNumeric, "training diverged in stage " +
                                        std::to_string(stage_index) + ": " + e.what());
        }
        if (!std::isfinite(gr.loss)) {
          fail(ErrorKind::kNumeric,
               "training diverged in stage " + std::to_string(stage_index));
        }
        adam.step(params, gr.grad, lr, trainable);
        params.theta = params.theta.cwiseMax(0.0);  // projection onto theta >= 0
        rep.loss_curve.push_back({rep.steps, gr.loss, stage_index});
        ++rep.steps;
        if (step % cfg.val_every == 0 || step == steps) {
          double v;
          try {
            v = nmse_db(infer(g, params, val_ds.b, k), val_ds.x_true);
          } catch (const Error& e) {
            if (e.kind() != ErrorKind::kNumeric) throw;
            fail(ErrorKind::kNumeric, "training diverged in stage " +
                                          std::to_string(stage_index) + ": " +
                                          e.what());
          }
          const bool real_gain = v < best - cfg.min_improve_db;
          if (v < best) {
            best = v;
            best_params = params;
          }
          stalls = real_gain ? 0 : stalls + 1;
          if (stalls >= cfg.patience) break;
        }
      }
      params = std::move(best_params);
    }
  }

  rep.val_nmse_db = evaluate_nmse(g, params, val_ds);
  if (rep.val_nmse_db > rep.init_val_nmse_db) {
    params = init;
    rep.val_nmse_db = rep.init_val_nmse_db;
  }
  rep.final_params = std::move(params);
  if (cfg.record_wall_time) {
    rep.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return rep;
}

double grad_check(const Genome& g, const Dictionary& d, const NetParams& p,
                  std::uint64_t seed, double eps, int batch) {
  constexpr int kMaxResamples = 100;
  constexpr double kKinkMargin = 1e-3;
  check_params(g, p);
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    const std::uint64_t s = mix_seeds(seed, static_cast<std::uint64_t>(attempt));
    const Matrix x = sample_signals(d.n, batch, BernoulliGauss{0.5}, s);
    const Matrix b = synthesize_measurements(d, x, NoNoise{}, s);
    const ForwardTrace tr = forward(g, p, b);
    bool near_kink = false;
    for (int j = 0; j < g.k_layers && !near_kink; ++j) {
      const double kink =
          g.neurons[j] == NeuronType::kSoftThreshold ? p.theta[j] : 0.0;
      near_kink = ((tr.pre[j].array().abs() - kink).abs() < kKinkMargin).any();
    }
    if (near_kink) continue;

    Gradients an = backward(g, p, b, x);
    NetParams probe = p;
    const Vector flat = flatten(p);
    const Vector fd = finite_diff_grad(
        [&](const Vector& q) {
          unflatten(probe, q);
          return batch_loss(g, probe, b, x);
        },
        flat, eps);
    NetParams fd_params = p;
    unflatten(fd_params, fd);

    double worst = 0.0;
    auto ga = param_groups(an.grad);
    auto gf = param_groups(fd_params);
    for (std::size_t i = 0; i < ga.size(); ++i) {
      double diff = 0.0, na = 0.0, nf = 0.0;
      for (std::size_t e = 0; e < ga[i].values.size(); ++e) {
        diff += std::pow(ga[i].values[e] - gf[i].values[e], 2);
        na += std::pow(ga[i].values[e], 2);
        nf += std::pow(gf[i].values[e], 2);
      }
      const double denom = std::max({std::sqrt(na), std::sqrt(nf), 1e-6});
      worst = std::max(worst, std::sqrt(diff) / denom);
    }
    return worst;
  }
  fail(ErrorKind::kNumeric, "grad_check: every sample lies near an activation kink");
}

Json report_to_json(const TrainReport& r) {
  Json j;
  j["val_nmse_db"] = r.val_nmse_db;
  j["init_val_nmse_db"] = r.init_val_nmse_db;
  j["steps"] = r.steps;
  j["final_loss"] = r.loss_curve.empty() ? 0.0 : r.loss_curve.back().loss;
  j["wall_time"] = r.wall_time;
  j["config_hash"] = hex64(r.config_hash);
  j["genome_hash"] = hex64(r.genome_hash);
  return j;
}

std::string loss_curve_csv(const TrainReport& r) {
  std::ostringstream out;
  out.precision(17);
  out << "step,loss,stage\n";
  for (const auto& pt : r.loss_curve) {
    out << pt.step << ',' << pt.loss << ',' << pt.stage << '\n';
  }
  return out.str();
}

}  // namespace lista

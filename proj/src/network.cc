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

#include "lista/network.h"

#include <algorithm>
#include <cmath>

#include "lista/container.h"

namespace lista {

namespace {

int resolve_depth(const Genome& g, int depth) {
  return depth <= 0 ? g.k_layers : std::min(depth, g.k_layers);
}

const Matrix& mm_matrix(const NetParams& p, int offset) {
  const auto it = std::lower_bound(p.mm_offsets.begin(), p.mm_offsets.end(), offset);
  if (it == p.mm_offsets.end() || *it != offset) {
    fail(ErrorKind::kInvalidArgument,
         "MM parameters lack W_" + std::to_string(offset));
  }
  return p.mm_mats[static_cast<std::size_t>(it - p.mm_offsets.begin())];
}

Matrix& mm_matrix(NetParams& p, int offset) {
  return const_cast<Matrix&>(mm_matrix(std::as_const(p), offset));
}

void check_finite(const Matrix& m, int layer) {
  if (!m.allFinite()) {
    fail(ErrorKind::kNumeric,
         "non-finite activation at layer " + std::to_string(layer));
  }
}

// Forward pass that also keeps W_x * fused for the alpha gradient.
struct FullTrace {
  ForwardTrace trace;
  std::vector<Matrix> mixed;
};

FullTrace run_forward(const Genome& g, const NetParams& p, const Matrix& b,
                      int depth, bool keep) {
  check_params(g, p);
  require(b.rows() == p.m(), "forward: b has " + std::to_string(b.rows()) +
                                 " rows, network expects " + std::to_string(p.m()));
  const int kk = resolve_depth(g, depth);
  const Eigen::Index n = p.n();
  const Eigen::Index batch = b.cols();
  FullTrace ft;
  ft.trace.outputs.reserve(kk);
  const Matrix drive = p.w_b * b;
  for (int j = 1; j <= kk; ++j) {
    const std::vector<int> src = layer_sources(g, j);
    const Vector& scale = p.term_scale[j - 1];
    Matrix pre = drive;
    if (g.fusion == Fusion::kMm) {
      for (std::size_t t = 0; t < src.size(); ++t) {
        pre.noalias() += scale[t] * (mm_matrix(p, j - src[t]) *
                                     ft.trace.outputs[src[t] - 1]);
      }
    } else {
      Matrix fused = Matrix::Zero(n, batch);
      for (std::size_t t = 0; t < src.size(); ++t) {
        const double w = g.fusion == Fusion::kLwa ? scale[t] : 1.0;
        fused.noalias() += w * ft.trace.outputs[src[t] - 1];
      }
      if (g.fusion == Fusion::kNa && !src.empty()) {
        fused /= static_cast<double>(src.size());
      }
      Matrix mixed = src.empty() ? Matrix::Zero(n, batch) : Matrix(p.w_x * fused);
      pre.noalias() += p.alpha[j - 1] * mixed;
      if (keep) {
        ft.trace.fused.push_back(std::move(fused));
        ft.mixed.push_back(std::move(mixed));
      }
    }
    check_finite(pre, j);
    Matrix out = apply_neuron(g.neurons[j - 1], pre, p.theta[j - 1]);
    check_finite(out, j);
    if (keep) ft.trace.pre.push_back(std::move(pre));
    ft.trace.outputs.push_back(std::move(out));
  }
  return ft;
}

void add_group(std::vector<ParamGroup>& out, std::string name, int layer,
               double* data, Eigen::Index size) {
  if (size > 0) {
    out.push_back({std::move(name), layer,
                   std::span<double>(data, static_cast<std::size_t>(size))});
  }
}

}  // namespace

NetParams NetParams::zeros_like() const {
  NetParams z = *this;
  z.w_b.setZero();
  z.w_x.setZero();
  for (auto& m : z.mm_mats) m.setZero();
  z.alpha.setZero();
  z.theta.setZero();
  for (auto& v : z.term_scale) v.setZero();
  return z;
}

std::vector<ParamGroup> param_groups(NetParams& p) {
  std::vector<ParamGroup> out;
  add_group(out, "w_b", 0, p.w_b.data(), p.w_b.size());
  add_group(out, "w_x", 0, p.w_x.data(), p.w_x.size());
  for (std::size_t i = 0; i < p.mm_mats.size(); ++i) {
    add_group(out, "w_mm" + std::to_string(p.mm_offsets[i]), 0,
              p.mm_mats[i].data(), p.mm_mats[i].size());
  }
  for (int j = 1; j <= p.k_layers(); ++j) {
    if (p.alpha.size() > 0) add_group(out, "alpha", j, &p.alpha[j - 1], 1);
    add_group(out, "theta", j, &p.theta[j - 1], 1);
    auto& ts = p.term_scale[j - 1];
    add_group(out, "term", j, ts.data(), ts.size());
  }
  return out;
}

std::size_t param_count(const NetParams& p) {
  std::size_t total = 0;
  for (const auto& grp : param_groups(const_cast<NetParams&>(p))) {
    total += grp.values.size();
  }
  return total;
}

Vector flatten(const NetParams& p) {
  Vector flat(static_cast<Eigen::Index>(param_count(p)));
  Eigen::Index at = 0;
  for (const auto& grp : param_groups(const_cast<NetParams&>(p))) {
    for (double v : grp.values) flat[at++] = v;
  }
  return flat;
}

void unflatten(NetParams& p, const Vector& flat) {
  require(flat.size() == static_cast<Eigen::Index>(param_count(p)),
          "unflatten: size mismatch");
  Eigen::Index at = 0;
  for (auto& grp : param_groups(p)) {
    for (double& v : grp.values) v = flat[at++];
  }
}

std::vector<int> mm_offsets_for(const Genome& g) {
  std::set<int> offsets{1};
  for (int j = 2; j <= g.k_layers; ++j) {
    for (int s : layer_sources(g, j)) offsets.insert(j - s);
  }
  return {offsets.begin(), offsets.end()};
}

NetParams init_params(const Genome& g, const Dictionary& d, double lambda) {
  const auto violations = validate_genome(g);
  require(violations.empty(), "init_params: invalid genome: " +
                                  (violations.empty() ? "" : violations.front()));
  require(lambda >= 0.0, "init_params: lambda must be >= 0");
  const double l = spectral_sq_norm(d.data);
  const Matrix gram = d.data.transpose() * d.data;
  const Matrix w_x = Matrix::Identity(d.n, d.n) - gram / l;

  NetParams p;
  p.fusion = g.fusion;
  p.w_b = d.data.transpose() / l;
  p.theta = Vector::Constant(g.k_layers, lambda / l);
  p.term_scale.resize(g.k_layers);
  if (g.fusion == Fusion::kMm) {
    p.mm_offsets = mm_offsets_for(g);
    for (int off : p.mm_offsets) {
      p.mm_mats.push_back(off == 1 ? w_x : Matrix::Zero(d.n, d.n));
    }
  } else {
    p.w_x = w_x;
    p.alpha = Vector::Ones(g.k_layers);
  }
  for (int j = 1; j <= g.k_layers; ++j) {
    const std::vector<int> src = layer_sources(g, j);
    Vector& ts = p.term_scale[j - 1];
    if (g.fusion == Fusion::kMm) {
      ts = Vector::Ones(static_cast<Eigen::Index>(src.size()));
    } else if (g.fusion == Fusion::kLwa) {
      ts = Vector::Zero(static_cast<Eigen::Index>(src.size()));
      for (std::size_t t = 0; t < src.size(); ++t) {
        if (src[t] == j - 1) ts[static_cast<Eigen::Index>(t)] = 1.0;
      }
    }
  }
  return p;
}

void check_params(const Genome& g, const NetParams& p) {
  const auto violations = validate_genome(g);
  if (!violations.empty()) {
    fail(ErrorKind::kInvalidArgument, "invalid genome: " + violations.front());
  }
  const Eigen::Index n = p.n();
  const int kk = g.k_layers;
  auto bad = [](const std::string& what) {
    fail(ErrorKind::kInvalidArgument, "parameters do not match genome: " + what);
  };
  if (p.fusion != g.fusion) bad("fusion mode");
  if (p.theta.size() != kk || static_cast<int>(p.term_scale.size()) != kk) {
    bad("layer count");
  }
  if (g.fusion == Fusion::kMm) {
    if (p.mm_offsets != mm_offsets_for(g) || p.mm_mats.size() != p.mm_offsets.size()) {
      bad("MM matrix set");
    }
    for (const auto& m : p.mm_mats) {
      if (m.rows() != n || m.cols() != n) bad("MM matrix shape");
    }
  } else {
    if (p.w_x.rows() != n || p.w_x.cols() != n) bad("W_x shape");
    if (p.alpha.size() != kk) bad("alpha size");
  }
  for (int j = 1; j <= kk; ++j) {
    const auto want = g.fusion == Fusion::kNa ? 0 : layer_sources(g, j).size();
    if (static_cast<std::size_t>(p.term_scale[j - 1].size()) != want) {
      bad("term scalars of layer " + std::to_string(j));
    }
  }
}

ForwardTrace forward(const Genome& g, const NetParams& p, const Matrix& b,
                     int depth) {
  return run_forward(g, p, b, depth, true).trace;
}

Matrix infer(const Genome& g, const NetParams& p, const Matrix& b, int depth) {
  FullTrace ft = run_forward(g, p, b, depth, false);
  return std::move(ft.trace.outputs.back());
}

double batch_loss(const Genome& g, const NetParams& p, const Matrix& b,
                  const Matrix& x_star, int depth) {
  const Matrix out = infer(g, p, b, depth);
  require(out.rows() == x_star.rows() && out.cols() == x_star.cols(),
          "batch_loss: x_star shape mismatch");
  return (out - x_star).squaredNorm() / static_cast<double>(b.cols());
}

Gradients backward(const Genome& g, const NetParams& p, const Matrix& b,
                   const Matrix& x_star, int depth) {
  FullTrace ft = run_forward(g, p, b, depth, true);
  const ForwardTrace& tr = ft.trace;
  const int kk = static_cast<int>(tr.outputs.size());
  const Matrix& last = tr.outputs.back();
  require(last.rows() == x_star.rows() && last.cols() == x_star.cols(),
          "backward: x_star shape mismatch");
  const double inv_batch = 1.0 / static_cast<double>(b.cols());

  Gradients out;
  out.grad = p.zeros_like();
  NetParams& gp = out.grad;
  const Matrix residual = last - x_star;
  out.loss = residual.squaredNorm() * inv_batch;

  // upstream[j-1] = dLoss / dx^(j)
  std::vector<Matrix> upstream(kk);
  upstream[kk - 1] = 2.0 * inv_batch * residual;
  Matrix d_drive = Matrix::Zero(p.n(), b.cols());

  for (int j = kk; j >= 1; --j) {
    Matrix& up = upstream[j - 1];
    if (up.size() == 0) continue;  // output unused downstream
    const Matrix& pre = tr.pre[j - 1];
    const NeuronType type = g.neurons[j - 1];
    const double theta = p.theta[j - 1];
    gp.theta[j - 1] = up.cwiseProduct(neuron_theta_slope(type, pre, theta)).sum();
    const Matrix d_pre = up.cwiseProduct(neuron_slope(type, pre, theta));
    d_drive += d_pre;

    const std::vector<int> src = layer_sources(g, j);
    auto accumulate = [&](int s, const Matrix& delta) {
      Matrix& u = upstream[s - 1];
      if (u.size() == 0) {
        u = delta;
      } else {
        u += delta;
      }
    };
    if (g.fusion == Fusion::kMm) {
      for (std::size_t t = 0; t < src.size(); ++t) {
        const int off = j - src[t];
        const Matrix& w = mm_matrix(p, off);
        const Matrix& x_in = tr.outputs[src[t] - 1];
        const double a = p.term_scale[j - 1][static_cast<Eigen::Index>(t)];
        gp.term_scale[j - 1][static_cast<Eigen::Index>(t)] =
            d_pre.cwiseProduct(w * x_in).sum();
        mm_matrix(gp, off).noalias() += a * d_pre * x_in.transpose();
        accumulate(src[t], a * (w.transpose() * d_pre));
      }
    } else if (!src.empty()) {
      const double a = p.alpha[j - 1];
      gp.alpha[j - 1] = d_pre.cwiseProduct(ft.mixed[j - 1]).sum();
      gp.w_x.noalias() += a * d_pre * tr.fused[j - 1].transpose();
      const Matrix d_fused = a * (p.w_x.transpose() * d_pre);
      for (std::size_t t = 0; t < src.size(); ++t) {
        const auto ti = static_cast<Eigen::Index>(t);
        if (g.fusion == Fusion::kLwa) {
          const double c = p.term_scale[j - 1][ti];
          gp.term_scale[j - 1][ti] =
              d_fused.cwiseProduct(tr.outputs[src[t] - 1]).sum();
          accumulate(src[t], c * d_fused);
        } else {
          accumulate(src[t], d_fused / static_cast<double>(src.size()));
        }
      }
    }
  }
  gp.w_b.noalias() = d_drive * b.transpose();
  return out;
}

void write_params(const Genome& g, const NetParams& p,
                  const std::filesystem::path& path) {
  check_params(g, p);
  Json h;
  h["format"] = "USRP";
  h["genome"] = genome_to_json(g);
  std::vector<NamedMatrix> arrays{{"w_b", p.w_b}};
  if (p.w_x.size() > 0) arrays.push_back({"w_x", p.w_x});
  for (std::size_t i = 0; i < p.mm_mats.size(); ++i) {
    arrays.push_back({"w_mm" + std::to_string(p.mm_offsets[i]), p.mm_mats[i]});
  }
  if (p.alpha.size() > 0) arrays.push_back({"alpha", p.alpha});
  arrays.push_back({"theta", p.theta});
  for (int j = 1; j <= p.k_layers(); ++j) {
    if (p.term_scale[j - 1].size() > 0) {
      arrays.push_back({"term" + std::to_string(j), p.term_scale[j - 1]});
    }
  }
  write_file(path, encode_container("USRP", 1, std::move(h), arrays));
}

std::pair<Genome, NetParams> read_params(const std::filesystem::path& path) {
  const Container c = decode_container(read_file(path), "USRP", 1);
  Genome g = genome_from_json(c.header.at("genome"));
  NetParams p;
  p.fusion = g.fusion;
  p.w_b = c.array("w_b");
  if (c.has_array("w_x")) p.w_x = c.array("w_x");
  if (g.fusion == Fusion::kMm) {
    p.mm_offsets = mm_offsets_for(g);
    for (int off : p.mm_offsets) {
      p.mm_mats.push_back(c.array("w_mm" + std::to_string(off)));
    }
  }
  if (c.has_array("alpha")) p.alpha = c.array("alpha").col(0);
  p.theta = c.array("theta").col(0);
  p.term_scale.resize(g.k_layers);
  for (int j = 1; j <= g.k_layers; ++j) {
    const std::string name = "term" + std::to_string(j);
    if (c.has_array(name)) p.term_scale[j - 1] = c.array(name).col(0);
  }
  try {
    check_params(g, p);
  } catch (const Error& e) {
    fail(ErrorKind::kFormat, std::string("parameter blob inconsistent: ") + e.what());
  }
  return {std::move(g), std::move(p)};
}

}  // namespace lista

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

#ifndef LISTA_NETWORK_H_
#define LISTA_NETWORK_H_

#include <span>
#include <string>
#include <vector>

#include "lista/genome.h"
#include "lista/synthgen.h"

namespace lista {

// Learnable parameters of one unrolled network. W_b and W_x (or the MM
// matrices) are tied across layers; scalars are per layer.
struct NetParams {
  Fusion fusion = Fusion::kLwa;
  Matrix w_b;  // n x m; plays the role of W_b-hat under MM
  Matrix w_x;  // n x n; empty under MM
  // MM only: offsets i with a matrix W_i (sorted) and the matrices.
  std::vector<int> mm_offsets;
  std::vector<Matrix> mm_mats;
  Vector alpha;  // per layer step scale; empty under MM
  Vector theta;  // per layer threshold
  // Per layer, one scalar per fusion term in layer_sources() order:
  // c_{i,k} under LWA, alpha_i^(k) under MM, nothing under NA.
  std::vector<Vector> term_scale;

  int k_layers() const { return static_cast<int>(theta.size()); }
  Eigen::Index n() const { return w_b.rows(); }
  Eigen::Index m() const { return w_b.cols(); }
  NetParams zeros_like() const;
};

// Parameter groups in a fixed order; per-layer scalars get their own entry
// so stage-wise training can select them by layer. layer == 0 marks the
// tied matrices.
struct ParamGroup {
  std::string name;
  int layer;
  std::span<double> values;
};
std::vector<ParamGroup> param_groups(NetParams& p);
std::size_t param_count(const NetParams& p);
Vector flatten(const NetParams& p);
void unflatten(NetParams& p, const Vector& flat);

/// MM matrix offsets demanded by the genome (always includes 1).
std::vector<int> mm_offsets_for(const Genome& g);

/// ISTA-equivalent start: W_b = D^T/L, W_x = I - D^T D/L, alpha = 1,
/// theta = lambda/L; LWA coefficients 1 on the default connection and 0 on
/// skips; MM: W_1 = I - D^T D/L, W_i = 0 for i >= 2, every alpha_i = 1.
NetParams init_params(const Genome& g, const Dictionary& d, double lambda);

/// Throws kInvalidArgument if the genome is invalid or p does not have the
/// shapes it demands.
void check_params(const Genome& g, const NetParams& p);

struct ForwardTrace {
  std::vector<Matrix> outputs;  // x^(1..depth), each n x batch
  std::vector<Matrix> fused;    // fused input of each layer (LWA/NA)
  std::vector<Matrix> pre;      // pre-activations
};

/// Runs the first `depth` layers (all when depth <= 0) on the columns of b.
/// Throws kNumeric naming the layer on a non-finite intermediate.
ForwardTrace forward(const Genome& g, const NetParams& p, const Matrix& b,
                     int depth = 0);

/// Output of layer `depth` only, without keeping intermediates.
Matrix infer(const Genome& g, const NetParams& p, const Matrix& b,
             int depth = 0);

struct Gradients {
  NetParams grad;
  double loss = 0.0;
};

/// Loss (1/batch) * sum_j ||x^(depth)_j - x*_j||^2 and its exact gradient
/// with respect to every parameter.
Gradients backward(const Genome& g, const NetParams& p, const Matrix& b,
                   const Matrix& x_star, int depth = 0);

double batch_loss(const Genome& g, const NetParams& p, const Matrix& b,
                  const Matrix& x_star, int depth = 0);

// Parameter blob: container magic "USRP", header carries the genome.
void write_params(const Genome& g, const NetParams& p,
                  const std::filesystem::path& path);
std::pair<Genome, NetParams> read_params(const std::filesystem::path& path);

}  // namespace lista

#endif  // LISTA_NETWORK_H_

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

#include "lista/solvers.h"

#include <cmath>

#include "lista/numerics.h"

namespace lista {

namespace {

double resolve_lipschitz(const Matrix& d, std::optional<double> lipschitz) {
  const double l = lipschitz ? *lipschitz : spectral_sq_norm(d);
  require(l > 0.0 && std::isfinite(l), "solver: L must be positive");
  return l;
}

void check_problem(const Matrix& d, Eigen::Index b_rows, double lambda,
                   int k_iters) {
  require(d.rows() == b_rows, "solver: b has " + std::to_string(b_rows) +
                                  " rows, D has " + std::to_string(d.rows()));
  require(lambda >= 0.0, "solver: lambda must be >= 0");
  require(k_iters >= 1, "solver: K must be >= 1");
}

}  // namespace

double lasso_objective(const Matrix& d, const Vector& b, const Vector& x,
                       double lambda) {
  require(d.rows() == b.size() && d.cols() == x.size(),
          "lasso_objective: shape mismatch");
  require(lambda >= 0.0, "lasso_objective: lambda must be >= 0");
  return 0.5 * (b - d * x).squaredNorm() + lambda * x.lpNorm<1>();
}

SolverTrace ista(const Matrix& d, const Vector& b, double lambda, int k_iters,
                 std::optional<double> lipschitz) {
  check_problem(d, b.size(), lambda, k_iters);
  const double l = resolve_lipschitz(d, lipschitz);
  SolverTrace trace;
  Vector x = Vector::Zero(d.cols());
  trace.iterates.push_back(x);
  trace.objectives.push_back(lasso_objective(d, b, x, lambda));
  for (int k = 0; k < k_iters; ++k) {
    x = soft_threshold(x + d.transpose() * (b - d * x) / l, lambda / l);
    trace.iterates.push_back(x);
    trace.objectives.push_back(lasso_objective(d, b, x, lambda));
  }
  return trace;
}

std::vector<double> fista_t_sequence(int k_iters) {
  std::vector<double> t{1.0};
  while (static_cast<int>(t.size()) < k_iters) {
    const double prev = t.back();
    t.push_back((1.0 + std::sqrt(1.0 + 4.0 * prev * prev)) / 2.0);
  }
  return t;
}

SolverTrace fista(const Matrix& d, const Vector& b, double lambda, int k_iters,
                  std::optional<double> lipschitz) {
  check_problem(d, b.size(), lambda, k_iters);
  const double l = resolve_lipschitz(d, lipschitz);
  SolverTrace trace;
  Vector x = Vector::Zero(d.cols());
  Vector x_prev = x;
  double t = 1.0;
  trace.iterates.push_back(x);
  trace.objectives.push_back(lasso_objective(d, b, x, lambda));
  for (int k = 0; k < k_iters; ++k) {
    const double t_next = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
    const Vector y = x + ((t - 1.0) / t_next) * (x - x_prev);
    x_prev = x;
    x = soft_threshold(y + d.transpose() * (b - d * y) / l, lambda / l);
    t = t_next;
    trace.iterates.push_back(x);
    trace.objectives.push_back(lasso_objective(d, b, x, lambda));
  }
  return trace;
}

Matrix ista_batch(const Matrix& d, const Matrix& b, double lambda, int k_iters,
                  std::optional<double> lipschitz) {
  check_problem(d, b.rows(), lambda, k_iters);
  const double l = resolve_lipschitz(d, lipschitz);
  Matrix x = Matrix::Zero(d.cols(), b.cols());
  for (int k = 0; k < k_iters; ++k) {
    x = soft_threshold(x + d.transpose() * (b - d * x) / l, lambda / l);
  }
  return x;
}

}  // namespace lista

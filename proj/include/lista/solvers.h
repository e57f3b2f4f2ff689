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

#ifndef LISTA_SOLVERS_H_
#define LISTA_SOLVERS_H_

#include <optional>
#include <vector>

#include "lista/common.h"

namespace lista {

// Iterates x^(0..K) and the LASSO objective at each.
struct SolverTrace {
  std::vector<Vector> iterates;
  std::vector<double> objectives;
};

/// 0.5 ||b - D x||^2 + lambda ||x||_1.
double lasso_objective(const Matrix& d, const Vector& b, const Vector& x,
                       double lambda);

/// K proximal-gradient steps with step 1/L from x^(0) = 0. L defaults to the
/// largest eigenvalue of D^T D.
SolverTrace ista(const Matrix& d, const Vector& b, double lambda, int k_iters,
                 std::optional<double> lipschitz = std::nullopt);

/// Beck-Teboulle acceleration with x^(0) = x^(-1) = 0 and t^(1) = 1.
SolverTrace fista(const Matrix& d, const Vector& b, double lambda, int k_iters,
                  std::optional<double> lipschitz = std::nullopt);

/// Momentum weights t^(1..K) of the FISTA recursion.
std::vector<double> fista_t_sequence(int k_iters);

/// Final ISTA iterate for every column of b (n x count).
Matrix ista_batch(const Matrix& d, const Matrix& b, double lambda, int k_iters,
                  std::optional<double> lipschitz = std::nullopt);

}  // namespace lista

#endif  // LISTA_SOLVERS_H_

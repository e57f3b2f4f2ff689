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

#ifndef LISTA_NUMERICS_H_
#define LISTA_NUMERICS_H_

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "lista/common.h"

namespace lista {

enum class NeuronType { kSoftThreshold, kRelu, kLeakyRelu };

inline constexpr double kLeakySlope = 0.1;
inline constexpr std::array<NeuronType, 3> kAllNeurons = {
    NeuronType::kSoftThreshold, NeuronType::kRelu, NeuronType::kLeakyRelu};

std::string_view neuron_name(NeuronType t);
std::optional<NeuronType> parse_neuron(std::string_view name);

/// Componentwise shrinkage sign(x) * max(|x| - theta, 0). Throws on theta < 0.
Matrix soft_threshold(const Eigen::Ref<const Matrix>& x, double theta);

/// Applies the layer nonlinearity. ReLU and LeakyReLU ignore theta.
Matrix apply_neuron(NeuronType t, const Eigen::Ref<const Matrix>& x,
                    double theta);

/// Derivative of the neuron w.r.t. its input, evaluated at x. The soft
/// threshold uses 0 on the closed dead zone |x| <= theta.
Matrix neuron_slope(NeuronType t, const Eigen::Ref<const Matrix>& x,
                    double theta);

/// Derivative of the neuron output w.r.t. theta (zero for ReLU variants).
Matrix neuron_theta_slope(NeuronType t, const Eigen::Ref<const Matrix>& x,
                          double theta);

inline constexpr int kPowerMaxIters = 10000;

/// Largest eigenvalue of D^T D by power iteration from the normalized
/// all-ones vector. Stops when the Rayleigh quotient's relative change drops
/// below tol; throws kNumeric if that never happens within kPowerMaxIters.
double spectral_sq_norm(const Matrix& d, double tol = 1e-10);

using ScalarFn = std::function<double(const Vector&)>;

/// Central differences (f(p + eps e_i) - f(p - eps e_i)) / (2 eps).
Vector finite_diff_grad(const ScalarFn& f, const Vector& p, double eps);

}  // namespace lista

#endif  // LISTA_NUMERICS_H_

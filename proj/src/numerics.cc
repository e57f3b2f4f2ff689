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

#include "lista/numerics.h"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace lista {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::uint64_t matrix_hash(const Matrix& m, std::uint64_t h) {
  const std::int64_t shape[2] = {m.rows(), m.cols()};
  h = fnv1a64(std::as_bytes(std::span(shape)), h);
  return fnv1a64(std::as_bytes(std::span(m.data(), m.size())), h);
}

std::string_view neuron_name(NeuronType t) {
  switch (t) {
    case NeuronType::kSoftThreshold:
      return "soft_threshold";
    case NeuronType::kRelu:
      return "relu";
    case NeuronType::kLeakyRelu:
      return "leaky_relu";
  }
  return "?";
}

std::optional<NeuronType> parse_neuron(std::string_view name) {
  for (NeuronType t : kAllNeurons) {
    if (neuron_name(t) == name) return t;
  }
  return std::nullopt;
}

Matrix soft_threshold(const Eigen::Ref<const Matrix>& x, double theta) {
  require(theta >= 0.0, "soft_threshold: negative theta");
  return x.unaryExpr([theta](double v) {
    if (v > theta) return v - theta;
    if (v < -theta) return v + theta;
    return 0.0;
  });
}

Matrix apply_neuron(NeuronType t, const Eigen::Ref<const Matrix>& x,
                    double theta) {
  switch (t) {
    case NeuronType::kSoftThreshold:
      return soft_threshold(x, theta);
    case NeuronType::kRelu:
      return x.cwiseMax(0.0);
    case NeuronType::kLeakyRelu:
      return x.unaryExpr([](double v) { return v > 0 ? v : kLeakySlope * v; });
  }
  return x;
}

Matrix neuron_slope(NeuronType t, const Eigen::Ref<const Matrix>& x,
                    double theta) {
  switch (t) {
    case NeuronType::kSoftThreshold:
      return x.unaryExpr(
          [theta](double v) { return std::abs(v) > theta ? 1.0 : 0.0; });
    case NeuronType::kRelu:
      return x.unaryExpr([](double v) { return v > 0 ? 1.0 : 0.0; });
    case NeuronType::kLeakyRelu:
      return x.unaryExpr([](double v) { return v > 0 ? 1.0 : kLeakySlope; });
  }
  return Matrix::Zero(x.rows(), x.cols());
}

Matrix neuron_theta_slope(NeuronType t, const Eigen::Ref<const Matrix>& x,
                          double theta) {
  if (t != NeuronType::kSoftThreshold) {
    return Matrix::Zero(x.rows(), x.cols());
  }
  return x.unaryExpr([theta](double v) {
    if (v > theta) return -1.0;
    if (v < -theta) return 1.0;
    return 0.0;
  });
}

double spectral_sq_norm(const Matrix& d, double tol) {
  require(d.size() > 0 && d.norm() > 0.0, "spectral_sq_norm: zero matrix");
  Vector v = Vector::Ones(d.cols()) / std::sqrt(static_cast<double>(d.cols()));
  double lambda = 0.0;
  for (int it = 0; it < kPowerMaxIters; ++it) {
    const Vector dv = d * v;
    Vector w = d.transpose() * dv;
    const double next = v.dot(w);  // Rayleigh quotient, ||v|| = 1
    const double wn = w.norm();
    if (!std::isfinite(next) || wn == 0.0) {
      fail(ErrorKind::kNumeric, "spectral_sq_norm: degenerate iterate");
    }
    v = w / wn;
    if (it > 0 && std::abs(next - lambda) <= tol * std::abs(next)) {
      return next;
    }
    lambda = next;
  }
  fail(ErrorKind::kNumeric, "spectral_sq_norm: power iteration did not converge");
}

Vector finite_diff_grad(const ScalarFn& f, const Vector& p, double eps) {
  require(eps > 0.0, "finite_diff_grad: eps must be positive");
  Vector g(p.size());
  Vector q = p;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    q[i] = p[i] + eps;
    const double fp = f(q);
    q[i] = p[i] - eps;
    const double fm = f(q);
    q[i] = p[i];
    if (!std::isfinite(fp) || !std::isfinite(fm)) {
      fail(ErrorKind::kNumeric,
           "finite_diff_grad: non-finite value at coordinate " +
               std::to_string(i));
    }
    g[i] = (fp - fm) / (2.0 * eps);
  }
  return g;
}

}  // namespace lista

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

#include <gtest/gtest.h>

#include <cmath>

#include "test_util.h"

namespace lista {
namespace {

using testing::random_matrix;

TEST(SoftThreshold, Examples) {
  Matrix x(1, 5);
  x << -2.0, -0.5, 0.0, 0.5, 2.0;
  const Matrix y = soft_threshold(x, 1.0);
  Matrix want(1, 5);
  want << -1.0, 0.0, 0.0, 0.0, 1.0;
  EXPECT_EQ(y, want);
  EXPECT_EQ(soft_threshold(x, 0.0), x);
}

TEST(SoftThreshold, NegativeThetaRejected) {
  EXPECT_LISTA_ERROR(soft_threshold(Matrix::Ones(2, 2), -0.1), ErrorKind::kInvalidArgument);
}

// Property: soft thresholding never increases magnitude or flips sign, and
// shrinks by exactly theta outside the dead zone.
TEST(SoftThreshold, ShrinkageProperty) {
  const Matrix x = random_matrix(20, 50, 3);
  for (double theta : {0.0, 0.1, 0.7, 3.0}) {
    const Matrix y = soft_threshold(x, theta);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double a = x.data()[i], b = y.data()[i];
      ASSERT_LE(std::abs(b), std::abs(a));
      ASSERT_GE(a * b, 0.0);
      if (std::abs(a) > theta) {
        ASSERT_NEAR(std::abs(a) - std::abs(b), theta, 1e-15);
      } else {
        ASSERT_EQ(b, 0.0);
      }
    }
  }
}

TEST(Neurons, Values) {
  Matrix x(1, 3);
  x << -1.0, 0.2, 1.5;
  Matrix relu(1, 3), leaky(1, 3);
  relu << 0.0, 0.2, 1.5;
  leaky << -kLeakySlope, 0.2, 1.5;
  // Threshold is unused outside soft thresholding.
  EXPECT_EQ(apply_neuron(NeuronType::kRelu, x, 0.5), relu);
  EXPECT_EQ(apply_neuron(NeuronType::kLeakyRelu, x, 0.5), leaky);
  EXPECT_EQ(neuron_theta_slope(NeuronType::kRelu, x, 0.5), Matrix::Zero(1, 3));
}

TEST(Neurons, NameRoundTrip) {
  for (NeuronType t : kAllNeurons) EXPECT_EQ(parse_neuron(neuron_name(t)), t);
  EXPECT_FALSE(parse_neuron("tanh").has_value());
}

// Slopes must match central differences away from kinks.
TEST(Neurons, SlopesMatchFiniteDifferences) {
  const Matrix x = random_matrix(5, 40, 8);
  const double theta = 0.3;
  const double h = 1e-7;
  for (NeuronType t : kAllNeurons) {
    const Matrix dx = neuron_slope(t, x, theta);
    const Matrix dth = neuron_theta_slope(t, x, theta);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double v = x.data()[i];
      if (std::abs(std::abs(v) - theta) < 1e-3 || std::abs(v) < 1e-3) continue;
      Matrix a(1, 1), b(1, 1);
      a(0, 0) = v + h;
      b(0, 0) = v - h;
      const double fd_x =
          (apply_neuron(t, a, theta)(0, 0) - apply_neuron(t, b, theta)(0, 0)) / (2 * h);
      ASSERT_NEAR(dx.data()[i], fd_x, 1e-6) << neuron_name(t) << " x=" << v;
      Matrix c(1, 1);
      c(0, 0) = v;
      const double fd_t =
          (apply_neuron(t, c, theta + h)(0, 0) - apply_neuron(t, c, theta - h)(0, 0)) / (2 * h);
      ASSERT_NEAR(dth.data()[i], fd_t, 1e-6) << neuron_name(t) << " x=" << v;
    }
  }
}

TEST(SpectralNorm, MatchesDenseEigensolver) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Matrix d = random_matrix(16 + static_cast<int>(seed), 40, seed);
    const double want = testing::eig_lipschitz(d);
    EXPECT_NEAR(spectral_sq_norm(d), want, 1e-8 * want) << "seed " << seed;
  }
}

TEST(SpectralNorm, Identity) {
  EXPECT_NEAR(spectral_sq_norm(Matrix::Identity(7, 7)), 1.0, 1e-12);
  EXPECT_NEAR(spectral_sq_norm(3.0 * Matrix::Identity(4, 4)), 9.0, 1e-10);
}

TEST(FiniteDiff, Quadratic) {
  Vector p(3);
  p << 1.0, -2.0, 0.5;
  const auto f = [](const Vector& v) { return v.squaredNorm() + v[0] * v[1]; };
  const Vector g = finite_diff_grad(f, p, 1e-6);
  Vector want(3);
  want << 2 * 1.0 + (-2.0), 2 * -2.0 + 1.0, 1.0;
  EXPECT_TRUE(g.isApprox(want, 1e-8));
}

TEST(FiniteDiff, NonFiniteRejected) {
  const auto f = [](const Vector& v) { return std::log(v[0]); };
  Vector p(1);
  p << 0.0;
  EXPECT_LISTA_ERROR(finite_diff_grad(f, p, 1e-6), ErrorKind::kNumeric);
}

}  // namespace
}  // namespace lista

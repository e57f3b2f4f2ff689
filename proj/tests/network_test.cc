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

#include <gtest/gtest.h>

#include <cmath>

#include "lista/solvers.h"
#include "lista/trainer.h"
#include "test_util.h"

namespace lista {
namespace {

using testing::random_matrix;

// Moves every parameter off its structured initial value.
NetParams jitter(const NetParams& p, std::uint64_t seed, double scale = 0.05) {
  NetParams q = p;
  CounterRng rng(seed, 5);
  for (auto& grp : param_groups(q)) {
    for (double& v : grp.values) v += scale * rng.normal();
  }
  q.theta = q.theta.cwiseAbs();
  return q;
}

Genome with_all(Genome g, Fusion f, NeuronType t) {
  g.fusion = f;
  for (auto& n : g.neurons) n = t;
  return g;
}

TEST(Init, ShapesAndValues) {
  const Dictionary d = sample_dictionary(4, 8, 1);
  const NetParams p = init_params(genome_dense(5), d, 0.4);
  const double l = spectral_sq_norm(d.data);
  EXPECT_TRUE(p.w_b.isApprox(d.data.transpose() / l));
  EXPECT_TRUE(p.w_x.isApprox(Matrix::Identity(8, 8) - d.data.transpose() * d.data / l));
  for (int k = 0; k < 5; ++k) EXPECT_DOUBLE_EQ(p.theta[k], 0.4 / l);
  EXPECT_EQ(p.alpha, Vector::Ones(5));
}

// LWA coefficients: skips plus one default coefficient per layer that has a
// default input (layers 2..K).
TEST(Init, LwaCoefficientCount) {
  const Dictionary d = sample_dictionary(4, 8, 1);
  for (const char* name : {"lista", "lfista", "dense"}) {
    const Genome g = genome_preset(name, 6);
    const NetParams p = init_params(g, d, 0.4);
    std::size_t coefs = 0;
    for (const auto& v : p.term_scale) coefs += v.size();
    EXPECT_EQ(coefs, static_cast<std::size_t>(count_extra(g) + 5)) << name;
    const std::size_t base = param_count(init_params(genome_lista(6), d, 0.4));
    EXPECT_EQ(param_count(p) - base, static_cast<std::size_t>(count_extra(g))) << name;
  }
}

TEST(Init, MmMatrices) {
  const Dictionary d = sample_dictionary(4, 8, 1);
  const Genome g = with_all(genome_dense(5), Fusion::kMm, NeuronType::kSoftThreshold);
  const NetParams p = init_params(g, d, 0.4);
  EXPECT_EQ(p.mm_offsets, (std::vector<int>{1, 2, 3, 4}));
  EXPECT_EQ(p.mm_mats[1], Matrix::Zero(8, 8));
  EXPECT_EQ(p.alpha.size(), 0);
  EXPECT_EQ(mm_offsets_for(genome_lista(5)), std::vector<int>{1});
}

TEST(Forward, IstaEquivalenceAtInit) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Dictionary d = sample_dictionary(32, 64, s);
    const Matrix b = random_matrix(32, 3, s + 7);
    const double lambda = 0.2;
    for (Genome g : {genome_lista(8), genome_lfista(8), genome_dense(8)}) {
      g.fusion = Fusion::kMm;
      if (count_extra(g) == 0) {
        // LWA and NA only reduce to ISTA without extra connections.
        for (Fusion f : {Fusion::kLwa, Fusion::kNa, Fusion::kMm}) {
          Genome h = g;
          h.fusion = f;
          const ForwardTrace tr = forward(h, init_params(h, d, lambda), b);
          for (int c = 0; c < 3; ++c) {
            const SolverTrace it = ista(d.data, b.col(c), lambda, 8);
            for (int k = 1; k <= 8; ++k) {
              ASSERT_LE((tr.outputs[k - 1].col(c) - it.iterates[k]).cwiseAbs().maxCoeff(),
                        1e-12);
            }
          }
        }
      }
      const ForwardTrace tr = forward(g, init_params(g, d, lambda), b);
      const SolverTrace it = ista(d.data, b.col(0), lambda, 8);
      for (int k = 1; k <= 8; ++k) {
        ASSERT_LE((tr.outputs[k - 1].col(0) - it.iterates[k]).cwiseAbs().maxCoeff(), 1e-12);
      }
    }
  }
}

TEST(Forward, LwaInitEqualsListaForEveryGenome) {
  const Dictionary d = sample_dictionary(8, 16, 3);
  const Matrix b = random_matrix(8, 4, 4);
  const Matrix want = infer(genome_lista(6), init_params(genome_lista(6), d, 0.3), b);
  const Genome g = genome_dense(6);
  EXPECT_LE((infer(g, init_params(g, d, 0.3), b) - want).cwiseAbs().maxCoeff(), 1e-14);
}

// Gate-off equals absence: zeroing a skip coefficient matches dropping it.
TEST(Forward, ZeroCoefficientEqualsMissingGate) {
  const Dictionary d = sample_dictionary(8, 16, 3);
  const Matrix b = random_matrix(8, 4, 4);
  Genome with = genome_lista(5);
  with.skip_gates.insert({1, 3});
  NetParams p = jitter(init_params(with, d, 0.3), 9);
  const auto src = layer_sources(with, 4);
  ASSERT_EQ(src, (std::vector<int>{1, 3}));
  p.term_scale[3][0] = 0.0;

  const Genome without = genome_lista(5);
  NetParams q = init_params(without, d, 0.3);
  q.w_b = p.w_b;
  q.w_x = p.w_x;
  q.alpha = p.alpha;
  q.theta = p.theta;
  for (int j = 0; j < 5; ++j) q.term_scale[j] = p.term_scale[j].tail(q.term_scale[j].size());
  EXPECT_LE((infer(with, p, b) - infer(without, q, b)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Forward, PermutationEquivariant) {
  const Dictionary d = sample_dictionary(8, 16, 3);
  const Genome g = with_all(genome_dense(4), Fusion::kNa, NeuronType::kLeakyRelu);
  const NetParams p = jitter(init_params(g, d, 0.3), 2);
  const Matrix b = random_matrix(8, 5, 4);
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(5);
  perm.indices() << 3, 0, 4, 1, 2;
  EXPECT_LE((infer(g, p, b * perm) - infer(g, p, b) * perm).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Forward, DepthTruncates) {
  const Dictionary d = sample_dictionary(8, 16, 3);
  const Genome g = genome_lfista(6);
  const NetParams p = jitter(init_params(g, d, 0.3), 2);
  const Matrix b = random_matrix(8, 3, 1);
  EXPECT_EQ(infer(g, p, b, 3), forward(g, p, b).outputs[2]);
  EXPECT_EQ(forward(g, p, b, 3).outputs.size(), 3u);
}

TEST(Forward, ShapeMismatchAndNonFinite) {
  const Dictionary d = sample_dictionary(8, 16, 3);
  const Genome g = genome_lista(3);
  NetParams p = init_params(g, d, 0.3);
  EXPECT_LISTA_ERROR(infer(g, p, Matrix::Zero(7, 2)), ErrorKind::kInvalidArgument);
  EXPECT_LISTA_ERROR(infer(genome_lista(4), p, Matrix::Zero(8, 2)),
                     ErrorKind::kInvalidArgument);
  p.w_b(0, 0) = std::nan("");
  EXPECT_LISTA_ERROR(infer(g, p, Matrix::Ones(8, 2)), ErrorKind::kNumeric);
}

TEST(Backward, ZeroInputGivesZeroWbGradient) {
  const Dictionary d = sample_dictionary(4, 8, 3);
  const Genome g = genome_lista(3);
  NetParams p = init_params(g, d, 0.3).zeros_like();
  p.theta.setConstant(0.1);
  const Gradients gr = backward(g, p, Matrix::Zero(4, 2), Matrix::Zero(8, 2));
  EXPECT_EQ(gr.grad.w_b, Matrix::Zero(8, 4));
  EXPECT_EQ(gr.loss, 0.0);
}

TEST(Backward, DuplicatedBatchSameGradient) {
  const Dictionary d = sample_dictionary(4, 8, 3);
  const Genome g = with_all(genome_dense(4), Fusion::kMm, NeuronType::kSoftThreshold);
  const NetParams p = jitter(init_params(g, d, 0.1), 4);
  const Matrix x = sample_signals(8, 3, BernoulliGauss{0.5}, 1);
  const Matrix b = d.data * x;
  Matrix b2(4, 6), x2(8, 6);
  b2 << b, b;
  x2 << x, x;
  const Vector g1 = flatten(backward(g, p, b, x).grad);
  const Vector g2 = flatten(backward(g, p, b2, x2).grad);
  EXPECT_LE((g1 - g2).cwiseAbs().maxCoeff(), 1e-13 * (1.0 + g1.cwiseAbs().maxCoeff()));
}

TEST(Backward, LossMatchesForward) {
  const Dictionary d = sample_dictionary(4, 8, 3);
  const Genome g = genome_lfista(4);
  const NetParams p = jitter(init_params(g, d, 0.1), 4);
  const Matrix x = sample_signals(8, 5, BernoulliGauss{0.5}, 1);
  const Matrix b = d.data * x;
  const double want = (infer(g, p, b) - x).squaredNorm() / 5.0;
  EXPECT_NEAR(backward(g, p, b, x).loss, want, 1e-14);
  EXPECT_NEAR(batch_loss(g, p, b, x), want, 1e-14);
}

// Finite-difference oracle over every fusion x neuron combination.
TEST(Backward, MatchesFiniteDifferences) {
  const Dictionary d = sample_dictionary(4, 8, 11);
  for (Fusion f : {Fusion::kLwa, Fusion::kNa, Fusion::kMm}) {
    for (NeuronType t : kAllNeurons) {
      for (const Genome& base : {genome_lfista(3), genome_dense(4)}) {
        const Genome g = with_all(base, f, t);
        const NetParams p = jitter(init_params(g, d, 0.1), 3);
        const double err = grad_check(g, d, p, 21, 1e-6, 2);
        EXPECT_LE(err, 1e-5) << fusion_name(f) << "/" << neuron_name(t);
      }
    }
  }
}

TEST(Params, FlattenRoundTrip) {
  const Dictionary d = sample_dictionary(4, 8, 3);
  const Genome g = with_all(genome_dense(5), Fusion::kMm, NeuronType::kRelu);
  const NetParams p = jitter(init_params(g, d, 0.1), 6);
  NetParams q = init_params(g, d, 0.1);
  unflatten(q, flatten(p));
  EXPECT_EQ(flatten(q), flatten(p));
  EXPECT_LISTA_ERROR(unflatten(q, Vector::Zero(3)), ErrorKind::kInvalidArgument);
}

TEST(Params, FileRoundTripAndCorruption) {
  const auto dir = testing::scratch_dir();
  const Dictionary d = sample_dictionary(4, 8, 3);
  Genome g = with_all(genome_lfista(4), Fusion::kMm, NeuronType::kSoftThreshold);
  const NetParams p = jitter(init_params(g, d, 0.1), 6);
  write_params(g, p, dir / "p.usrp");
  const auto [g2, p2] = read_params(dir / "p.usrp");
  EXPECT_EQ(g2, g);
  EXPECT_EQ(flatten(p2), flatten(p));
  EXPECT_EQ(p2.mm_offsets, p.mm_offsets);

  std::string bytes = read_file(dir / "p.usrp");
  bytes[bytes.size() - 20] ^= 1;
  write_file(dir / "bad.usrp", bytes);
  EXPECT_LISTA_ERROR(read_params(dir / "bad.usrp"), ErrorKind::kChecksum);
}

TEST(Params, MismatchRejected) {
  const Dictionary d = sample_dictionary(4, 8, 3);
  const NetParams p = init_params(genome_lista(4), d, 0.1);
  EXPECT_LISTA_ERROR(check_params(genome_dense(4), p), ErrorKind::kInvalidArgument);
  Genome mm = genome_lista(4);
  mm.fusion = Fusion::kMm;
  EXPECT_LISTA_ERROR(check_params(mm, p), ErrorKind::kInvalidArgument);
}

}  // namespace
}  // namespace lista

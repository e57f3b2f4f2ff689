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

#include "lista/rng.h"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

namespace lista {
namespace {

// Known-answer vectors published with the Random123 reference implementation.
TEST(Philox, KnownAnswers) {
  using C = Philox4x32::Counter;
  using K = Philox4x32::Key;
  EXPECT_EQ(Philox4x32::block(C{0, 0, 0, 0}, K{0, 0}),
            (C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(Philox4x32::block(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                              K{0xffffffff, 0xffffffff}),
            (C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(Philox4x32::block(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                              K{0xa4093822, 0x299f31d0}),
            (C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(CounterRng, SameSeedSameStream) {
  CounterRng a(42, 7), b(42, 7);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(CounterRng, StreamsDiffer) {
  CounterRng a(42, 0), b(42, 1), c(43, 0);
  const auto va = a.next_u64();
  EXPECT_NE(va, b.next_u64());
  EXPECT_NE(va, c.next_u64());
}

TEST(CounterRng, UniformRange) {
  CounterRng rng(1, 0);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double v = rng.uniform_open();
    ASSERT_GT(v, 0.0);
    ASSERT_LT(v, 1.0);
  }
}

struct Moments {
  double mean = 0.0;
  double var = 0.0;
};

template <typename F>
Moments moments(F draw, int n) {
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = draw();
    s += x;
    s2 += x * x;
  }
  const double mean = s / n;
  return {mean, s2 / n - mean * mean};
}

TEST(CounterRng, DistributionMoments) {
  constexpr int kN = 200000;
  CounterRng rng(5, 3);
  const auto u = moments([&] { return rng.uniform(); }, kN);
  EXPECT_NEAR(u.mean, 0.5, 0.005);
  EXPECT_NEAR(u.var, 1.0 / 12.0, 0.002);

  const auto z = moments([&] { return rng.normal(); }, kN);
  EXPECT_NEAR(z.mean, 0.0, 0.01);
  EXPECT_NEAR(z.var, 1.0, 0.02);

  const auto l = moments([&] { return rng.laplace(0.5); }, kN);
  EXPECT_NEAR(l.mean, 0.0, 0.01);
  EXPECT_NEAR(l.var, 2.0 * 0.25, 0.02);

  for (double shape : {0.3, 1.0, 4.0}) {
    const auto g = moments([&] { return rng.gamma(shape, 0.5); }, kN);
    EXPECT_NEAR(g.mean, shape * 0.5, 0.02 * shape + 0.005) << "shape " << shape;
    EXPECT_NEAR(g.var, shape * 0.25, 0.05 * shape + 0.005) << "shape " << shape;
  }
}

TEST(CounterRng, BelowCoversRangeUniformly) {
  CounterRng rng(9, 0);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto v = rng.below(7);
    ASSERT_LT(v, 7u);
    ++hist[v];
  }
  for (int h : hist) EXPECT_NEAR(h, 10000, 500);
}

TEST(CounterRng, BernoulliRate) {
  CounterRng rng(11, 0);
  int on = 0;
  for (int i = 0; i < 100000; ++i) on += rng.bernoulli(0.1);
  EXPECT_NEAR(on / 100000.0, 0.1, 0.005);
}

}  // namespace
}  // namespace lista

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

#include "lista/genome.h"

#include <gtest/gtest.h>

#include <cmath>

#include "test_util.h"

namespace lista {
namespace {

TEST(Presets, ExtraConnectionCounts) {
  EXPECT_EQ(count_extra(genome_lista(16)), 0);
  EXPECT_EQ(count_extra(genome_lfista(16)), 14);
  EXPECT_EQ(count_extra(genome_dense(16)), 105);
  EXPECT_EQ(count_extra(genome_lista(3)), 0);
  EXPECT_EQ(count_extra(genome_dense(3)), 1);
  for (int k = 2; k <= 20; ++k) EXPECT_EQ(count_extra(genome_dense(k)), max_extra(k));
}

TEST(Presets, Shape) {
  for (const char* name : {"lista", "lfista", "dense"}) {
    const Genome g = genome_preset(name, 6);
    EXPECT_TRUE(validate_genome(g).empty()) << name;
    EXPECT_EQ(g.fusion, Fusion::kLwa);
    EXPECT_EQ(g.side_gates, std::vector<bool>(6, true));
    EXPECT_EQ(g.neurons, std::vector<NeuronType>(6, NeuronType::kSoftThreshold));
  }
  EXPECT_LISTA_ERROR(genome_preset("resnet", 6), ErrorKind::kInvalidArgument);
}

TEST(Presets, LfistaFeedsPreviousIterate) {
  const Genome g = genome_lfista(5);
  for (int layer = 3; layer <= 5; ++layer) {
    EXPECT_EQ(layer_sources(g, layer), (std::vector<int>{layer - 2, layer - 1}));
  }
  EXPECT_EQ(layer_sources(g, 2), std::vector<int>{1});
  EXPECT_TRUE(layer_sources(g, 1).empty());
}

TEST(DesignSpace, Sizes) {
  EXPECT_EQ(design_space_size(16, false, false), BigInt(1) << 105);
  EXPECT_EQ(design_space_size(16, false, true), BigInt(1) << 120);
  const BigInt with_neurons = design_space_size(16, true, false);
  EXPECT_EQ(with_neurons, (BigInt(1) << 105) * boost::multiprecision::pow(BigInt(3), 16));
  const double v = with_neurons.convert_to<double>();
  EXPECT_NEAR(v / 1.75e39, 1.0, 0.01);
  EXPECT_EQ(design_space_size(5, false, false), 64);
  EXPECT_EQ(design_space_size(3, false, false), 2);
}

TEST(Validate, Violations) {
  EXPECT_TRUE(validate_genome(genome_dense(16)).empty());
  Genome g = genome_lista(5);
  g.skip_gates.insert({3, 2});
  auto v = validate_genome(g);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].find("non-causal"), std::string::npos);

  g = genome_lista(5);
  g.side_gates[0] = false;
  v = validate_genome(g);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].find("layer 1"), std::string::npos);

  g = genome_lista(5);
  g.neurons.pop_back();
  EXPECT_FALSE(validate_genome(g).empty());

  g = genome_lista(5);
  g.skip_gates.insert({0, 3});
  EXPECT_FALSE(validate_genome(g).empty());

  g = genome_lista(2);
  g.k_layers = 1;
  g.neurons.resize(1);
  g.side_gates.resize(1);
  EXPECT_FALSE(validate_genome(g).empty());
}

TEST(Sources, SideGateRemovesDefaultInput) {
  Genome g = genome_lista(4);
  g.side_gates[2] = false;
  EXPECT_TRUE(layer_sources(g, 3).empty());
  g.skip_gates.insert({1, 2});
  EXPECT_EQ(layer_sources(g, 3), std::vector<int>{1});
}

TEST(Json, RoundTripAndCanonical) {
  Genome g = genome_lfista(6);
  g.fusion = Fusion::kMm;
  g.neurons[2] = NeuronType::kLeakyRelu;
  g.side_gates[4] = false;
  const Json j = genome_to_json(g);
  EXPECT_EQ(genome_from_json(j), g);
  EXPECT_EQ(j["k"], 6);
  EXPECT_EQ(j["fusion"], "mm");

  // Pair order in the input does not matter for the content hash.
  Json shuffled = j;
  std::reverse(shuffled["skip_gates"].begin(), shuffled["skip_gates"].end());
  EXPECT_EQ(genome_hash(genome_from_json(shuffled)), genome_hash(g));
  EXPECT_NE(genome_hash(genome_lista(6)), genome_hash(genome_lfista(6)));
}

TEST(Json, FileRoundTrip) {
  const auto dir = testing::scratch_dir();
  const Genome g = genome_dense(7);
  save_genome(g, dir / "g.json");
  EXPECT_EQ(load_genome(dir / "g.json"), g);
  write_file(dir / "bad.json", "{\"k\": ");
  EXPECT_LISTA_ERROR(load_genome(dir / "bad.json"), ErrorKind::kInvalidArgument);
}

TEST(Fusion, Names) {
  for (Fusion f : {Fusion::kLwa, Fusion::kNa, Fusion::kMm}) {
    EXPECT_EQ(parse_fusion(fusion_name(f)), f);
  }
  EXPECT_LISTA_ERROR(parse_fusion("max"), ErrorKind::kInvalidArgument);
}

}  // namespace
}  // namespace lista

// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "synthforge/cavitygen.hpp"

namespace sf = synthforge;
namespace st = synthforge::testing;

TEST(CavityParams, SampledParamsAreValid) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto p = sf::sample_cavity_params(s);
    EXPECT_NO_THROW(p.validate());
    EXPECT_GE(p.layers.size(), 2u);
    EXPECT_LE(p.layers.size(), 4u);
    EXPECT_GE(p.threshold, sf::kCavityThresholdMin);
    EXPECT_LT(p.threshold, sf::kCavityThresholdMax);
  }
}

TEST(CavityParams, ValidationRejectsBadLayers) {
  auto p = sf::sample_cavity_params(1);
  p.layers[0].lacunarity = 3.0;
  EXPECT_THROW(p.validate(), sf::ConfigError);
  p = sf::sample_cavity_params(1);
  p.layers[0].persistence = 0.5;
  EXPECT_THROW(p.validate(), sf::ConfigError);
  p = sf::sample_cavity_params(1);
  p.layers.clear();
  EXPECT_THROW(p.validate(), sf::ConfigError);
  p = sf::sample_cavity_params(1);
  p.min_area = 0;
  EXPECT_THROW(p.validate(), sf::ConfigError);
}

TEST(CavityMap, ComponentsRespectMinAreaAndDepth) {
  for (std::uint64_t s = 0; s < 4; ++s) {
    auto p = sf::sample_cavity_params(s);
    p.min_area = 9;
    const auto m = sf::gen_cavity_map(128, 128, p);
    for (auto n : st::oracle_component_sizes(m.mask)) EXPECT_GE(n, 9u);
    for (int y = 0; y < 128; ++y) {
      for (int x = 0; x < 128; ++x) {
        if (!m.mask.get(x, y)) {
          ASSERT_EQ(m.depth.at(x, y), 0.0);
        } else {
          ASSERT_GT(m.field.at(x, y), p.threshold);
        }
      }
    }
  }
}

TEST(CavitySample, EmittedComponentsAtLeastMinArea) {
  for (std::uint64_t i = 0; i < 3; ++i) {
    const auto s = sf::gen_synthcavity_sample({11, i}, i % 2 == 0, {}, 192, 192);
    const auto cav = s.masks.get(sf::ClassId::Cavity);
    const auto sizes = st::oracle_component_sizes(cav);
    for (auto n : sizes) EXPECT_GE(n, sf::sample_cavity_params(0).min_area);
    EXPECT_EQ(s.annotation.shapes.size(), sizes.size());
    EXPECT_EQ(s.weathered, i % 2 == 0);
  }
}

TEST(CavitySample, Deterministic) {
  const auto a = sf::gen_synthcavity_sample({2, 3}, false, {}, 96, 96);
  const auto b = sf::gen_synthcavity_sample({2, 3}, false, {}, 96, 96);
  EXPECT_EQ(a.image, b.image);
  EXPECT_EQ(a.masks, b.masks);
  EXPECT_EQ(a.extra, b.extra);
}

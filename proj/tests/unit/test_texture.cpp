// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "synthforge/imgops.hpp"
#include "synthforge/texture.hpp"

namespace sf = synthforge;
namespace st = synthforge::testing;

TEST(Surface, DeterministicPerSeed) {
  const auto a = sf::random_surface(5, true, 96, 64);
  const auto b = sf::random_surface(5, true, 96, 64);
  const auto c = sf::random_surface(6, true, 96, 64);
  EXPECT_EQ(a.image, b.image);
  EXPECT_EQ(a.weathering_mask, b.weathering_mask);
  EXPECT_NE(a.image, c.image);
  EXPECT_EQ(a.image.width, 96);
  EXPECT_EQ(a.image.height, 64);
}

TEST(Surface, WeatheringCoverageIsExactQuantile) {
  for (double cov : {0.1, 0.25, 0.5}) {
    sf::SurfaceParams p;
    p.width = 80;
    p.height = 60;
    p.weathered = true;
    p.weathering_coverage = cov;
    p.pore_density = 0;
    p.seed = 12;
    const auto s = sf::synth_surface(p);
    EXPECT_EQ(s.weathering_mask.popcount(), static_cast<std::size_t>(std::llround(cov * 80 * 60)));
    EXPECT_EQ(s.weathering_mask.cls, sf::ClassId::Weathering);
  }
}

TEST(Surface, UnweatheredHasNoWeatheringMask) {
  const auto s = sf::random_surface(9, false, 64, 64);
  EXPECT_TRUE(s.weathering_mask.empty());
}

TEST(Surface, PoresAreSeparatedAndDarker) {
  sf::SurfaceParams p;
  p.width = 128;
  p.height = 128;
  p.pore_density = 0.5;
  p.grain_amp = 0;
  p.blotch_amp = 0;
  p.seed = 3;
  const auto s = sf::synth_surface(p);
  EXPECT_GT(s.pore_count, 0);
  EXPECT_EQ(st::oracle_component_sizes(s.pore_mask).size(), static_cast<std::size_t>(s.pore_count));
  for (int y = 0; y < 128; ++y) {
    for (int x = 0; x < 128; ++x) {
      if (s.pore_mask.get(x, y)) {
        ASSERT_LT(s.image.at(x, y, 0), sf::clamp_u8(255.0 * p.base_gray));
      }
    }
  }
}

TEST(Surface, ValidationRejectsOutOfRange) {
  sf::SurfaceParams p;
  p.base_gray = 1.5;
  EXPECT_THROW(sf::synth_surface(p), sf::ConfigError);
  p = {};
  p.weathering_coverage = -0.1;
  EXPECT_THROW(sf::synth_surface(p), sf::ConfigError);
  p = {};
  p.width = 0;
  EXPECT_THROW(sf::synth_surface(p), sf::ConfigError);
}

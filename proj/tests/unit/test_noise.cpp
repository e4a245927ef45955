// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "synthforge/noise.hpp"

namespace sf = synthforge;

TEST(Perlin, ZeroOnIntegerLattice) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> coord(-5000, 5000);
  for (int i = 0; i < 1000; ++i) {
    const double x = coord(rng);
    const double y = coord(rng);
    ASSERT_EQ(sf::perlin2(x, y, rng()), 0.0);
  }
}

TEST(Perlin, BoundedContinuousAndSeeded) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-100, 100);
  double max_abs = 0;
  for (int i = 0; i < 20000; ++i) {
    const double x = u(rng), y = u(rng);
    const double v = sf::perlin2(x, y, 9);
    max_abs = std::max(max_abs, std::abs(v));
    ASSERT_NEAR(v, sf::perlin2(x + 1e-7, y, 9), 1e-5);
  }
  EXPECT_LE(max_abs, 1.0);
  EXPECT_GT(max_abs, 0.3);
  EXPECT_NE(sf::perlin2(0.3, 0.7, 1), sf::perlin2(0.3, 0.7, 2));
}

TEST(Fbm, NormalizedIntoUnitInterval) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  sf::NoiseParams p{8, 0.9, 2.0, 6.0, 5};
  for (int i = 0; i < 100000; ++i) {
    const double v = sf::fbm2(u(rng), u(rng), p);
    ASSERT_GE(v, -1.0);
    ASSERT_LE(v, 1.0);
  }
}

TEST(Fbm, SingleOctaveEqualsPerlin) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 500; ++i) {
    const sf::NoiseParams p{1, 0.5, 2.0, 1.0 + 20 * u(rng), rng()};
    const double x = u(rng), y = u(rng);
    ASSERT_NEAR(sf::fbm2(x, y, p), sf::perlin2(x * p.base_frequency, y * p.base_frequency, p.seed), 1e-12);
  }
}

TEST(NoiseParams, ValidationNamesField) {
  sf::NoiseParams p;
  p.octaves = 0;
  EXPECT_THROW(p.validate(), sf::ConfigError);
  p = {};
  p.octaves = 33;
  EXPECT_THROW(p.validate(), sf::ConfigError);
  p = {};
  p.persistence = 0;
  EXPECT_THROW(p.validate(), sf::ConfigError);
  p = {};
  p.lacunarity = 0.5;
  EXPECT_THROW(p.validate(), sf::ConfigError);
  p = {};
  p.base_frequency = -1;
  try {
    p.validate();
    FAIL();
  } catch (const sf::ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("base_frequency"), std::string::npos);
  }
}

TEST(NoiseField, WindowMatchesFullField) {
  const sf::NoiseParams p{4, 0.5, 2.0, 5.0, 77};
  const auto full = sf::noise_field(64, 48, p);
  const auto win = sf::noise_field_window(64, 10, 7, 20, 15, p);
  for (int y = 0; y < 15; ++y) {
    for (int x = 0; x < 20; ++x) ASSERT_EQ(win.at(x, y), full.at(x + 10, y + 7));
  }
  EXPECT_EQ(full.at(3, 4), sf::fbm2(3.5 / 64, 4.5 / 64, p));
}

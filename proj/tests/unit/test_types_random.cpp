// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "synthforge/random.hpp"
#include "synthforge/types.hpp"

namespace sf = synthforge;

TEST(ClassNames, RoundTripAllClasses) {
  for (std::size_t i = 0; i < sf::kNumClasses; ++i) {
    const auto id = static_cast<sf::ClassId>(i);
    const auto back = sf::class_from_name(sf::class_name(id));
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(*back, id);
  }
  EXPECT_FALSE(sf::class_from_name("crack").has_value());
  EXPECT_FALSE(sf::class_from_name("").has_value());
  EXPECT_EQ(sf::foreground_classes().size(), sf::kNumForegroundClasses);
  EXPECT_EQ(sf::foreground_classes().front(), sf::ClassId::Crack);
}

TEST(MaskSet, RejectsMismatchAndBackground) {
  sf::MaskSet m(4, 4);
  EXPECT_THROW(m.put(sf::LabelMask(5, 4)), sf::Error);
  EXPECT_THROW(m.put(sf::LabelMask(4, 4, sf::ClassId::Background)), sf::Error);
  sf::LabelMask a(4, 4, sf::ClassId::Rust);
  a.set(1, 1);
  m.merge(a);
  sf::LabelMask b(4, 4, sf::ClassId::Rust);
  b.set(2, 2);
  m.merge(b);
  EXPECT_EQ(m.get(sf::ClassId::Rust).popcount(), 2u);
  EXPECT_TRUE(m.get(sf::ClassId::Crack).empty());
  EXPECT_EQ(m.union_all().popcount(), 2u);
}

TEST(Seeds, DeriveIsDeterministicAndSpreads) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const auto s = sf::derive_seed({42, i});
    EXPECT_EQ(s, sf::derive_seed({42, i}));
    seen.insert(s);
  }
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_NE(sf::derive_seed({1, 0}), sf::derive_seed({0, 1}));
  EXPECT_NE(sf::substream(7, 1), sf::substream(7, 2));
}

TEST(Rng, UniformIntInclusiveRange) {
  sf::Rng rng(3);
  std::set<std::int64_t> hits;
  for (int i = 0; i < 2000; ++i) {
    const auto v = rng.uniform_int(-2, 2);
    ASSERT_GE(v, -2);
    ASSERT_LE(v, 2);
    hits.insert(v);
  }
  EXPECT_EQ(hits.size(), 5u);
}

TEST(Rng, MomentsRoughlyRight) {
  sf::Rng rng(11);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0, sp = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
    sp += static_cast<double>(rng.poisson(4.0));
  }
  EXPECT_NEAR(su / n, 0.5, 0.01);
  EXPECT_NEAR(sn / n, 0.0, 0.01);
  EXPECT_NEAR(sn2 / n, 1.0, 0.02);
  EXPECT_NEAR(sp / n, 4.0, 0.05);
}

TEST(Rng, SameSeedSameStream) {
  sf::Rng a(99), b(99);
  for (int i = 0; i < 100; ++i) {
    ASSERT_EQ(a.next(), b.next());
    ASSERT_EQ(a.normal(), b.normal());
  }
}

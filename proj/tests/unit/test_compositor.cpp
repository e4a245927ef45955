// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <iostream>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "synthforge/compositor.hpp"
#include "synthforge/dataset.hpp"
#include "synthforge/raster.hpp"
#include "toy_data.hpp"

namespace sf = synthforge;
namespace st = synthforge::testing;

namespace {

sf::ClassStats toy_stats() {
  // Three target classes sit below the mean (4000 px, 40 shapes).
  const std::array<std::pair<std::int64_t, std::int64_t>, 7> counts = {{
      {1000, 10}, {2000, 20}, {3000, 30}, {9000, 90}, {4000, 40}, {5000, 50}, {4000, 40},
  }};
  sf::ClassStats s;
  for (std::size_t i = 0; i < 7; ++i) {
    s[sf::kTargetClasses[i]].pixel_count = counts[i].first;
    s[sf::kTargetClasses[i]].shape_count = counts[i].second;
  }
  return s;
}

std::map<sf::ClassId, sf::ClassYield> flat_yields(double px, double shapes) {
  std::map<sf::ClassId, sf::ClassYield> y;
  for (auto c : sf::kTargetClasses) y[c] = {px, shapes};
  return y;
}

}  // namespace

TEST(Apportion, SumsToNOnRandomDemands) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> len(1, 12), total(0, 5000);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> d(static_cast<std::size_t>(len(rng)));
    for (auto& v : d) v = u(rng) < 0.2 ? 0.0 : u(rng) * std::pow(10.0, 6 * u(rng));
    const std::int64_t n = total(rng);
    const auto a = sf::apportion(d, n);
    ASSERT_EQ(std::accumulate(a.begin(), a.end(), std::int64_t{0}), n);
    const double sum = std::accumulate(d.begin(), d.end(), 0.0);
    for (std::size_t i = 0; i < d.size(); ++i) {
      ASSERT_GE(a[i], 0);
      if (sum > 0) {
        const double q = n * d[i] / sum;
        ASSERT_LE(std::abs(static_cast<double>(a[i]) - q), 1.0 + 1e-9);  // quota property
        if (d[i] == 0.0) {
          ASSERT_EQ(a[i], 0);
        }
      }
    }
  }
}

TEST(Apportion, HandExamplesAndTies) {
  EXPECT_EQ(sf::apportion({1, 1, 1}, 4), (std::vector<std::int64_t>{2, 1, 1}));
  EXPECT_EQ(sf::apportion({0, 0}, 3), (std::vector<std::int64_t>{2, 1}));
  EXPECT_EQ(sf::apportion({10.5, 7, 3.5}, 10), (std::vector<std::int64_t>{5, 3, 2}));
  EXPECT_EQ(sf::apportion({5, 0, 5}, 3), (std::vector<std::int64_t>{2, 0, 1}));
  EXPECT_THROW(sf::apportion({1, -1}, 3), sf::ConfigError);
  EXPECT_THROW(sf::apportion({1}, -1), sf::ConfigError);
}

// Largest remainder is not house- or population-monotone in general, so
// violations are counted and reported rather than asserted.
TEST(Apportion, MonotonicityViolationsAreLogged) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  int demand_violations = 0, house_violations = 0;
  for (int t = 0; t < 2000; ++t) {
    std::vector<double> d(7);
    for (auto& v : d) v = u(rng);
    const std::int64_t n = 7 + static_cast<std::int64_t>(rng() % 60);
    const auto base = sf::apportion(d, n);
    const auto more = sf::apportion(d, n + 1);
    for (std::size_t i = 0; i < d.size(); ++i) house_violations += more[i] < base[i];
    auto bumped = d;
    const std::size_t k = rng() % d.size();
    bumped[k] *= 1.0 + u(rng) / 10.0;
    demand_violations += sf::apportion(bumped, n)[k] < base[k];
  }
  RecordProperty("demand_monotonicity_violations", demand_violations);
  RecordProperty("house_monotonicity_violations", house_violations);
  std::cout << "apportion monotonicity violations: demand " << demand_violations << ", house " << house_violations
            << " of 2000 trials\n";
  SUCCEED();
}

TEST(Allocation, TwoEstimateDemandMatchesHandComputation) {
  const auto plan = sf::plan_allocation(toy_stats(), 42, flat_yields(500, 2));
  EXPECT_DOUBLE_EQ(plan.mean_pixels, 4000);
  EXPECT_DOUBLE_EQ(plan.mean_shapes, 40);
  // Efflorescence: (3000/500 + 30/2) / 2 = 10.5
  EXPECT_DOUBLE_EQ(plan.entries[0].pixel_estimate, 6);
  EXPECT_DOUBLE_EQ(plan.entries[0].shape_estimate, 15);
  EXPECT_DOUBLE_EQ(plan.entries[0].demand, 10.5);
  EXPECT_DOUBLE_EQ(plan.entries[1].demand, 7);
  EXPECT_DOUBLE_EQ(plan.entries[2].demand, 3.5);
  for (std::size_t i = 3; i < 7; ++i) EXPECT_EQ(plan.entries[i].demand, 0.0);
  EXPECT_EQ(plan.allocated(sf::ClassId::Efflorescence), 21);
  EXPECT_EQ(plan.allocated(sf::ClassId::Rockpocket), 14);
  EXPECT_EQ(plan.allocated(sf::ClassId::Hollowareas), 7);
  EXPECT_EQ(plan.allocated(sf::ClassId::Spalling), 0);
  const auto j = plan.to_json();
  EXPECT_EQ(j["total"], 42);
}

TEST(Allocation, ErrorsAndScope) {
  EXPECT_THROW(sf::plan_allocation(toy_stats(), 0, flat_yields(1, 1)), sf::ConfigError);
  EXPECT_THROW(sf::plan_allocation(toy_stats(), 2, flat_yields(1, 1)), sf::ConfigError);
  auto y = flat_yields(500, 2);
  y.erase(sf::ClassId::Rockpocket);
  EXPECT_THROW(sf::plan_allocation(toy_stats(), 20, y), sf::ConfigError);
  auto stats = toy_stats();
  stats[sf::ClassId::Crack].pixel_count = 1'000'000;
  stats[sf::ClassId::Crack].shape_count = 1000;
  const auto all = sf::plan_allocation(stats, 100, flat_yields(500, 2), sf::AverageScope::AllForeground);
  EXPECT_GT(all.mean_pixels, 4000 * 7 / 19.0);
  EXPECT_EQ(std::accumulate(all.entries.begin(), all.entries.end(), std::int64_t{0},
                            [](std::int64_t s, const auto& e) { return s + e.allocated; }),
            100);
}

TEST(Jobs, WeatheredIsCeilHalfPerClass) {
  for (std::int64_t a = 1; a <= 5; ++a) {
    sf::AllocationPlan plan;
    plan.total = a + 3;
    plan.entries = {{sf::ClassId::Rust, 0, 0, 1, a}, {sf::ClassId::Wetspot, 0, 0, 1, 3}};
    const auto jobs = sf::daclonsynth_jobs(plan);
    ASSERT_EQ(static_cast<std::int64_t>(jobs.size()), a + 3);
    std::int64_t w = 0;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      EXPECT_EQ(jobs[i].global_index, i);
      if (jobs[i].cls == sf::ClassId::Rust) w += jobs[i].weathered;
    }
    EXPECT_EQ(w, (a + 1) / 2);
  }
}

TEST(Stats, AccumulatesUnionPixelsAtResolution) {
  sf::Annotation a{"x.png", 100, 100, {}};
  a.shapes.push_back({sf::ClassId::Rust, {{{0, 0}, {50, 0}, {50, 50}, {0, 50}}}});
  a.shapes.push_back({sf::ClassId::Rust, {{{25, 25}, {75, 25}, {75, 75}, {25, 75}}}});
  sf::ClassStats s;
  s.resolution = 50;
  sf::accumulate_class_stats(s, a);
  EXPECT_EQ(s[sf::ClassId::Rust].shape_count, 2);
  EXPECT_EQ(s[sf::ClassId::Rust].image_count, 1);
  auto u = st::oracle_rasterize(sf::scale_polygon(a.shapes[0].polygon, 0.5, 0.5), 50, 50);
  u |= st::oracle_rasterize(sf::scale_polygon(a.shapes[1].polygon, 0.5, 0.5), 50, 50);
  EXPECT_EQ(s[sf::ClassId::Rust].pixel_count, static_cast<std::int64_t>(u.popcount()));
  EXPECT_LT(s[sf::ClassId::Rust].pixel_count, 2 * 625);
}

TEST(Donors, ExposedRebarsCarryHostAndPasteMaskCoversIt) {
  sf::ImageBuffer img(120, 120, 150);
  sf::Annotation a{"x.png", 120, 120, {}};
  const sf::Polygon host{{{30, 30}, {80, 30}, {80, 80}, {30, 80}}};
  const sf::Polygon bar{{{45, 50}, {65, 50}, {65, 54}, {45, 54}}};
  a.shapes.push_back({sf::ClassId::Spalling, host});
  a.shapes.push_back({sf::ClassId::ExposedRebars, bar});
  a.shapes.push_back({sf::ClassId::Rust, {{{2, 2}, {8, 2}, {8, 8}}}});  // far away, not carried
  const auto crops = sf::extract_donor_crops(a, img, sf::ClassId::ExposedRebars);
  ASSERT_EQ(crops.size(), 1u);
  const auto& c = crops[0];
  EXPECT_LE(c.source_rect.x0, 30);
  EXPECT_GE(c.source_rect.x1, 80);
  bool has_host = false, has_primary = false;
  for (const auto& s : c.shapes) {
    has_host |= s.label == sf::ClassId::Spalling;
    has_primary |= s.primary && s.label == sf::ClassId::ExposedRebars;
    EXPECT_NE(s.label, sf::ClassId::Rust);
  }
  EXPECT_TRUE(has_host);
  EXPECT_TRUE(has_primary);
  const auto host_local = sf::rasterize_polygon(
      sf::translate_polygon(host, -c.source_rect.x0, -c.source_rect.y0), c.patch.width, c.patch.height);
  for (std::size_t i = 0; i < host_local.bits.size(); ++i) {
    if (host_local.bits[i]) {
      ASSERT_TRUE(c.paste_mask.bits[i]);
    }
  }
}

TEST(Donors, DilatedClassesPaddedMore) {
  sf::ImageBuffer img(200, 200, 150);
  sf::Annotation a{"x.png", 200, 200, {}};
  const sf::Polygon p{{{80, 80}, {120, 80}, {120, 120}, {80, 120}}};
  a.shapes.push_back({sf::ClassId::Rust, p});
  a.shapes.push_back({sf::ClassId::Spalling, p});
  const auto rust = sf::extract_donor_crops(a, img, sf::ClassId::Rust);
  const auto spal = sf::extract_donor_crops(a, img, sf::ClassId::Spalling);
  ASSERT_EQ(rust.size(), 1u);
  ASSERT_EQ(spal.size(), 1u);
  EXPECT_EQ(rust[0].patch.width, 40 + 2 * sf::kCropPadding);
  EXPECT_EQ(spal[0].patch.width, 40 + 2 * sf::kDilatedCropPadding);
  EXPECT_GT(spal[0].paste_mask.popcount(), sf::rasterize_polygon(p, 200, 200).popcount());
  EXPECT_TRUE(sf::dilated_on_paste(sf::ClassId::Spalling));
  EXPECT_FALSE(sf::dilated_on_paste(sf::ClassId::Rust));
  EXPECT_FALSE(sf::dilated_on_paste(sf::ClassId::ExposedRebars));
}

TEST(Rotation, CanvasSizesAndIdentity) {
  sf::ImageBuffer img(100, 100, 150);
  sf::Annotation a{"x.png", 100, 100, {{sf::ClassId::Rust, {{{30, 40}, {70, 40}, {70, 60}, {30, 60}}}}}};
  const auto c = sf::extract_donor_crops(a, img, sf::ClassId::Rust).at(0);
  const auto r0 = sf::rotate_crop(c, 0);
  EXPECT_EQ(r0.width, c.patch.width);
  EXPECT_EQ(r0.height, c.patch.height);
  EXPECT_EQ(r0.image, c.patch);
  EXPECT_EQ(r0.mask.bits, c.paste_mask.bits);
  const auto r90 = sf::rotate_crop(c, 90);
  EXPECT_EQ(r90.width, c.patch.height);
  EXPECT_EQ(r90.height, c.patch.width);
  EXPECT_EQ(r90.mask.popcount(), c.paste_mask.popcount());
  const auto r45 = sf::rotate_crop(c, 45);
  const double diag = (c.patch.width + c.patch.height) / std::sqrt(2.0);
  EXPECT_NEAR(r45.width, diag, 1.0);
  for (float al : r45.alpha) {
    ASSERT_GE(al, 0.0f);
    ASSERT_LE(al, 1.0f);
  }
}

TEST(Paste, LabelsLandWhereExpectedAndOversizeThrows) {
  sf::ImageBuffer img(100, 100, 40);
  sf::Annotation a{"x.png", 100, 100, {{sf::ClassId::Rust, {{{30, 40}, {70, 40}, {70, 60}, {30, 60}}}}}};
  const auto c = sf::extract_donor_crops(a, img, sf::ClassId::Rust).at(0);
  const sf::ImageBuffer surface(120, 120, 200);
  const auto r = sf::paste(c, surface, 0, 10, 20);
  const auto rust = r.masks.get(sf::ClassId::Rust);
  EXPECT_EQ(rust.popcount(), 40u * 20u);
  EXPECT_TRUE(rust.get(10 + sf::kCropPadding, 20 + sf::kCropPadding));
  EXPECT_LT(r.image.at(30, 35, 0), 200);  // donor pixels are dark
  EXPECT_EQ(r.image.at(0, 0, 0), 200);
  EXPECT_EQ(r.shapes.size(), 1u);
  EXPECT_THROW(sf::paste(c, sf::ImageBuffer(30, 30), 0, 0, 0), sf::DataError);
  EXPECT_THROW(sf::paste(c, surface, 0, 100, 0), sf::DataError);
}

TEST(Daclonsynth, SampleIsDeterministicAndCarriesTarget) {
  st::TempDir tmp;
  st::write_toy_dataset(tmp.path(), {.images = 10, .width = 128, .height = 128, .seed = 2});
  const auto donors = sf::extract_donor_crops(tmp.path(), sf::ClassId::Efflorescence, 128);
  ASSERT_FALSE(donors.empty());
  const sf::DaclonsynthJob job{sf::ClassId::Efflorescence, 0, 3, true};
  const auto s = sf::gen_daclonsynth_sample(job, donors, 9, 128, 128);
  const auto again = sf::gen_daclonsynth_sample(job, donors, 9, 128, 128);
  EXPECT_EQ(s.image, again.image);
  EXPECT_EQ(s.masks, again.masks);
  EXPECT_FALSE(s.masks.get(sf::ClassId::Efflorescence).empty());
  EXPECT_TRUE(s.weathered);
  EXPECT_EQ(s.extra["targetClass"], "Efflorescence");
  // Surface labels never survive under the pasted patch.
  const auto eff = s.masks.get(sf::ClassId::Efflorescence);
  const auto weather = s.masks.get(sf::ClassId::Weathering);
  std::size_t overlap = 0;
  for (std::size_t i = 0; i < eff.bits.size(); ++i) overlap += eff.bits[i] && weather.bits[i];
  EXPECT_EQ(overlap, 0u);
  EXPECT_THROW(sf::gen_daclonsynth_sample(job, {}, 9, 128, 128), sf::Error);
}

TEST(Daclonsynth, YieldMeasured) {
  st::TempDir tmp;
  st::write_toy_dataset(tmp.path(), {.images = 10, .width = 128, .height = 128, .seed = 2});
  const auto donors = sf::extract_donor_crops(tmp.path(), sf::ClassId::Spalling, 128);
  const auto y = sf::measure_yield(donors);
  EXPECT_GT(y.pixels_per_sample, 0);
  EXPECT_GE(y.shapes_per_sample, 1.0);
  EXPECT_EQ(sf::measure_yield({}).pixels_per_sample, 0.0);
}

// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "synthforge/finecrack.hpp"
#include "synthforge/noise.hpp"
#include "synthforge/raster.hpp"
#include "synthforge/texture.hpp"

namespace sf = synthforge;

namespace {

sf::Polygon star(int vertices, double size) {
  sf::Polygon p;
  for (int i = 0; i < vertices; ++i) {
    const double a = 6.283185307179586 * i / vertices;
    const double r = size * (i % 2 ? 0.2 : 0.45);
    p.points.push_back({size / 2 + r * std::cos(a), size / 2 + r * std::sin(a)});
  }
  return p;
}

void BM_Rasterize(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  const auto p = star(64, size);
  for (auto _ : state) benchmark::DoNotOptimize(sf::rasterize_polygon(p, size, size));
  state.SetItemsProcessed(state.iterations() * size * size);
}
BENCHMARK(BM_Rasterize)->Arg(256)->Arg(512)->Arg(1024);

void BM_Dilate30(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  const auto m = sf::rasterize_polygon(star(32, size), size, size);
  for (auto _ : state) benchmark::DoNotOptimize(sf::dilate(m, 30, 30));
  state.SetItemsProcessed(state.iterations() * size * size);
}
BENCHMARK(BM_Dilate30)->Arg(256)->Arg(512);

void BM_NoiseField(benchmark::State& state) {
  const sf::NoiseParams p{static_cast<int>(state.range(0)), 0.6, 2.0, 16.0, 1};
  for (auto _ : state) benchmark::DoNotOptimize(sf::noise_field(512, 512, p));
  state.SetItemsProcessed(state.iterations() * 512 * 512);
}
BENCHMARK(BM_NoiseField)->Arg(1)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_MultiOtsu(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z(0, 1);
  sf::Histogram h{};
  for (int i = 0; i < 100000; ++i) {
    const double v = (i % 3 == 0 ? 60 : i % 3 == 1 ? 140 : 210) + 15 * z(rng);
    h[static_cast<std::size_t>(std::clamp(v, 0.0, 255.0))]++;
  }
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sf::multi_otsu(h, k));
}
BENCHMARK(BM_MultiOtsu)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMicrosecond);

void BM_SynthSurface(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sf::random_surface(seed++, true, size, size));
}
BENCHMARK(BM_SynthSurface)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

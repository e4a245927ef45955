// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "synthforge/texture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "synthforge/imgops.hpp"
#include "synthforge/random.hpp"

namespace synthforge {

namespace {

enum Stream : std::uint64_t {
  kGrain = 1,
  kBlotch = 2,
  kTint = 3,
  kWeatherField = 4,
  kWeatherColor = 5,
  kPores = 6,
  kParams = 100,
  kSurfaceSeed = 101,
};

void stamp_pores(const SurfaceParams& p, std::vector<double>& rgb, Surface& out) {
  const int w = p.width;
  const int h = p.height;
  const auto target = static_cast<int>(std::lround(p.pore_density * w * h / 1000.0));
  if (target <= 0) return;
  Rng rng(substream(p.seed, kPores));
  std::vector<std::pair<int, int>> footprint;
  int placed = 0;
  for (int attempt = 0; attempt < target * 30 && placed < target; ++attempt) {
    const int cx = static_cast<int>(rng.uniform_int(0, w - 1));
    const int cy = static_cast<int>(rng.uniform_int(0, h - 1));
    const double rx = rng.uniform(1.5, 3.0);
    const double ry = rng.uniform(1.5, 3.0);
    const double darken = rng.uniform(0.45, 0.65);
    footprint.clear();
    bool ok = true;
    for (int dy = -3; dy <= 3 && ok; ++dy) {
      for (int dx = -3; dx <= 3; ++dx) {
        const double e = (dx * dx) / (rx * rx) + (dy * dy) / (ry * ry);
        if (e > 1.0) continue;
        const int x = cx + dx;
        const int y = cy + dy;
        if (x < 0 || y < 0 || x >= w || y >= h) continue;
        // Reject when this pixel or any 8-neighbor already belongs to a pore.
        for (int ny = y - 1; ny <= y + 1 && ok; ++ny) {
          for (int nx = x - 1; nx <= x + 1; ++nx) {
            if (nx >= 0 && ny >= 0 && nx < w && ny < h && out.pore_mask.get(nx, ny)) {
              ok = false;
              break;
            }
          }
        }
        if (!ok) break;
        footprint.emplace_back(x, y);
      }
    }
    if (!ok || footprint.empty()) continue;
    for (const auto& [x, y] : footprint) {
      out.pore_mask.set(x, y);
      const std::size_t i = (static_cast<std::size_t>(y) * w + x) * 3;
      for (int c = 0; c < 3; ++c) rgb[i + c] *= darken;
    }
    ++placed;
  }
  out.pore_count = placed;
}

}  // namespace

void SurfaceParams::validate() const {
  if (width < 1 || height < 1) throw ConfigError("surface dimensions must be >= 1");
  if (base_gray < 0.0 || base_gray > 1.0) throw ConfigError("base_gray must be in [0, 1]");
  if (grain_amp < 0.0 || grain_amp > 0.5) throw ConfigError("grain_amp must be in [0, 0.5]");
  if (blotch_amp < 0.0 || blotch_amp > 0.5) throw ConfigError("blotch_amp must be in [0, 0.5]");
  if (pore_density < 0.0) throw ConfigError("pore_density must be >= 0");
  if (weathering_coverage < 0.0 || weathering_coverage > 1.0) throw ConfigError("weathering_coverage must be in [0, 1]");
}

ScalarField weathering_field(const SurfaceParams& p) {
  NoiseParams np{4, 0.5, 2.0, 3.0, substream(p.seed, kWeatherField)};
  return noise_field(p.width, p.height, np);
}

double weathering_threshold(const ScalarField& field, double coverage) {
  std::vector<double> sorted = field.values;
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<std::int64_t>(sorted.size());
  const auto k = std::clamp<std::int64_t>(std::llround(coverage * static_cast<double>(n)), 0, n);
  if (k == 0) return sorted.back();
  if (k == n) return -std::numeric_limits<double>::infinity();
  return sorted[static_cast<std::size_t>(n - k - 1)];
}

Surface synth_surface(const SurfaceParams& p) {
  p.validate();
  const int w = p.width;
  const int h = p.height;
  Surface out;
  out.params = p;
  out.weathering_mask = LabelMask(w, h, ClassId::Weathering);
  out.pore_mask = LabelMask(w, h, ClassId::Cavity);

  std::vector<double> rgb(static_cast<std::size_t>(w) * h * 3, p.base_gray);
  const double modulation = p.grain_amp + p.blotch_amp;
  if (modulation > 0.0) {
    const NoiseParams grain{3, 0.5, 2.0, 96.0, substream(p.seed, kGrain)};
    const NoiseParams blotch{4, 0.55, 2.0, 4.0, substream(p.seed, kBlotch)};
    Rng tint_rng(substream(p.seed, kTint));
    double tint[3];
    for (double& t : tint) t = tint_rng.uniform(-1.0, 1.0) * 0.25 * modulation;
    const double inv = 1.0 / w;
    for (int y = 0; y < h; ++y) {
      const double ny = (y + 0.5) * inv;
      for (int x = 0; x < w; ++x) {
        const double nx = (x + 0.5) * inv;
        double g = p.base_gray;
        if (p.grain_amp > 0.0) g += p.grain_amp * fbm2(nx, ny, grain);
        if (p.blotch_amp > 0.0) g += p.blotch_amp * fbm2(nx, ny, blotch);
        const std::size_t i = (static_cast<std::size_t>(y) * w + x) * 3;
        for (int c = 0; c < 3; ++c) rgb[i + c] = g + tint[c];
      }
    }
  }

  if (p.weathered && p.weathering_coverage > 0.0) {
    const ScalarField field = weathering_field(p);
    const double thr = weathering_threshold(field, p.weathering_coverage);
    Rng color_rng(substream(p.seed, kWeatherColor));
    const bool moss = color_rng.bernoulli(0.5);
    const double target[3] = {moss ? 0.30 : 0.42, moss ? 0.38 : 0.35, moss ? 0.22 : 0.26};
    const double strength = color_rng.uniform(0.35, 0.6);
    const double darken = color_rng.uniform(0.78, 0.9);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double v = field.at(x, y);
        if (!(v > thr)) continue;
        out.weathering_mask.set(x, y);
        // Stronger tint deeper inside the weathered region.
        const double depth = std::min(1.0, (v - thr) / 0.08);
        const double s = strength * (0.6 + 0.4 * depth);
        const std::size_t i = (static_cast<std::size_t>(y) * w + x) * 3;
        for (int c = 0; c < 3; ++c) rgb[i + c] = (rgb[i + c] * (1.0 - s) + target[c] * s) * darken;
      }
    }
  }

  stamp_pores(p, rgb, out);

  out.image = ImageBuffer(w, h);
  for (std::size_t i = 0; i < rgb.size(); ++i) out.image.data[i] = clamp_u8(255.0 * std::clamp(rgb[i], 0.0, 1.0));
  return out;
}

SurfaceParams random_surface_params(std::uint64_t seed, bool weathered, int width, int height) {
  Rng rng(substream(seed, kParams));
  SurfaceParams p;
  p.width = width;
  p.height = height;
  p.base_gray = rng.uniform(0.45, 0.75);
  p.grain_amp = rng.uniform(0.02, 0.08);
  p.blotch_amp = rng.uniform(0.03, 0.12);
  p.pore_density = rng.uniform(0.05, 0.4);
  p.weathering_coverage = rng.uniform(0.1, 0.5);
  p.weathered = weathered;
  p.seed = substream(seed, kSurfaceSeed);
  return p;
}

Surface random_surface(std::uint64_t seed, bool weathered, int width, int height) {
  return synth_surface(random_surface_params(seed, weathered, width, height));
}

}  // namespace synthforge

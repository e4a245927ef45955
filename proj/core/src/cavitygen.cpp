// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "synthforge/cavitygen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "synthforge/imgops.hpp"
#include "synthforge/raster.hpp"
#include "synthforge/texture.hpp"

namespace synthforge {

namespace {

enum Stream : std::uint64_t {
  kSurface = 1,
  kLargeCap = 2,
  kParamsBase = 16,
};

}  // namespace

void CavityParams::validate() const {
  if (layers.empty()) throw ConfigError("cavity map needs at least one noise layer");
  for (const auto& l : layers) {
    l.validate();
    if (l.octaves < 2) throw ConfigError("cavity layer octaves must be in [2, 32]");
    if (l.persistence < 0.6 || l.persistence > 0.9) throw ConfigError("cavity layer persistence must be in [0.6, 0.9]");
    if (l.lacunarity != 1.5 && l.lacunarity != 2.0) throw ConfigError("cavity layer lacunarity must be 1.5 or 2");
  }
  if (!(threshold > -1.0 && threshold <= 1.0)) throw ConfigError("cavity threshold must be in (-1, 1]");
  if (min_area < 1) throw ConfigError("min_area must be >= 1");
  if (depth_scale < 0.0 || depth_scale > 1.0) throw ConfigError("depth_scale must be in [0, 1]");
}

CavityParams sample_cavity_params(std::uint64_t seed) {
  Rng rng(seed);
  CavityParams p;
  const auto n_layers = rng.uniform_int(2, 4);
  for (std::int64_t i = 0; i < n_layers; ++i) {
    NoiseParams l;
    l.octaves = static_cast<int>(rng.uniform_int(2, 32));
    l.persistence = rng.uniform(0.6, 0.9);
    l.lacunarity = rng.bernoulli(0.5) ? 1.5 : 2.0;
    l.base_frequency = rng.uniform(10.0, 36.0);
    l.seed = rng.next();
    p.layers.push_back(l);
  }
  p.threshold = rng.uniform(kCavityThresholdMin, kCavityThresholdMax);
  p.min_area = 6;
  p.depth_scale = rng.uniform(0.3, 0.6);
  p.seed = seed;
  return p;
}

CavityMap gen_cavity_map(int width, int height, const CavityParams& p) {
  p.validate();
  CavityMap out;
  out.field = ScalarField{width, height, std::vector<double>(static_cast<std::size_t>(width) * height, 0.0)};
  for (const auto& layer : p.layers) {
    const ScalarField f = noise_field(width, height, layer);
    for (std::size_t i = 0; i < f.values.size(); ++i) out.field.values[i] += f.values[i];
  }
  const double inv = 1.0 / static_cast<double>(p.layers.size());
  for (auto& v : out.field.values) v *= inv;

  LabelMask raw(width, height, ClassId::Cavity);
  for (std::size_t i = 0; i < raw.bits.size(); ++i) raw.bits[i] = out.field.values[i] > p.threshold ? 1 : 0;
  out.mask = remove_small_components(raw, p.min_area);

  out.depth = ScalarField{width, height, std::vector<double>(out.field.values.size(), 0.0)};
  for (std::size_t i = 0; i < out.mask.bits.size(); ++i) {
    if (out.mask.bits[i]) out.depth.values[i] = std::max(0.0, out.field.values[i] - p.threshold);
  }
  return out;
}

ImageBuffer render_cavities(const ImageBuffer& surface, const LabelMask& mask, const ScalarField& depth,
                            double depth_scale) {
  if (mask.width != surface.width || mask.height != surface.height || depth.width != surface.width ||
      depth.height != surface.height) {
    throw Error("render_cavities: dimension mismatch");
  }
  double max_depth = 0.0;
  for (std::size_t i = 0; i < mask.bits.size(); ++i) {
    if (mask.bits[i]) max_depth = std::max(max_depth, depth.values[i]);
  }
  ImageBuffer out = surface;
  const int w = surface.width;
  const int h = surface.height;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.get(x, y)) continue;
      const bool rim = !(x + 1 < w && y + 1 < h && mask.get(x + 1, y + 1));
      double factor;
      if (rim) {
        factor = 1.1;
      } else {
        const double nd = max_depth > 0.0 ? depth.at(x, y) / max_depth : 0.0;
        factor = 1.0 - depth_scale * nd;
      }
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = clamp_u8(surface.at(x, y, c) * factor);
    }
  }
  return out;
}

Sample gen_synthcavity_sample(SeedSpec spec, bool weathered, const CavityProfile& profile, int width, int height) {
  const std::uint64_t seed = derive_seed(spec);
  const Surface surface = random_surface(substream(seed, kSurface), weathered, width, height);
  Rng cap_rng(substream(seed, kLargeCap));
  const bool cap_lifted = cap_rng.bernoulli(profile.large_cavity_fraction);

  CavityParams params;
  CavityMap map;
  bool met = false;
  int attempts = 0;
  std::size_t shapes = 0;
  double px_per_shape = 0.0;
  for (int attempt = 0; attempt <= kCavityRetries && !met; ++attempt) {
    params = sample_cavity_params(substream(seed, kParamsBase + static_cast<std::uint64_t>(attempt)));
    map = gen_cavity_map(width, height, params);
    const auto comps = connected_components(map.mask);
    shapes = comps.size();
    px_per_shape = shapes ? static_cast<double>(map.mask.popcount()) / static_cast<double>(shapes) : 0.0;
    met = static_cast<double>(shapes) >= profile.min_shapes_per_sample &&
          (cap_lifted || px_per_shape <= profile.max_pixels_per_shape);
    attempts = attempt + 1;
  }

  Sample s;
  s.image = render_cavities(surface.image, map.mask, map.depth, params.depth_scale);
  s.weathered = weathered;
  if (!met) s.warnings.push_back("cavity_profile_unmet");

  LabelMask cavity = map.mask;
  cavity |= surface.pore_mask;
  // Border-clipped pores can fall below min_area.
  cavity = remove_small_components(cavity, params.min_area);
  s.masks = MaskSet(width, height);
  if (!cavity.empty()) s.masks.put(cavity);
  if (weathered && !surface.weathering_mask.empty()) s.masks.put(surface.weathering_mask);

  s.annotation.image_name = "image.png";
  s.annotation.image_width = width;
  s.annotation.image_height = height;
  for (const auto& c : connected_components(cavity)) {
    const auto& b = c.bbox;
    s.annotation.shapes.push_back({ClassId::Cavity,
                                   Polygon{{{double(b.x0), double(b.y0)},
                                            {double(b.x1), double(b.y0)},
                                            {double(b.x1), double(b.y1)},
                                            {double(b.x0), double(b.y1)}}}});
  }
  s.extra = {{"cavityAttempts", attempts},
             {"cavityShapes", shapes},
             {"cavityPixelsPerShape", px_per_shape},
             {"cavityCapLifted", cap_lifted},
             {"cavityLayers", params.layers.size()},
             {"cavityThreshold", params.threshold}};
  return s;
}

}  // namespace synthforge

// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "synthforge/dataset.hpp"
#include "synthforge/noise.hpp"
#include "synthforge/random.hpp"
#include "synthforge/types.hpp"

namespace synthforge {

struct CavityParams {
  std::vector<NoiseParams> layers;  // octaves [2, 32], persistence [0.6, 0.9], lacunarity 1.5 or 2
  double threshold = 0.1;           // (-1, 1)
  std::size_t min_area = 6;         // px, >= 1
  double depth_scale = 0.45;        // darkening at full depth
  std::uint64_t seed = 0;

  void validate() const;
};

/// Draws 2-4 layers with octaves in [2, 32], persistence in [0.6, 0.9],
/// lacunarity in {1.5, 2} and base frequency in [10, 36] cycles per width;
/// threshold in [kCavityThresholdMin, kCavityThresholdMax]; depth scale
/// in [0.3, 0.6]; min_area = 6.
CavityParams sample_cavity_params(std::uint64_t seed);

inline constexpr double kCavityThresholdMin = 0.14;
inline constexpr double kCavityThresholdMax = 0.24;

struct CavityMap {
  LabelMask mask;      // Cavity
  ScalarField depth;   // (field - threshold) inside the mask, 0 elsewhere
  ScalarField field;   // mean of the layer fields
};

/// field = mean of the layer noise fields; mask = field > threshold with
/// components smaller than min_area removed.
CavityMap gen_cavity_map(int width, int height, const CavityParams& p);

/// Inside the mask: intensity *= 1 - depth_scale * depth / max_depth. Mask
/// pixels whose lower-right neighbor lies outside the mask form the lit rim
/// (light from the top-left) and are brightened by 10% instead.
ImageBuffer render_cavities(const ImageBuffer& surface, const LabelMask& mask, const ScalarField& depth,
                            double depth_scale);

struct CavityProfile {
  double min_shapes_per_sample = 7.0;   // generated cavity components
  double max_pixels_per_shape = 860.0;  // mean over those components
  double large_cavity_fraction = 0.0;   // share of samples with the pixel cap lifted
};

inline constexpr int kCavityRetries = 8;

/// Resamples cavity parameters up to kCavityRetries times until the generated
/// map meets the profile; otherwise keeps the last draw and records the
/// warning "cavity_profile_unmet". Cavity = pores U generated cavities.
Sample gen_synthcavity_sample(SeedSpec seed, bool weathered, const CavityProfile& profile, int width = 512,
                              int height = 512);

}  // namespace synthforge

// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "synthforge/types.hpp"

namespace synthforge {

struct NoiseParams {
  int octaves = 4;            // [1, 32]
  double persistence = 0.5;   // (0, 1]
  double lacunarity = 2.0;    // >= 1
  double base_frequency = 4;  // cycles per image width
  std::uint64_t seed = 0;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Classic 2-D gradient noise with quintic fade. Gradients are eight unit
/// vectors selected by a hash of (lattice cell, seed); the result is scaled by
/// sqrt(2) so the theoretical extremes map to +-1. Exactly zero on integer
/// lattice points.
double perlin2(double x, double y, std::uint64_t seed);

/// Normalized fractal sum:
///   sum_o persistence^o * perlin2(x * f_o, y * f_o, seed ^ o) / sum_o persistence^o
/// with f_o = base_frequency * lacunarity^o.
double fbm2(double x, double y, const NoiseParams& p);

/// Row-major scalar raster.
struct ScalarField {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
  double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
};

/// field(x, y) = fbm2((x + 0.5) / width, (y + 0.5) / width, p): coordinates are
/// normalized by the image width so base_frequency counts cycles per width.
ScalarField noise_field(int width, int height, const NoiseParams& p);

/// A window [x0, x0 + w) x [y0, y0 + h) of the field for a full image of
/// width `full_width`; tiles assemble bit-identically into noise_field.
ScalarField noise_field_window(int full_width, int x0, int y0, int w, int h, const NoiseParams& p);

}  // namespace synthforge

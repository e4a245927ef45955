// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "synthforge/noise.hpp"
#include "synthforge/types.hpp"

namespace synthforge {

struct SurfaceParams {
  int width = 512;
  int height = 512;
  double base_gray = 0.6;      // [0, 1]
  double grain_amp = 0.05;     // [0, 0.5]
  double blotch_amp = 0.08;    // [0, 0.5]
  double pore_density = 0.2;   // pores per 1000 pixels
  bool weathered = false;
  double weathering_coverage = 0.3;  // [0, 1]
  std::uint64_t seed = 0;

  void validate() const;
};

struct Surface {
  SurfaceParams params;
  ImageBuffer image;
  LabelMask weathering_mask;  // Weathering
  LabelMask pore_mask;        // Cavity
  int pore_count = 0;
};

/// Layered-noise concrete albedo with optional weathering overlay and
/// stamped pores.
///
///   gray   = base_gray + grain_amp * fbm(high freq) + blotch_amp * fbm(low freq)
///   tint_c = jitter_c * 0.25 * (grain_amp + blotch_amp),  jitter_c in [-1, 1]
///
/// Weathering selects the `weathering_coverage` fraction of pixels with the
/// highest value of a low-frequency field (see weathering_field) and pulls
/// them toward a moss or dirt color while darkening. Pores are ellipses with
/// radii in [1, 3] px placed by rejection so no two pores touch under
/// 8-connectivity; each multiplies intensity by a factor in [0.45, 0.65].
Surface synth_surface(const SurfaceParams& p);

/// Draws base_gray 0.45-0.75, grain 0.02-0.08, blotch 0.03-0.12,
/// pore density 0.05-0.4 /kpx and coverage 0.1-0.5.
SurfaceParams random_surface_params(std::uint64_t seed, bool weathered, int width = 512, int height = 512);
Surface random_surface(std::uint64_t seed, bool weathered, int width = 512, int height = 512);

/// The field thresholded to form the weathering mask.
ScalarField weathering_field(const SurfaceParams& p);
/// Threshold t such that exactly round(coverage * n) values exceed t (absent
/// ties). The weathering mask is {field > t}.
double weathering_threshold(const ScalarField& field, double coverage);

}  // namespace synthforge

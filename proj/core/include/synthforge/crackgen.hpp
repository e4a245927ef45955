// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "synthforge/dataset.hpp"
#include "synthforge/random.hpp"
#include "synthforge/texture.hpp"
#include "synthforge/types.hpp"

namespace synthforge {

struct CrackParams {
  int n_cracks = 2;            // >= 1 (0 only in calibrated schedules, see below)
  double root_width = 3.0;     // [1, 8] px
  double width_taper = 0.6;    // (0, 1]
  double branch_prob = 0.12;   // [0, 0.5] per main-path segment
  double roughness = 0.12;     // midpoint displacement / segment length
  int recursion_depth = 6;     // [3, 8]
  std::uint64_t seed = 0;

  void validate() const;
};

struct CrackPolyline {
  std::vector<Point> points;
  std::vector<double> widths;  // per point, px
  double darkness = 0.35;      // intensity multiplier at full coverage
  int crack_index = 0;         // which crack this belongs to
  bool branch = false;
};

/// Fractal crack model: each crack is a main path from a random border point
/// refined by recursive midpoint displacement (recursion_depth levels, so
/// 2^depth + 1 points; displacement = roughness * segment length along the
/// segment normal), plus branches spawned per main-path segment with
/// probability branch_prob. Widths taper linearly to 0.5 px at the tip;
/// branches start at width_taper times the parent width.
///
/// Random draws never depend on widths, so two calls differing only in
/// root_width produce the same geometry.
std::vector<CrackPolyline> gen_crack_polyline(const CrackParams& p, int width, int height);

/// Stroke narrower than this still darkens (and labels) every pixel its
/// centerline crosses.
inline constexpr double kMinStrokeWidth = 1.4143;

/// Per-pixel stroke coverage: max over segments of
/// clamp(w_eff / 2 - distance + 0.5, 0, 1), w_eff = max(width, kMinStrokeWidth).
std::vector<float> crack_coverage(const std::vector<CrackPolyline>& polylines, int width, int height,
                                  std::vector<float>* darkness = nullptr);

struct RenderedCracks {
  ImageBuffer image;
  LabelMask mask;  // Crack: coverage > 0.5
};

/// Multiplies intensity by 1 - coverage * (1 - darkness).
RenderedCracks render_cracks(const ImageBuffer& surface, const std::vector<CrackPolyline>& polylines);

/// Mask only, without a surface.
LabelMask crack_mask(const std::vector<CrackPolyline>& polylines, int width, int height);

struct CrackBudget {
  std::int64_t target_total_pixels = 0;
  std::int64_t target_total_shapes = 0;
  std::int64_t n_samples = 0;
};

struct CrackSchedule {
  std::vector<CrackParams> samples;  // seeds are filled in per sample at generation
  double root_width = 0.0;
  double pilot_pixels_per_shape = 0.0;
};

/// n_cracks: floor(shapes / samples) each, plus one for the first
/// (shapes mod samples) indices, so shapes sum exactly. root_width is found by
/// bisection on a 32-sample pilot so the extrapolated total lies within the
/// target. Throws ConfigError when the budget needs a root width outside
/// [1, 8] px or fewer shapes than samples.
CrackSchedule calibrate_crack_set(const CrackBudget& b, const CrackParams& base, int width, int height,
                                  std::uint64_t seed);

/// Crack-count split alone (no pilot).
std::vector<int> distribute_shapes(std::int64_t shapes, std::int64_t samples);

/// random_surface + gen_crack_polyline + render_cracks. The MaskSet holds the
/// fine Crack mask, surface pores as Cavity, and Weathering when weathered;
/// annotation polygons are padded convex hulls of each crack.
Sample gen_synthcrack_sample(SeedSpec seed, CrackParams params, bool weathered, int width = 512, int height = 512);

}  // namespace synthforge

// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "synthforge/types.hpp"

namespace synthforge {

/// Even-odd fill sampled at pixel centers (x + 0.5, y + 0.5). Degenerate
/// polygons produce an empty mask.
LabelMask rasterize_polygon(const Polygon& poly, int width, int height, ClassId cls = ClassId::Crack);

/// Rasterizes every polygon into one mask (union).
LabelMask rasterize_polygons(const std::vector<Polygon>& polys, int width, int height, ClassId cls);

/// Box dilation with a kernel_w x kernel_h structuring element anchored at
/// (floor(kernel_w/2), floor(kernel_h/2)). A set input pixel p sets every
/// output pixel in [p - anchor, p - anchor + kernel - 1], clipped to the frame.
LabelMask dilate(const LabelMask& mask, int kernel_w, int kernel_h);

struct Component {
  int id = 0;  // 0-based, raster order of first pixel
  std::size_t pixel_count = 0;
  BoundingBox bbox;
};

struct ComponentLabeling {
  std::vector<std::int32_t> labels;  // -1 for unset pixels
  std::vector<Component> components;
};

/// 8-connected labeling.
ComponentLabeling label_components(const LabelMask& mask);

std::vector<Component> connected_components(const LabelMask& mask);

/// Drops 8-connected components with fewer than min_area pixels.
LabelMask remove_small_components(const LabelMask& mask, std::size_t min_area);

// Polygon geometry.

double polygon_area(const Polygon& poly);  // absolute shoelace area

struct RectD {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
};

RectD polygon_bounds(const Polygon& poly);

/// Sutherland-Hodgman clip against an axis-aligned rectangle. May return fewer
/// than three points when the polygon lies outside.
Polygon clip_polygon(const Polygon& poly, const RectD& rect);

/// Clamps every vertex into [0, width] x [0, height].
Polygon clamp_polygon(const Polygon& poly, double width, double height);

Polygon translate_polygon(const Polygon& poly, double dx, double dy);
Polygon scale_polygon(const Polygon& poly, double sx, double sy);

/// Andrew's monotone chain; counter-clockwise, no repeated endpoint.
Polygon convex_hull(std::vector<Point> points);

}  // namespace synthforge

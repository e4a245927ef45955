// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "synthforge/types.hpp"

namespace synthforge {

using Histogram = std::array<std::uint64_t, 256>;

struct OtsuResult {
  std::vector<int> thresholds;  // k-1 values, strictly increasing, each in [0, 254]
  double between_class_variance = 0.0;
};

Histogram gray_histogram(const GrayImage& img);

/// Classes are [0, t0], (t0, t1], ..., (t_{k-2}, 255]. Empty classes add 0.
double between_class_variance(const Histogram& hist, const std::vector<int>& thresholds);

/// Exhaustive maximizer of the between-class variance for k in {2, 3, 4}.
/// Ties resolve to the lexicographically smallest threshold tuple. Throws
/// DataError("insufficient modes") when fewer than k intensities occur.
OtsuResult multi_otsu(const Histogram& hist, int k);

std::size_t distinct_levels(const Histogram& hist);

/// Linear remap sending the low_pct percentile to 0 and the high_pct
/// percentile to 255 (percentile index round(p / 100 * (n - 1)) over all
/// samples). Degenerate percentiles return the input unchanged.
GrayImage contrast_stretch(const GrayImage& img, double low_pct = 2.0, double high_pct = 98.0);
ImageBuffer contrast_stretch(const ImageBuffer& img, double low_pct = 2.0, double high_pct = 98.0);

/// External mask source for a polygon (e.g. a learned segmenter); returns a
/// full-image mask.
using MaskProvider = std::function<LabelMask(const ImageBuffer&, const Polygon&)>;

struct RefineOptions {
  double low_pct = 2.0;
  double high_pct = 98.0;
  int classes = 3;           // Otsu class count
  int margin = 4;            // px around the polygon bounds
  int restrict_radius = 5;   // px dilation of the polygon raster
  std::size_t min_component = 20;
  MaskProvider acrack_provider;  // when set, used for ACrack shapes
};

/// Darkest Otsu class inside the cropped, stretched polygon region, limited
/// to the dilated polygon raster, small components removed. When only two
/// intensity levels remain the class count drops to 2; a single level yields
/// an empty mask and an "insufficient modes" warning.
LabelMask refine_crack_polygon(const ImageBuffer& image, const Polygon& poly, const RefineOptions& opt = {},
                               std::vector<std::string>* warnings = nullptr);

/// Union over Crack and ACrack shapes. Polygons are scaled when the
/// annotation frame differs from the image size.
LabelMask refine_image(const ImageBuffer& image, const Annotation& a, const RefineOptions& opt = {},
                       std::vector<std::string>* warnings = nullptr);

/// Review overlay: mask pixels blended 60% toward red.
ImageBuffer crack_overlay(const ImageBuffer& image, const LabelMask& mask);

}  // namespace synthforge

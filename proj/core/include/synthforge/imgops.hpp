// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "synthforge/types.hpp"

namespace synthforge {

/// Interleaved float raster in 0..255 units, used for intermediate math.
struct FloatImage {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<float> data;

  FloatImage() = default;
  FloatImage(int w, int h, int c, float fill = 0.0f)
      : width(w), height(h), channels(c), data(static_cast<std::size_t>(w) * h * c, fill) {}

  float& at(int x, int y, int c = 0) {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  float at(int x, int y, int c = 0) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
};

FloatImage to_float(const ImageBuffer& img);
/// Rounds half away from zero and clamps to [0, 255].
ImageBuffer to_image(const FloatImage& img);

inline std::uint8_t clamp_u8(double v) {
  if (!(v > 0.0)) return 0;
  if (v >= 255.0) return 255;
  return static_cast<std::uint8_t>(v + 0.5);
}

/// Luma 0.299 R + 0.587 G + 0.114 B, rounded.
GrayImage to_gray(const ImageBuffer& img);
ImageBuffer gray_to_rgb(const GrayImage& img);

/// Separable Gaussian, kernel radius ceil(3 sigma), clamp-to-edge borders.
FloatImage gaussian_blur(const FloatImage& img, double sigma);

/// Dense 2-D correlation with a normalized kernel centered on the pixel.
FloatImage convolve(const FloatImage& img, const std::vector<float>& kernel, int kw, int kh);

/// Bilinear sample at continuous pixel-index coordinates (pixel centers at
/// integers), clamp-to-edge.
float sample_bilinear(const FloatImage& img, double x, double y, int c);

ImageBuffer resize_bilinear(const ImageBuffer& img, int width, int height);
LabelMask resize_nearest(const LabelMask& mask, int width, int height);

ImageBuffer crop(const ImageBuffer& img, const BoundingBox& box);
LabelMask crop(const LabelMask& mask, const BoundingBox& box);

}  // namespace synthforge

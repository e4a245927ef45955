// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "synthforge/imgops.hpp"

#include <algorithm>
#include <cmath>

namespace synthforge {

FloatImage to_float(const ImageBuffer& img) {
  FloatImage out(img.width, img.height, 3);
  for (std::size_t i = 0; i < img.data.size(); ++i) out.data[i] = img.data[i];
  return out;
}

ImageBuffer to_image(const FloatImage& img) {
  ImageBuffer out(img.width, img.height);
  if (img.channels == 3) {
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = clamp_u8(img.data[i]);
  } else {
    for (std::size_t p = 0; p < out.pixel_count(); ++p) {
      const auto v = clamp_u8(img.data[p]);
      out.data[p * 3] = out.data[p * 3 + 1] = out.data[p * 3 + 2] = v;
    }
  }
  return out;
}

GrayImage to_gray(const ImageBuffer& img) {
  GrayImage out(img.width, img.height);
  for (std::size_t p = 0; p < img.pixel_count(); ++p) {
    const double v = 0.299 * img.data[p * 3] + 0.587 * img.data[p * 3 + 1] + 0.114 * img.data[p * 3 + 2];
    out.data[p] = clamp_u8(v);
  }
  return out;
}

ImageBuffer gray_to_rgb(const GrayImage& img) {
  ImageBuffer out(img.width, img.height);
  for (std::size_t p = 0; p < img.data.size(); ++p) out.data[p * 3] = out.data[p * 3 + 1] = out.data[p * 3 + 2] = img.data[p];
  return out;
}

FloatImage gaussian_blur(const FloatImage& img, double sigma) {
  if (sigma <= 0.0) return img;
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<float> k(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-0.5 * (i * i) / (sigma * sigma));
    k[static_cast<std::size_t>(i + radius)] = static_cast<float>(v);
    sum += v;
  }
  for (auto& v : k) v = static_cast<float>(v / sum);

  const int w = img.width;
  const int h = img.height;
  const int ch = img.channels;
  FloatImage tmp(w, h, ch);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        float acc = 0.0f;
        for (int i = -radius; i <= radius; ++i) {
          const int sx = std::clamp(x + i, 0, w - 1);
          acc += k[static_cast<std::size_t>(i + radius)] * img.at(sx, y, c);
        }
        tmp.at(x, y, c) = acc;
      }
    }
  }
  FloatImage out(w, h, ch);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        float acc = 0.0f;
        for (int i = -radius; i <= radius; ++i) {
          const int sy = std::clamp(y + i, 0, h - 1);
          acc += k[static_cast<std::size_t>(i + radius)] * tmp.at(x, sy, c);
        }
        out.at(x, y, c) = acc;
      }
    }
  }
  return out;
}

FloatImage convolve(const FloatImage& img, const std::vector<float>& kernel, int kw, int kh) {
  const int w = img.width;
  const int h = img.height;
  const int ch = img.channels;
  const int ax = kw / 2;
  const int ay = kh / 2;
  // Skip zero taps; motion and disk kernels are sparse.
  struct Tap {
    int dx, dy;
    float weight;
  };
  std::vector<Tap> taps;
  for (int j = 0; j < kh; ++j) {
    for (int i = 0; i < kw; ++i) {
      const float v = kernel[static_cast<std::size_t>(j) * kw + i];
      if (v != 0.0f) taps.push_back({i - ax, j - ay, v});
    }
  }
  FloatImage out(w, h, ch);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        float acc = 0.0f;
        for (const auto& t : taps) {
          acc += t.weight * img.at(std::clamp(x + t.dx, 0, w - 1), std::clamp(y + t.dy, 0, h - 1), c);
        }
        out.at(x, y, c) = acc;
      }
    }
  }
  return out;
}

float sample_bilinear(const FloatImage& img, double x, double y, int c) {
  x = std::clamp(x, 0.0, static_cast<double>(img.width - 1));
  y = std::clamp(y, 0.0, static_cast<double>(img.height - 1));
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, img.width - 1);
  const int y1 = std::min(y0 + 1, img.height - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  if (fx == 0.0 && fy == 0.0) return img.at(x0, y0, c);
  const double top = img.at(x0, y0, c) * (1.0 - fx) + img.at(x1, y0, c) * fx;
  const double bottom = img.at(x0, y1, c) * (1.0 - fx) + img.at(x1, y1, c) * fx;
  return static_cast<float>(top * (1.0 - fy) + bottom * fy);
}

ImageBuffer resize_bilinear(const ImageBuffer& img, int width, int height) {
  if (img.width == width && img.height == height) return img;
  const FloatImage src = to_float(img);
  FloatImage out(width, height, 3);
  const double sx = static_cast<double>(img.width) / width;
  const double sy = static_cast<double>(img.height) / height;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double fx = (x + 0.5) * sx - 0.5;
      const double fy = (y + 0.5) * sy - 0.5;
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = sample_bilinear(src, fx, fy, c);
    }
  }
  return to_image(out);
}

LabelMask resize_nearest(const LabelMask& mask, int width, int height) {
  LabelMask out(width, height, mask.cls);
  for (int y = 0; y < height; ++y) {
    const int sy = std::min(mask.height - 1, static_cast<int>((y + 0.5) * mask.height / height));
    for (int x = 0; x < width; ++x) {
      const int sx = std::min(mask.width - 1, static_cast<int>((x + 0.5) * mask.width / width));
      out.set(x, y, mask.get(sx, sy));
    }
  }
  return out;
}

ImageBuffer crop(const ImageBuffer& img, const BoundingBox& box) {
  ImageBuffer out(box.width(), box.height());
  for (int y = 0; y < box.height(); ++y) {
    const auto* src = &img.data[(static_cast<std::size_t>(y + box.y0) * img.width + box.x0) * 3];
    std::copy(src, src + static_cast<std::size_t>(box.width()) * 3, &out.data[static_cast<std::size_t>(y) * box.width() * 3]);
  }
  return out;
}

LabelMask crop(const LabelMask& mask, const BoundingBox& box) {
  LabelMask out(box.width(), box.height(), mask.cls);
  for (int y = 0; y < box.height(); ++y) {
    for (int x = 0; x < box.width(); ++x) out.set(x, y, mask.get(x + box.x0, y + box.y0));
  }
  return out;
}

}  // namespace synthforge

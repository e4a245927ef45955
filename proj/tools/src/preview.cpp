// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "synthforge/cli/preview.hpp"

#include <cctype>
#include <string>

#include "synthforge/imgops.hpp"

namespace synthforge::cli {

namespace {

constexpr std::array<std::array<std::uint8_t, 3>, kNumClasses> kColors = {{
    {0, 0, 0},       {255, 0, 0},     {255, 128, 0},   {255, 255, 255}, {128, 64, 0},
    {0, 128, 128},   {255, 0, 255},   {0, 255, 255},   {255, 255, 0},   {128, 128, 0},
    {0, 0, 255},     {200, 80, 20},   {0, 255, 0},     {0, 128, 0},     {128, 0, 0},
    {128, 0, 128},   {64, 64, 255},   {0, 64, 128},    {192, 192, 192}, {255, 160, 200},
}};

// 3x5 glyphs, one byte per row, bit 2 = left column.
constexpr std::array<std::array<std::uint8_t, 5>, 26> kGlyphs = {{
    {2, 5, 7, 5, 5}, {6, 5, 6, 5, 6}, {3, 4, 4, 4, 3}, {6, 5, 5, 5, 6}, {7, 4, 6, 4, 7}, {7, 4, 6, 4, 4},
    {3, 4, 5, 5, 3}, {5, 5, 7, 5, 5}, {7, 2, 2, 2, 7}, {1, 1, 1, 5, 2}, {5, 5, 6, 5, 5}, {4, 4, 4, 4, 7},
    {5, 7, 7, 5, 5}, {6, 5, 5, 5, 5}, {2, 5, 5, 5, 2}, {6, 5, 6, 4, 4}, {2, 5, 5, 6, 3}, {6, 5, 6, 5, 5},
    {3, 4, 2, 1, 6}, {7, 2, 2, 2, 2}, {5, 5, 5, 5, 7}, {5, 5, 5, 5, 2}, {5, 5, 7, 7, 5}, {5, 5, 2, 5, 5},
    {5, 5, 2, 2, 2}, {7, 1, 2, 4, 7},
}};

void draw_text(ImageBuffer& img, int x0, int y0, const std::string& text) {
  constexpr int kScale = 2;
  int x = x0;
  for (char ch : text) {
    const int up = std::toupper(static_cast<unsigned char>(ch));
    if (up >= 'A' && up <= 'Z') {
      const auto& g = kGlyphs[static_cast<std::size_t>(up - 'A')];
      for (int r = 0; r < 5; ++r) {
        for (int c = 0; c < 3; ++c) {
          if (!((g[r] >> (2 - c)) & 1)) continue;
          for (int dy = 0; dy < kScale; ++dy) {
            for (int dx = 0; dx < kScale; ++dx) {
              const int px = x + c * kScale + dx;
              const int py = y0 + r * kScale + dy;
              if (px < 0 || py < 0 || px >= img.width || py >= img.height) continue;
              for (int k = 0; k < 3; ++k) img.at(px, py, k) = 255;
            }
          }
        }
      }
    }
    x += 4 * kScale;
  }
}

}  // namespace

std::array<std::uint8_t, 3> class_color(ClassId c) { return kColors[static_cast<std::size_t>(c)]; }

Preview render_preview(const ImageBuffer& image, const MaskSet& masks) {
  Preview p;
  p.base_height = image.height;
  for (const auto& [cls, m] : masks.masks()) {
    if (m.width != image.width || m.height != image.height) throw DataError("preview: mask size differs from image");
    if (!m.empty()) p.legend.push_back(cls);
  }
  if (p.legend.empty()) {
    p.image = image;
    return p;
  }
  const int strip = kLegendRow * static_cast<int>(p.legend.size()) + 4;
  p.image = ImageBuffer(image.width, image.height + strip, 32);
  std::copy(image.data.begin(), image.data.end(), p.image.data.begin());
  for (ClassId cls : p.legend) {
    const LabelMask& m = *masks.find(cls);
    const auto col = class_color(cls);
    for (int y = 0; y < image.height; ++y) {
      for (int x = 0; x < image.width; ++x) {
        if (!m.get(x, y)) continue;
        for (int c = 0; c < 3; ++c) {
          p.image.at(x, y, c) = clamp_u8(p.image.at(x, y, c) * (1.0 - kPreviewAlpha) + col[c] * kPreviewAlpha);
        }
      }
    }
  }
  for (std::size_t i = 0; i < p.legend.size(); ++i) {
    const int y0 = image.height + 2 + static_cast<int>(i) * kLegendRow;
    const auto col = class_color(p.legend[i]);
    for (int y = y0 + 1; y < y0 + 11 && y < p.image.height; ++y) {
      for (int x = 2; x < 12 && x < p.image.width; ++x) {
        for (int c = 0; c < 3; ++c) p.image.at(x, y, c) = col[c];
      }
    }
    draw_text(p.image, 16, y0 + 1, std::string(class_name(p.legend[i])));
  }
  return p;
}

}  // namespace synthforge::cli

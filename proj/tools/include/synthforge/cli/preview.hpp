// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "synthforge/types.hpp"

namespace synthforge::cli {

/// Fixed class colors (RGB):
///   Crack 255,0,0        ACrack 255,128,0      Efflorescence 255,255,255
///   Rockpocket 128,64,0  WConccor 0,128,128    Hollowareas 255,0,255
///   Cavity 0,255,255     Spalling 255,255,0    Restformwork 128,128,0
///   Wetspot 0,0,255      Rust 200,80,20        Graffiti 0,255,0
///   Weathering 0,128,0   ExposedRebars 128,0,0 Bearing 128,0,128
///   EJoint 64,64,255     Drainage 0,64,128     PEquipment 192,192,192
///   JTape 255,160,200
std::array<std::uint8_t, 3> class_color(ClassId c);

inline constexpr double kPreviewAlpha = 0.45;
inline constexpr int kLegendRow = 14;

struct Preview {
  ImageBuffer image;             // overlay, legend strip appended below
  std::vector<ClassId> legend;   // classes with a non-empty mask, in class order
  int base_height = 0;           // rows above the legend strip
};

/// Masks blended over the image in class order; an empty MaskSet yields a
/// plain copy with no legend strip.
Preview render_preview(const ImageBuffer& image, const MaskSet& masks);

}  // namespace synthforge::cli

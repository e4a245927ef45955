// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "synthforge/types.hpp"

namespace synthforge {

// PNG output is deterministic: fixed zlib level, no timestamps or text chunks.

ImageBuffer read_png_rgb(const std::filesystem::path& path);
GrayImage read_png_gray(const std::filesystem::path& path);
void write_png(const ImageBuffer& img, const std::filesystem::path& path);
void write_png(const GrayImage& img, const std::filesystem::path& path);

ImageBuffer read_jpeg(const std::filesystem::path& path);

/// Reads PNG or JPEG, detected from the file signature.
ImageBuffer read_image(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_jpeg(const ImageBuffer& img, int quality);
ImageBuffer decode_jpeg(const std::vector<std::uint8_t>& bytes);

/// Mask PNG convention: 255 = set, 0 = unset. Any nonzero value reads as set.
GrayImage mask_to_gray(const LabelMask& mask);
LabelMask gray_to_mask(const GrayImage& gray, ClassId cls);

}  // namespace synthforge

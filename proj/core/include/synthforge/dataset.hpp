// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "synthforge/types.hpp"

namespace synthforge {

inline constexpr const char* kFormatVersion = "1";
inline constexpr const char* kToolVersion = "synthforge 1.0.0";

// Annotation JSON:
//   {"formatVersion": "1", "imageName": str, "imageWidth": int,
//    "imageHeight": int, "shapes": [{"label": str, "points": [[x, y], ...]}]}

Annotation annotation_from_json(const nlohmann::json& j);
nlohmann::json annotation_to_json(const Annotation& a);

/// Throws ParseError with line/column for malformed JSON, unknown labels,
/// negative dimensions, or polygons with fewer than three points. Vertices are
/// clamped into the image frame.
Annotation load_annotation(const std::filesystem::path& path);
void save_annotation(const Annotation& a, const std::filesystem::path& path);

/// One `<ClassName>.png` per present class.
void save_maskset(const MaskSet& m, const std::filesystem::path& dir);
/// Throws DataError when mask files disagree on dimensions. An empty or
/// missing directory yields an empty set.
MaskSet load_maskset(const std::filesystem::path& dir);

/// Parses JSON text, turning syntax errors into ParseError with line/column.
nlohmann::json parse_json_text(const std::string& text, const std::string& what);
nlohmann::json read_json_file(const std::filesystem::path& path);
/// Pretty-printed, key-sorted, trailing newline.
void write_json_file(const nlohmann::json& j, const std::filesystem::path& path);

/// A generated sample: image, fine masks and coarse polygon annotation.
struct Sample {
  ImageBuffer image;
  MaskSet masks;
  Annotation annotation;
  bool weathered = false;
  std::vector<std::string> warnings;
  nlohmann::json extra = nlohmann::json::object();  // merged into manifest
};

struct SampleProvenance {
  std::string extension;
  std::uint64_t master_seed = 0;
  std::uint64_t sample_index = 0;
  std::string config_hash;
};

/// Sample directory layout:
///   image.png, annotation.json, masks/<Class>.png, manifest.json
/// The manifest is written last and marks the sample complete.
void write_sample(const Sample& s, const SampleProvenance& prov, const std::filesystem::path& dir);

/// True when manifest.json exists, parses, and every file it lists exists.
bool sample_complete(const std::filesystem::path& dir);

std::string sample_dir_name(std::uint64_t index);  // zero-padded to 5 digits

struct DatasetEntry {
  std::filesystem::path annotation;
  std::filesystem::path image;
  std::optional<std::filesystem::path> masks_dir;
};

struct DatasetListing {
  std::vector<DatasetEntry> entries;  // sorted by annotation path
  std::vector<std::string> warnings;
};

/// Recursively collects annotation JSON files (any *.json carrying
/// "imageName") and resolves their images next to the annotation or in a
/// sibling `images/` directory.
DatasetListing list_dataset(const std::filesystem::path& root);

/// FNV-1a 64-bit, hex encoded.
/// Per-class union rasters of the annotation polygons, scaled from the
/// annotation frame to width x height.
MaskSet annotation_masks(const Annotation& a, int width, int height);
/// masks/ when present and non-empty, otherwise the rasterized annotation at
/// its native size.
MaskSet load_entry_masks(const DatasetEntry& e);

std::string fnv1a_hex(const std::string& bytes);

}  // namespace synthforge

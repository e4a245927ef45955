// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "synthforge/dataset.hpp"
#include "synthforge/random.hpp"
#include "synthforge/types.hpp"

namespace synthforge {

/// Underrepresented classes rebalanced by cut-and-paste compositing.
inline constexpr std::array<ClassId, 7> kTargetClasses = {
    ClassId::Efflorescence, ClassId::Rockpocket, ClassId::Hollowareas, ClassId::Spalling,
    ClassId::Wetspot,       ClassId::Rust,       ClassId::ExposedRebars,
};

/// Classes whose paste region is widened by a 30x30 box dilation.
bool dilated_on_paste(ClassId cls);

inline constexpr int kPasteDilation = 30;
inline constexpr int kCropPadding = 8;
/// Padding for dilated classes so the dilated region stays inside the crop.
inline constexpr int kDilatedCropPadding = kPasteDilation / 2 + 1;

struct ClassCounts {
  std::int64_t pixel_count = 0;
  std::int64_t shape_count = 0;
  std::int64_t image_count = 0;
};

struct ClassStats {
  int resolution = 512;
  std::int64_t images = 0;
  std::int64_t skipped = 0;
  std::vector<std::string> warnings;
  std::array<ClassCounts, kNumClasses> counts{};

  const ClassCounts& operator[](ClassId c) const { return counts[static_cast<std::size_t>(c)]; }
  ClassCounts& operator[](ClassId c) { return counts[static_cast<std::size_t>(c)]; }

  nlohmann::json to_json() const;
};

/// Adds one annotation, rasterized at resolution x resolution (polygons
/// scaled from the native frame). Pixel counts are per-class unions.
void accumulate_class_stats(ClassStats& stats, const Annotation& a);

/// Unreadable annotations are skipped and counted.
ClassStats compute_class_stats(const std::filesystem::path& dataset_dir, int resolution = 512);

struct ClassYield {
  double pixels_per_sample = 0.0;
  double shapes_per_sample = 0.0;
};

enum class AverageScope { TargetClasses, AllForeground };

struct AllocationEntry {
  ClassId cls = ClassId::Crack;
  double pixel_estimate = 0.0;
  double shape_estimate = 0.0;
  double demand = 0.0;
  std::int64_t allocated = 0;
};

struct AllocationPlan {
  std::int64_t total = 0;
  double mean_pixels = 0.0;
  double mean_shapes = 0.0;
  std::vector<AllocationEntry> entries;  // kTargetClasses order

  std::int64_t allocated(ClassId c) const;
  nlohmann::json to_json() const;
};

/// Largest-remainder apportionment of n proportional to demands; remainder
/// ties go to the lowest index. All-zero demands allocate uniformly.
std::vector<std::int64_t> apportion(const std::vector<double>& demands, std::int64_t n);

/// Per target class c with counts P_c, S_c and means P, S (over the target
/// classes, or all foreground classes):
///   demand_c = (max(0, P - P_c) / pixels_per_sample_c + max(0, S - S_c) / shapes_per_sample_c) / 2
/// then apportion(demands, n). Throws ConfigError when n is smaller than the
/// number of classes with positive demand, or a class with a deficit lacks a
/// positive yield.
AllocationPlan plan_allocation(const ClassStats& stats, std::int64_t n, const std::map<ClassId, ClassYield>& yields,
                               AverageScope scope = AverageScope::TargetClasses);

struct CarriedShape {
  ClassId label = ClassId::Crack;
  Polygon polygon;  // crop coordinates
  bool primary = false;
};

struct DonorCrop {
  std::string image_name;
  ClassId cls = ClassId::Crack;
  int shape_index = 0;
  BoundingBox source_rect;
  ImageBuffer patch;
  LabelMask paste_mask;
  std::vector<CarriedShape> shapes;

  std::string describe() const;
};

/// One crop per shape of `cls`. The crop is the polygon bounding box padded by
/// kCropPadding (kDilatedCropPadding for dilated classes); for ExposedRebars it
/// is extended to cover every intersecting Spalling or Rockpocket host, whose
/// polygon is carried and whose dilated raster joins the paste mask. Every
/// other polygon meeting the crop is carried, clipped to the rectangle. The
/// image must already be at the annotation's resolution.
std::vector<DonorCrop> extract_donor_crops(const Annotation& a, const ImageBuffer& image, ClassId cls,
                                           std::vector<std::string>* warnings = nullptr);

/// Loads every dataset sample containing `cls`, resizes it to
/// resolution x resolution, and extracts crops.
std::vector<DonorCrop> extract_donor_crops(const std::filesystem::path& dataset_dir, ClassId cls, int resolution = 512,
                                           std::vector<std::string>* warnings = nullptr);

/// Mean rasterized pixel count and mean count of carried `cls` shapes.
ClassYield measure_yield(const std::vector<DonorCrop>& crops);

struct RotatedCrop {
  ImageBuffer image;
  LabelMask mask;
  std::vector<float> alpha;  // 2-px linear feather inside the mask
  double angle_deg = 0.0;
  int width = 0;
  int height = 0;
};

/// Canvas = bounding box of the rotated crop; bilinear image, nearest mask.
RotatedCrop rotate_crop(const DonorCrop& crop, double angle_deg);

/// Maps a crop-space point into surface space for a paste at (x, y).
Point paste_transform(const DonorCrop& crop, const RotatedCrop& rc, Point p, int x, int y);

struct PasteResult {
  ImageBuffer image;
  MaskSet masks;               // rasterized transformed polygons
  std::vector<Shape> shapes;   // transformed original polygons
  LabelMask opaque;            // pixels with alpha > 0.5
};

/// Composites the rotated crop with its top-left at (x, y). Throws DataError
/// when the rotated crop does not fit.
PasteResult paste(const DonorCrop& crop, const ImageBuffer& surface, double angle_deg, int x, int y);

struct DaclonsynthJob {
  ClassId cls = ClassId::Crack;
  std::int64_t local_index = 0;
  std::uint64_t global_index = 0;
  bool weathered = false;  // even local indices
};

std::vector<DaclonsynthJob> daclonsynth_jobs(const AllocationPlan& plan);

/// Donor drawn uniformly with replacement, angle uniform in [0, 360) (50
/// draws, then the axis-aligned orientations), position uniform over feasible
/// placements. Surface Weathering and Cavity labels hidden under opaque paste
/// pixels are removed.
Sample gen_daclonsynth_sample(const DaclonsynthJob& job, const std::vector<DonorCrop>& donors,
                              std::uint64_t master_seed, int width = 512, int height = 512);

}  // namespace synthforge

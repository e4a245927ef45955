// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "synthforge/types.hpp"

namespace synthforge {

enum class PerturbKind : std::uint8_t {
  GaussianNoise,
  ShotNoise,
  ImpulseNoise,
  SpeckleNoise,
  GaussianBlur,
  DefocusBlur,
  MotionBlur,
  ZoomBlur,
  Brightness,
  Contrast,
  Fog,
  Snow,
  Spatter,
  JpegCompression,
  ElasticTransform,
};

inline constexpr std::size_t kNumPerturbKinds = 15;
const std::array<PerturbKind, kNumPerturbKinds>& all_perturb_kinds();

std::string_view perturb_name(PerturbKind k);
std::optional<PerturbKind> perturb_from_name(std::string_view name);
/// "all" or a comma-separated list; throws ConfigError on unknown names.
std::vector<PerturbKind> parse_perturb_kinds(std::string_view spec);

/// Consumes the seed (noise, weather, elastic).
bool perturb_is_stochastic(PerturbKind k);
/// Moves pixels, so ground truth must move with it.
bool perturb_is_geometric(PerturbKind k);

struct PerturbConfig {
  PerturbKind kind = PerturbKind::GaussianNoise;
  int severity = 3;  // 1..5
  std::uint64_t seed = 0;
  std::optional<double> elastic_scale;  // px, overrides the severity table

  void validate() const;
};

/// Severity tables, index severity - 1, intensities on a 0..1 scale:
///   gaussian_noise   sigma    .04 .06 .08 .09 .10
///   shot_noise       photons  60 25 12 5 3
///   impulse_noise    amount   .03 .06 .09 .17 .27
///   speckle_noise    sigma    .15 .20 .35 .45 .60 (multiplicative)
///   gaussian_blur    sigma px 1 2 3 4 6
///   defocus_blur     disk px  3 4 6 8 10
///   motion_blur      length   5 9 13 17 21 (horizontal)
///   zoom_blur        zoom     1.06 1.11 1.16 1.21 1.26
///   brightness       +delta   .1 .2 .3 .4 .5
///   contrast         factor   .4 .3 .2 .1 .05
///   fog              amount   .5 .75 1.0 1.25 1.5
///   snow             flakes   .02 .04 .06 .08 .10 per px / 16
///   spatter          z-cut    2.0 1.7 1.4 1.1 0.8
///   jpeg_compression quality  25 18 15 10 7
///   elastic_transform scale   8 12 16 20 24 px
double severity_parameter(PerturbKind k, int severity);

ImageBuffer apply_perturbation(const ImageBuffer& img, const PerturbConfig& cfg);

/// Displacement field: per-pixel unit-variance Gaussian noise, blurred with
/// sigma kElasticSmoothing, multiplied by scale. The blur shrinks the
/// standard deviation to about 1 / (2 sqrt(pi) sigma), so scale 16 moves
/// pixels by roughly 1.3 px RMS.
struct DisplacementField {
  int width = 0;
  int height = 0;
  std::vector<float> dx;
  std::vector<float> dy;
};

inline constexpr double kElasticSmoothing = 4.0;

DisplacementField elastic_field(int width, int height, double scale, std::uint64_t seed);
ImageBuffer warp_image(const ImageBuffer& img, const DisplacementField& f);   // bilinear
LabelMask warp_mask(const LabelMask& mask, const DisplacementField& f);       // nearest

struct PerturbedSample {
  ImageBuffer image;
  MaskSet masks;
};

/// apply_perturbation plus the ground truth: warped by the same displacement
/// field for geometric kinds, passed through unchanged otherwise.
PerturbedSample apply_perturbation(const ImageBuffer& img, const MaskSet& masks, const PerturbConfig& cfg);

/// Seed used for image `index` and kind `k` under a master seed.
std::uint64_t perturb_seed(std::uint64_t master_seed, std::size_t index, PerturbKind k);

/// Writes out_dir/<kind>/<key>.png per image and kind, warped masks under
/// out_dir/<kind>/<key>_masks/ for geometric kinds, and out_dir/manifest.json.
/// Per-file failures are collected in the manifest "errors" list.
nlohmann::json perturb_dataset(const std::filesystem::path& dataset_dir, const std::filesystem::path& out_dir,
                               const std::vector<PerturbKind>& kinds, int severity, std::uint64_t master_seed,
                               int workers = 1);

}  // namespace synthforge

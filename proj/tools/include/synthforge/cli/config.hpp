// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "synthforge/cavitygen.hpp"
#include "synthforge/compositor.hpp"

namespace synthforge::cli {

struct DaclonsynthConfig {
  std::int64_t samples = 5000;
  AverageScope scope = AverageScope::TargetClasses;
};

// Default budget: 1.80 shapes per sample at about 1,735 px per shape, the
// real-data crack statistics rescaled to 512 x 512.
struct CrackConfig {
  std::int64_t samples = 5000;
  std::optional<std::int64_t> target_shapes;  // default round(shapes_per_sample * samples)
  std::optional<std::int64_t> target_pixels;  // default target_shapes * pixels_per_shape
  double shapes_per_sample = 1.80;
  double pixels_per_shape = 1735.0;
  double branch_prob = 0.12;
  double roughness = 0.12;
  double width_taper = 0.6;
  int recursion_depth = 6;

  std::int64_t shapes() const;
  std::int64_t pixels() const;
};

struct CavityConfig {
  std::int64_t samples = 5000;
  CavityProfile profile;
};

struct PerturbSection {
  std::string kinds = "all";
  int severity = 3;
};

/// JSON run configuration. Unknown keys are rejected; every field is
/// optional and falls back to the defaults above.
struct RunConfig {
  std::uint64_t master_seed = 0;
  int resolution = 512;
  int workers = 1;
  std::string dataset_root;
  DaclonsynthConfig daclonsynth;
  CrackConfig synthcrack;
  CavityConfig synthcavity;
  PerturbSection perturb;

  static RunConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  void validate() const;

  /// FNV-1a of the canonical JSON without the worker count, which never
  /// changes outputs.
  std::string hash() const;

  std::int64_t& samples(const std::string& extension);
};

RunConfig load_run_config(const std::filesystem::path& path);

/// config < SYNTHFORGE_WORKERS < flag.
int resolve_workers(int config_workers, std::optional<int> flag);

}  // namespace synthforge::cli

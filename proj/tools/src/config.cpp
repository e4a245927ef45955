// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "synthforge/cli/config.hpp"

#include <cmath>
#include <set>

#include "synthforge/dataset.hpp"
#include "synthforge/parallel.hpp"
#include "synthforge/perturb.hpp"

namespace synthforge::cli {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items()) {
    if (!keys.count(k)) throw ConfigError("unknown config key '" + (where.empty() ? k : where + "." + k) + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + (where.empty() ? std::string(key) : where + "." + key) + "' has the wrong type");
  }
}

template <typename T>
void read_opt(const json& j, const char* key, std::optional<T>& out, const std::string& where) {
  if (!j.contains(key) || j.at(key).is_null()) return;
  T v{};
  read(j, key, v, where);
  out = v;
}

json opt_json(const std::optional<std::int64_t>& v) { return v ? json(*v) : json(); }

}  // namespace

std::int64_t CrackConfig::shapes() const {
  return target_shapes.value_or(std::llround(shapes_per_sample * static_cast<double>(samples)));
}

std::int64_t CrackConfig::pixels() const {
  return target_pixels.value_or(std::llround(static_cast<double>(shapes()) * pixels_per_shape));
}

RunConfig RunConfig::from_json(const json& j) {
  reject_unknown(j, "", {"masterSeed", "resolution", "workers", "dataset", "daclonsynth", "synthcrack", "synthcavity",
                         "perturb"});
  RunConfig c;
  read(j, "masterSeed", c.master_seed, "");
  read(j, "resolution", c.resolution, "");
  read(j, "workers", c.workers, "");
  if (j.contains("dataset")) {
    const json& d = j.at("dataset");
    reject_unknown(d, "dataset", {"root"});
    read(d, "root", c.dataset_root, "dataset");
  }
  if (j.contains("daclonsynth")) {
    const json& d = j.at("daclonsynth");
    reject_unknown(d, "daclonsynth", {"samples", "averageScope"});
    read(d, "samples", c.daclonsynth.samples, "daclonsynth");
    std::string scope = "target";
    read(d, "averageScope", scope, "daclonsynth");
    if (scope == "target") {
      c.daclonsynth.scope = AverageScope::TargetClasses;
    } else if (scope == "all") {
      c.daclonsynth.scope = AverageScope::AllForeground;
    } else {
      throw ConfigError("daclonsynth.averageScope must be 'target' or 'all'");
    }
  }
  if (j.contains("synthcrack")) {
    const json& d = j.at("synthcrack");
    const std::string w = "synthcrack";
    reject_unknown(d, w, {"samples", "targetShapes", "targetPixels", "shapesPerSample", "pixelsPerShape", "branchProb",
                          "roughness", "widthTaper", "recursionDepth"});
    auto& k = c.synthcrack;
    read(d, "samples", k.samples, w);
    read_opt(d, "targetShapes", k.target_shapes, w);
    read_opt(d, "targetPixels", k.target_pixels, w);
    read(d, "shapesPerSample", k.shapes_per_sample, w);
    read(d, "pixelsPerShape", k.pixels_per_shape, w);
    read(d, "branchProb", k.branch_prob, w);
    read(d, "roughness", k.roughness, w);
    read(d, "widthTaper", k.width_taper, w);
    read(d, "recursionDepth", k.recursion_depth, w);
  }
  if (j.contains("synthcavity")) {
    const json& d = j.at("synthcavity");
    const std::string w = "synthcavity";
    reject_unknown(d, w, {"samples", "minShapesPerSample", "maxPixelsPerShape", "largeCavityFraction"});
    read(d, "samples", c.synthcavity.samples, w);
    read(d, "minShapesPerSample", c.synthcavity.profile.min_shapes_per_sample, w);
    read(d, "maxPixelsPerShape", c.synthcavity.profile.max_pixels_per_shape, w);
    read(d, "largeCavityFraction", c.synthcavity.profile.large_cavity_fraction, w);
  }
  if (j.contains("perturb")) {
    const json& d = j.at("perturb");
    reject_unknown(d, "perturb", {"kinds", "severity"});
    read(d, "kinds", c.perturb.kinds, "perturb");
    read(d, "severity", c.perturb.severity, "perturb");
  }
  c.validate();
  return c;
}

json RunConfig::to_json() const {
  return {
      {"masterSeed", master_seed},
      {"resolution", resolution},
      {"workers", workers},
      {"dataset", {{"root", dataset_root}}},
      {"daclonsynth",
       {{"samples", daclonsynth.samples},
        {"averageScope", daclonsynth.scope == AverageScope::TargetClasses ? "target" : "all"}}},
      {"synthcrack",
       {{"samples", synthcrack.samples},
        {"targetShapes", opt_json(synthcrack.target_shapes)},
        {"targetPixels", opt_json(synthcrack.target_pixels)},
        {"shapesPerSample", synthcrack.shapes_per_sample},
        {"pixelsPerShape", synthcrack.pixels_per_shape},
        {"branchProb", synthcrack.branch_prob},
        {"roughness", synthcrack.roughness},
        {"widthTaper", synthcrack.width_taper},
        {"recursionDepth", synthcrack.recursion_depth}}},
      {"synthcavity",
       {{"samples", synthcavity.samples},
        {"minShapesPerSample", synthcavity.profile.min_shapes_per_sample},
        {"maxPixelsPerShape", synthcavity.profile.max_pixels_per_shape},
        {"largeCavityFraction", synthcavity.profile.large_cavity_fraction}}},
      {"perturb", {{"kinds", perturb.kinds}, {"severity", perturb.severity}}},
  };
}

void RunConfig::validate() const {
  if (resolution < 16) throw ConfigError("resolution must be >= 16");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  for (std::int64_t n : {daclonsynth.samples, synthcrack.samples, synthcavity.samples}) {
    if (n < 1) throw ConfigError("sample counts must be >= 1");
  }
  if (synthcrack.shapes_per_sample <= 0 || synthcrack.pixels_per_shape <= 0) {
    throw ConfigError("synthcrack shapesPerSample and pixelsPerShape must be positive");
  }
  const auto& p = synthcavity.profile;
  if (p.min_shapes_per_sample < 0 || p.max_pixels_per_shape <= 0) throw ConfigError("invalid synthcavity profile");
  if (p.large_cavity_fraction < 0 || p.large_cavity_fraction > 1) {
    throw ConfigError("synthcavity.largeCavityFraction must be in [0, 1]");
  }
  if (perturb.severity < 1 || perturb.severity > 5) throw ConfigError("perturb.severity must be in [1, 5]");
  (void)parse_perturb_kinds(perturb.kinds);
}

std::string RunConfig::hash() const {
  json j = to_json();
  j.erase("workers");
  return fnv1a_hex(j.dump());
}

std::int64_t& RunConfig::samples(const std::string& extension) {
  if (extension == "daclonsynth") return daclonsynth.samples;
  if (extension == "synthcrack") return synthcrack.samples;
  if (extension == "synthcavity") return synthcavity.samples;
  throw ConfigError("unknown extension '" + extension + "'");
}

RunConfig load_run_config(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) throw ConfigError("config file not found: " + path.string());
  try {
    return RunConfig::from_json(read_json_file(path));
  } catch (const ParseError& e) {
    throw ConfigError(e.what());
  }
}

int resolve_workers(int config_workers, std::optional<int> flag) {
  int w = workers_from_env(config_workers);
  if (flag) w = *flag;
  if (w < 1) throw ConfigError("worker count must be >= 1");
  return w;
}

}  // namespace synthforge::cli

// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "synthforge/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "synthforge/dataset.hpp"
#include "synthforge/image_io.hpp"
#include "synthforge/imgops.hpp"
#include "synthforge/noise.hpp"
#include "synthforge/parallel.hpp"
#include "synthforge/random.hpp"

namespace synthforge {

namespace {

constexpr std::array<std::string_view, kNumPerturbKinds> kNames = {
    "gaussian_noise", "shot_noise", "impulse_noise", "speckle_noise", "gaussian_blur",
    "defocus_blur",   "motion_blur", "zoom_blur",    "brightness",    "contrast",
    "fog",            "snow",        "spatter",      "jpeg_compression", "elastic_transform",
};

constexpr double kTable[kNumPerturbKinds][5] = {
    {0.04, 0.06, 0.08, 0.09, 0.10},       // gaussian_noise
    {60, 25, 12, 5, 3},                   // shot_noise
    {0.03, 0.06, 0.09, 0.17, 0.27},       // impulse_noise
    {0.15, 0.20, 0.35, 0.45, 0.60},       // speckle_noise
    {1, 2, 3, 4, 6},                      // gaussian_blur
    {3, 4, 6, 8, 10},                     // defocus_blur
    {5, 9, 13, 17, 21},                   // motion_blur
    {1.06, 1.11, 1.16, 1.21, 1.26},       // zoom_blur
    {0.1, 0.2, 0.3, 0.4, 0.5},            // brightness
    {0.4, 0.3, 0.2, 0.1, 0.05},           // contrast
    {0.5, 0.75, 1.0, 1.25, 1.5},          // fog
    {0.02, 0.04, 0.06, 0.08, 0.10},       // snow
    {2.0, 1.7, 1.4, 1.1, 0.8},            // spatter
    {25, 18, 15, 10, 7},                  // jpeg_compression
    {8, 12, 16, 20, 24},                  // elastic_transform
};

using Unit = std::vector<double>;  // interleaved RGB on a 0..1 scale

Unit to_unit(const ImageBuffer& img) {
  Unit u(img.data.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = img.data[i] / 255.0;
  return u;
}

ImageBuffer from_unit(const Unit& u, int w, int h) {
  ImageBuffer out(w, h);
  for (std::size_t i = 0; i < u.size(); ++i) out.data[i] = clamp_u8(u[i] * 255.0);
  return out;
}

ImageBuffer blur_sigma(const ImageBuffer& img, double sigma) { return to_image(gaussian_blur(to_float(img), sigma)); }

ImageBuffer defocus(const ImageBuffer& img, int radius) {
  const int k = 2 * radius + 1;
  std::vector<float> taps(static_cast<std::size_t>(k) * k, 0.0f);
  double sum = 0.0;
  for (int y = -radius; y <= radius; ++y) {
    for (int x = -radius; x <= radius; ++x) {
      if (x * x + y * y <= radius * radius) {
        taps[static_cast<std::size_t>(y + radius) * k + (x + radius)] = 1.0f;
        sum += 1.0;
      }
    }
  }
  for (auto& t : taps) t = static_cast<float>(t / sum);
  return to_image(gaussian_blur(convolve(to_float(img), taps, k, k), 0.5));
}

ImageBuffer motion(const ImageBuffer& img, int length) {
  std::vector<float> taps(static_cast<std::size_t>(length), 1.0f / static_cast<float>(length));
  return to_image(convolve(to_float(img), taps, length, 1));
}

ImageBuffer zoom(const ImageBuffer& img, double max_zoom) {
  const FloatImage src = to_float(img);
  FloatImage acc = src;
  int copies = 1;
  const double cx = (img.width - 1) / 2.0;
  const double cy = (img.height - 1) / 2.0;
  for (double z = 1.02; z <= max_zoom + 1e-9; z += 0.02) {
    for (int y = 0; y < img.height; ++y) {
      for (int x = 0; x < img.width; ++x) {
        const double sx = cx + (x - cx) / z;
        const double sy = cy + (y - cy) / z;
        for (int c = 0; c < 3; ++c) acc.at(x, y, c) += sample_bilinear(src, sx, sy, c);
      }
    }
    ++copies;
  }
  for (auto& v : acc.data) v /= static_cast<float>(copies);
  return to_image(acc);
}

Unit fog(const Unit& u, int w, int h, double amount, std::uint64_t seed) {
  NoiseParams p;
  p.octaves = 5;
  p.persistence = 0.6;
  p.lacunarity = 2.0;
  p.base_frequency = 3.0;
  p.seed = seed;
  const ScalarField f = noise_field(w, h, p);
  const double mx = *std::max_element(u.begin(), u.end());
  Unit out(u.size());
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const double layer = amount * (f.values[i] + 1.0) / 2.0;
    for (int c = 0; c < 3; ++c) out[i * 3 + c] = (u[i * 3 + c] + layer) * mx / (mx + amount);
  }
  return out;
}

Unit snow(const Unit& u, int w, int h, double density, std::uint64_t seed) {
  Rng rng(seed);
  Unit out(u.size());
  // Whitened base: snow cover lifts darker regions.
  for (std::size_t i = 0; i < static_cast<std::size_t>(w) * h; ++i) {
    const double luma = 0.299 * u[i * 3] + 0.587 * u[i * 3 + 1] + 0.114 * u[i * 3 + 2];
    const double lift = luma * 1.5 + 0.5;
    for (int c = 0; c < 3; ++c) out[i * 3 + c] = 0.75 * u[i * 3 + c] + 0.25 * std::max(u[i * 3 + c], lift);
  }
  const auto flakes = static_cast<std::int64_t>(density * w * h / 16.0);
  for (std::int64_t n = 0; n < flakes; ++n) {
    const double x0 = rng.uniform(0.0, w);
    const double y0 = rng.uniform(0.0, h);
    const int len = static_cast<int>(rng.uniform_int(3, 7));
    const double a = rng.uniform(0.7, 1.0);
    for (int s = 0; s < len; ++s) {
      const int x = static_cast<int>(x0 + 0.5 * s);
      const int y = static_cast<int>(y0 + s);
      if (x < 0 || y < 0 || x >= w || y >= h) continue;
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      for (int c = 0; c < 3; ++c) out[i * 3 + c] = out[i * 3 + c] * (1.0 - a) + a;
    }
  }
  return out;
}

Unit spatter(const Unit& u, int w, int h, double cut, std::uint64_t seed) {
  Rng rng(seed);
  FloatImage field(w, h, 1);
  for (auto& v : field.data) v = static_cast<float>(rng.normal());
  field = gaussian_blur(field, 3.0);
  double mean = 0.0;
  for (float v : field.data) mean += v;
  mean /= static_cast<double>(field.data.size());
  double var = 0.0;
  for (float v : field.data) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / static_cast<double>(field.data.size()));
  static constexpr double kMud[3] = {0.25, 0.20, 0.15};
  Unit out = u;
  for (std::size_t i = 0; i < field.data.size(); ++i) {
    const double z = sd > 0 ? (field.data[i] - mean) / sd : 0.0;
    if (z <= cut) continue;
    for (int c = 0; c < 3; ++c) out[i * 3 + c] = 0.4 * u[i * 3 + c] + 0.6 * kMud[c];
  }
  return out;
}

}  // namespace

const std::array<PerturbKind, kNumPerturbKinds>& all_perturb_kinds() {
  static const std::array<PerturbKind, kNumPerturbKinds> kinds = [] {
    std::array<PerturbKind, kNumPerturbKinds> a{};
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = static_cast<PerturbKind>(i);
    return a;
  }();
  return kinds;
}

std::string_view perturb_name(PerturbKind k) { return kNames[static_cast<std::size_t>(k)]; }

std::optional<PerturbKind> perturb_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<PerturbKind>(i);
  }
  return std::nullopt;
}

std::vector<PerturbKind> parse_perturb_kinds(std::string_view spec) {
  if (spec == "all") return {all_perturb_kinds().begin(), all_perturb_kinds().end()};
  std::vector<PerturbKind> out;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const std::size_t comma = spec.find(',', pos);
    const std::string_view tok = spec.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    const auto k = perturb_from_name(tok);
    if (!k) throw ConfigError("unknown perturbation '" + std::string(tok) + "'");
    if (std::find(out.begin(), out.end(), *k) == out.end()) out.push_back(*k);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

bool perturb_is_stochastic(PerturbKind k) {
  switch (k) {
    case PerturbKind::GaussianNoise:
    case PerturbKind::ShotNoise:
    case PerturbKind::ImpulseNoise:
    case PerturbKind::SpeckleNoise:
    case PerturbKind::Fog:
    case PerturbKind::Snow:
    case PerturbKind::Spatter:
    case PerturbKind::ElasticTransform:
      return true;
    default:
      return false;
  }
}

bool perturb_is_geometric(PerturbKind k) { return k == PerturbKind::ElasticTransform; }

void PerturbConfig::validate() const {
  if (severity < 1 || severity > 5) throw ConfigError("severity must be in [1, 5]");
  if (static_cast<std::size_t>(kind) >= kNumPerturbKinds) throw ConfigError("unknown perturbation kind");
  if (elastic_scale && !(*elastic_scale >= 0.0)) throw ConfigError("elastic scale must be >= 0");
}

double severity_parameter(PerturbKind k, int severity) {
  if (severity < 1 || severity > 5) throw ConfigError("severity must be in [1, 5]");
  return kTable[static_cast<std::size_t>(k)][severity - 1];
}

DisplacementField elastic_field(int width, int height, double scale, std::uint64_t seed) {
  DisplacementField f;
  f.width = width;
  f.height = height;
  const std::size_t n = static_cast<std::size_t>(width) * height;
  f.dx.assign(n, 0.0f);
  f.dy.assign(n, 0.0f);
  if (scale == 0.0) return f;
  Rng rng(seed);
  for (auto* comp : {&f.dx, &f.dy}) {
    FloatImage g(width, height, 1);
    for (auto& v : g.data) v = static_cast<float>(rng.normal());
    g = gaussian_blur(g, kElasticSmoothing);
    for (std::size_t i = 0; i < n; ++i) (*comp)[i] = static_cast<float>(g.data[i] * scale);
  }
  return f;
}

ImageBuffer warp_image(const ImageBuffer& img, const DisplacementField& f) {
  if (f.width != img.width || f.height != img.height) throw Error("warp_image: dimension mismatch");
  const FloatImage src = to_float(img);
  ImageBuffer out(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * img.width + x;
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = clamp_u8(sample_bilinear(src, x + f.dx[i], y + f.dy[i], c));
    }
  }
  return out;
}

LabelMask warp_mask(const LabelMask& mask, const DisplacementField& f) {
  if (f.width != mask.width || f.height != mask.height) throw Error("warp_mask: dimension mismatch");
  LabelMask out(mask.width, mask.height, mask.cls);
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * mask.width + x;
      const int sx = std::clamp(static_cast<int>(std::lround(x + f.dx[i])), 0, mask.width - 1);
      const int sy = std::clamp(static_cast<int>(std::lround(y + f.dy[i])), 0, mask.height - 1);
      if (mask.get(sx, sy)) out.set(x, y);
    }
  }
  return out;
}

ImageBuffer apply_perturbation(const ImageBuffer& img, const PerturbConfig& cfg) {
  cfg.validate();
  const double s = severity_parameter(cfg.kind, cfg.severity);
  const int w = img.width;
  const int h = img.height;
  Rng rng(cfg.seed);
  switch (cfg.kind) {
    case PerturbKind::GaussianNoise: {
      Unit u = to_unit(img);
      for (auto& v : u) v += rng.normal(0.0, s);
      return from_unit(u, w, h);
    }
    case PerturbKind::ShotNoise: {
      Unit u = to_unit(img);
      for (auto& v : u) v = static_cast<double>(rng.poisson(v * s)) / s;
      return from_unit(u, w, h);
    }
    case PerturbKind::ImpulseNoise: {
      Unit u = to_unit(img);
      for (auto& v : u) {
        if (rng.bernoulli(s)) v = rng.bernoulli(0.5) ? 1.0 : 0.0;
      }
      return from_unit(u, w, h);
    }
    case PerturbKind::SpeckleNoise: {
      Unit u = to_unit(img);
      for (auto& v : u) v += v * rng.normal(0.0, s);
      return from_unit(u, w, h);
    }
    case PerturbKind::GaussianBlur:
      return blur_sigma(img, s);
    case PerturbKind::DefocusBlur:
      return defocus(img, static_cast<int>(s));
    case PerturbKind::MotionBlur:
      return motion(img, static_cast<int>(s));
    case PerturbKind::ZoomBlur:
      return zoom(img, s);
    case PerturbKind::Brightness: {
      Unit u = to_unit(img);
      for (auto& v : u) v += s;
      return from_unit(u, w, h);
    }
    case PerturbKind::Contrast: {
      Unit u = to_unit(img);
      double mean = 0.0;
      for (double v : u) mean += v;
      mean /= static_cast<double>(u.size());
      for (auto& v : u) v = (v - mean) * s + mean;
      return from_unit(u, w, h);
    }
    case PerturbKind::Fog:
      return from_unit(fog(to_unit(img), w, h, s, cfg.seed), w, h);
    case PerturbKind::Snow:
      return from_unit(snow(to_unit(img), w, h, s, cfg.seed), w, h);
    case PerturbKind::Spatter:
      return from_unit(spatter(to_unit(img), w, h, s, cfg.seed), w, h);
    case PerturbKind::JpegCompression:
      return decode_jpeg(encode_jpeg(img, static_cast<int>(s)));
    case PerturbKind::ElasticTransform:
      return warp_image(img, elastic_field(w, h, cfg.elastic_scale.value_or(s), cfg.seed));
  }
  throw ConfigError("unknown perturbation kind");
}

PerturbedSample apply_perturbation(const ImageBuffer& img, const MaskSet& masks, const PerturbConfig& cfg) {
  PerturbedSample out;
  if (!perturb_is_geometric(cfg.kind)) {
    out.image = apply_perturbation(img, cfg);
    out.masks = masks;
    return out;
  }
  cfg.validate();
  const DisplacementField f =
      elastic_field(img.width, img.height, cfg.elastic_scale.value_or(severity_parameter(cfg.kind, cfg.severity)),
                    cfg.seed);
  out.image = warp_image(img, f);
  MaskSet warped(masks.width(), masks.height());
  for (const auto& [cls, m] : masks.masks()) warped.put(warp_mask(m, f));
  out.masks = std::move(warped);
  return out;
}

std::uint64_t perturb_seed(std::uint64_t master_seed, std::size_t index, PerturbKind k) {
  return derive_seed({master_seed, static_cast<std::uint64_t>(index) * kNumPerturbKinds + static_cast<std::uint64_t>(k)});
}

nlohmann::json perturb_dataset(const std::filesystem::path& dataset_dir, const std::filesystem::path& out_dir,
                               const std::vector<PerturbKind>& kinds, int severity, std::uint64_t master_seed,
                               int workers) {
  namespace fs = std::filesystem;
  if (severity < 1 || severity > 5) throw ConfigError("severity must be in [1, 5]");
  if (!fs::is_directory(dataset_dir)) throw DataError("dataset directory not found: " + dataset_dir.string());
  const DatasetListing listing = list_dataset(dataset_dir);

  // Output key: the image stem when unique, otherwise the relative path.
  std::map<std::string, int> stem_uses;
  for (const auto& e : listing.entries) stem_uses[e.image.stem().string()] += 1;
  std::vector<std::string> keys;
  for (const auto& e : listing.entries) {
    std::string key = e.image.stem().string();
    if (stem_uses[key] > 1) {
      key = fs::relative(e.image, dataset_dir).replace_extension().generic_string();
      std::replace(key.begin(), key.end(), '/', '_');
    }
    keys.push_back(key);
  }

  const std::size_t jobs = listing.entries.size() * kinds.size();
  std::vector<nlohmann::json> records(jobs);
  std::vector<std::string> errors(jobs);
  for (PerturbKind k : kinds) fs::create_directories(out_dir / std::string(perturb_name(k)));

  parallel_for(jobs, workers, [&](std::size_t job) {
    const std::size_t idx = job / kinds.size();
    const PerturbKind kind = kinds[job % kinds.size()];
    const auto& e = listing.entries[idx];
    const fs::path kind_dir = out_dir / std::string(perturb_name(kind));
    PerturbConfig cfg{kind, severity, perturb_seed(master_seed, idx, kind), std::nullopt};
    nlohmann::json rec = {{"kind", perturb_name(kind)},
                          {"severity", severity},
                          {"seed", cfg.seed},
                          {"source", fs::relative(e.image, dataset_dir).generic_string()},
                          {"annotation", fs::relative(e.annotation, dataset_dir).generic_string()}};
    try {
      const ImageBuffer img = read_image(e.image);
      const fs::path out_img = kind_dir / (keys[idx] + ".png");
      if (perturb_is_geometric(kind)) {
        MaskSet masks = e.masks_dir ? load_maskset(*e.masks_dir) : MaskSet();
        if (masks.width() == 0) masks = annotation_masks(load_annotation(e.annotation), img.width, img.height);
        const PerturbedSample ps = apply_perturbation(img, masks, cfg);
        write_png(ps.image, out_img);
        const fs::path mdir = kind_dir / (keys[idx] + "_masks");
        fs::remove_all(mdir);
        save_maskset(ps.masks, mdir);
        rec["masks"] = fs::relative(mdir, out_dir).generic_string();
        rec["masksWarped"] = true;
      } else {
        write_png(apply_perturbation(img, cfg), out_img);
        if (e.masks_dir) rec["masks"] = fs::relative(*e.masks_dir, dataset_dir).generic_string();
        rec["masksWarped"] = false;
      }
      rec["image"] = fs::relative(out_img, out_dir).generic_string();
    } catch (const Error& err) {
      errors[job] = e.image.string() + " [" + std::string(perturb_name(kind)) + "]: " + err.what();
    } catch (const fs::filesystem_error& err) {
      errors[job] = e.image.string() + " [" + std::string(perturb_name(kind)) + "]: " + err.what();
    }
    records[job] = std::move(rec);
  });

  nlohmann::json manifest = {{"formatVersion", kFormatVersion},
                             {"toolVersion", kToolVersion},
                             {"dataset", dataset_dir.generic_string()},
                             {"severity", severity},
                             {"masterSeed", master_seed}};
  nlohmann::json names = nlohmann::json::array();
  for (PerturbKind k : kinds) names.push_back(perturb_name(k));
  manifest["kinds"] = names;
  nlohmann::json outputs = nlohmann::json::array();
  nlohmann::json errs = nlohmann::json::array();
  for (std::size_t j = 0; j < jobs; ++j) {
    if (errors[j].empty()) {
      outputs.push_back(records[j]);
    } else {
      errs.push_back(errors[j]);
    }
  }
  for (const auto& w : listing.warnings) errs.push_back(w);
  manifest["outputs"] = outputs;
  manifest["errors"] = errs;
  write_json_file(manifest, out_dir / "manifest.json");
  return manifest;
}

}  // namespace synthforge

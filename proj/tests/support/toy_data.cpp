// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "toy_data.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <random>
#include <vector>

#include "synthforge/dataset.hpp"
#include "synthforge/image_io.hpp"
#include "synthforge/raster.hpp"

namespace synthforge::testing {

TempDir::TempDir(const std::string& prefix) {
  std::string tmpl = (std::filesystem::temp_directory_path() / (prefix + "-XXXXXX")).string();
  if (mkdtemp(tmpl.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

Polygon random_blob(std::uint64_t seed, double cx, double cy, double radius, int vertices) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> r(0.55, 1.0);
  Polygon p;
  for (int i = 0; i < vertices; ++i) {
    const double a = 2.0 * std::numbers::pi * i / vertices;
    const double rr = radius * r(rng);
    p.points.push_back({cx + rr * std::cos(a), cy + rr * std::sin(a)});
  }
  return p;
}

LabelMask random_mask(std::uint64_t seed, int width, int height, double fill_bias) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  LabelMask m(width, height);
  const int n = static_cast<int>(u(rng) * 6 * fill_bias);
  for (int k = 0; k < n; ++k) {
    const double cx = u(rng) * width;
    const double cy = u(rng) * height;
    const double rx = 2 + u(rng) * width / 4.0;
    const double ry = 2 + u(rng) * height / 4.0;
    const bool rect = u(rng) < 0.5;
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        const double dx = (x - cx) / rx;
        const double dy = (y - cy) / ry;
        const bool in = rect ? (std::abs(dx) <= 1 && std::abs(dy) <= 1) : (dx * dx + dy * dy <= 1);
        if (in) m.set(x, y);
      }
    }
  }
  // Salt a few isolated pixels.
  const int salt = static_cast<int>(u(rng) * 20);
  for (int k = 0; k < salt; ++k) {
    m.set(static_cast<int>(u(rng) * width), static_cast<int>(u(rng) * height));
  }
  return m;
}

namespace {

struct ClassPlan {
  ClassId cls;
  double probability;
  double min_radius;
  double max_radius;
  std::array<std::uint8_t, 3> color;
};

void paint(ImageBuffer& img, const Polygon& poly, const std::array<std::uint8_t, 3>& color) {
  const LabelMask m = rasterize_polygon(poly, img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      if (!m.get(x, y)) continue;
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = color[static_cast<std::size_t>(c)];
    }
  }
}

}  // namespace

void write_toy_dataset(const std::filesystem::path& root, const ToyOptions& opt) {
  namespace fs = std::filesystem;
  fs::create_directories(root / "images");
  fs::create_directories(root / "annotations");
  const std::vector<ClassPlan> plans = {
      {ClassId::Spalling, 0.8, 30, 60, {90, 85, 80}},
      {ClassId::Efflorescence, 0.35, 15, 35, {235, 235, 225}},
      {ClassId::Rockpocket, 0.2, 12, 25, {60, 60, 60}},
      {ClassId::Hollowareas, 0.2, 12, 28, {140, 130, 120}},
      {ClassId::Wetspot, 0.1, 10, 20, {70, 80, 90}},
      {ClassId::Rust, 0.1, 6, 14, {150, 70, 30}},
      {ClassId::Crack, 0.5, 10, 20, {30, 30, 30}},
  };
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < opt.images; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "img_%03d", i);
    ImageBuffer img(opt.width, opt.height);
    for (auto& v : img.data) v = static_cast<std::uint8_t>(150 + u(rng) * 30);
    Annotation a;
    a.image_name = std::string(name) + ".png";
    a.image_width = opt.width;
    a.image_height = opt.height;
    std::size_t k = 0;
    for (const auto& p : plans) {
      // Guarantee each class somewhere by forcing it on image index k.
      const bool forced =
          static_cast<int>(k++) == i || (p.cls == ClassId::Spalling && i == static_cast<int>(plans.size()));
      if (!forced && u(rng) >= p.probability) continue;
      const double r = p.min_radius + u(rng) * (p.max_radius - p.min_radius);
      const double cx = r + 4 + u(rng) * (opt.width - 2 * r - 8);
      const double cy = r + 4 + u(rng) * (opt.height - 2 * r - 8);
      const Polygon poly = random_blob(rng(), cx, cy, r);
      paint(img, poly, p.color);
      a.shapes.push_back({p.cls, poly});
      if (p.cls == ClassId::Spalling && (u(rng) < 0.3 || i == static_cast<int>(plans.size()))) {
        const Polygon bar = {{{cx - r * 0.4, cy - 2}, {cx + r * 0.4, cy - 2}, {cx + r * 0.4, cy + 2}, {cx - r * 0.4, cy + 2}}};
        paint(img, bar, {110, 50, 20});
        a.shapes.push_back({ClassId::ExposedRebars, bar});
      }
    }
    write_png(img, root / "images" / a.image_name);
    save_annotation(a, root / "annotations" / (std::string(name) + ".json"));
  }
}

CrackPatch make_crack_patch(std::uint64_t seed, int size) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> grain(0.0, 7.0);
  const double a = u(rng) * std::numbers::pi;
  const double half_len = size * (0.3 + 0.1 * u(rng));
  const double cx = size * (0.45 + 0.1 * u(rng));
  const double cy = size * (0.45 + 0.1 * u(rng));
  const double dx = std::cos(a), dy = std::sin(a);
  const double width = 2.0 + 2.0 * u(rng);
  const double line_level = 45 + 25 * u(rng);
  const double base = 140 + 30 * u(rng);
  const double bx = u(rng) * 6.28, by = u(rng) * 6.28;

  CrackPatch out;
  out.image = ImageBuffer(size, size);
  out.truth = LabelMask(size, size);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double px = x + 0.5 - cx, py = y + 0.5 - cy;
      const double t = std::clamp(px * dx + py * dy, -half_len, half_len);
      const double dist = std::hypot(px - t * dx, py - t * dy);
      const bool on = dist <= width / 2;
      const double blotch = 12 * std::sin(x * 0.11 + bx) * std::cos(y * 0.09 + by);
      const double v = (on ? line_level : base + blotch) + grain(rng);
      if (on) out.truth.set(x, y);
      for (int c = 0; c < 3; ++c) out.image.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(v + c * 2, 0.0, 255.0));
    }
  }
  const double hw = width / 2 + 3;
  const double hl = half_len + 3;
  const double nx = -dy, ny = dx;
  for (auto [s, r] : {std::pair{-1.0, -1.0}, {1.0, -1.0}, {1.0, 1.0}, {-1.0, 1.0}}) {
    out.polygon.points.push_back({cx + s * hl * dx + r * hw * nx, cy + s * hl * dy + r * hw * ny});
  }
  return out;
}

}  // namespace synthforge::testing

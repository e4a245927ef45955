// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "synthforge/noise.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "synthforge/random.hpp"

namespace synthforge {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kSqrt2 = 1.41421356237309504880;

constexpr double kGradX[8] = {1.0, -1.0, 0.0, 0.0, kInvSqrt2, -kInvSqrt2, kInvSqrt2, -kInvSqrt2};
constexpr double kGradY[8] = {0.0, 0.0, 1.0, -1.0, kInvSqrt2, kInvSqrt2, -kInvSqrt2, -kInvSqrt2};

inline double fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }

inline double corner(std::int64_t ix, std::int64_t iy, std::uint64_t salt, double dx, double dy) {
  const std::uint64_t h = mix64(static_cast<std::uint64_t>(ix) * 0x9e3779b97f4a7c15ULL ^
                                static_cast<std::uint64_t>(iy) * 0xc2b2ae3d27d4eb4fULL ^ salt);
  const auto g = static_cast<std::size_t>(h >> 61);
  return kGradX[g] * dx + kGradY[g] * dy;
}

}  // namespace

void NoiseParams::validate() const {
  if (octaves < 1 || octaves > 32) throw ConfigError("octaves must be in [1, 32], got " + std::to_string(octaves));
  if (!(persistence > 0.0 && persistence <= 1.0)) throw ConfigError("persistence must be in (0, 1]");
  if (!(lacunarity >= 1.0)) throw ConfigError("lacunarity must be >= 1");
  if (!(base_frequency > 0.0)) throw ConfigError("base_frequency must be > 0");
}

double perlin2(double x, double y, std::uint64_t seed) {
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const auto ix = static_cast<std::int64_t>(fx);
  const auto iy = static_cast<std::int64_t>(fy);
  const double dx = x - fx;
  const double dy = y - fy;
  const std::uint64_t salt = mix64(seed);

  const double n00 = corner(ix, iy, salt, dx, dy);
  const double n10 = corner(ix + 1, iy, salt, dx - 1.0, dy);
  const double n01 = corner(ix, iy + 1, salt, dx, dy - 1.0);
  const double n11 = corner(ix + 1, iy + 1, salt, dx - 1.0, dy - 1.0);

  const double u = fade(dx);
  const double v = fade(dy);
  const double nx0 = n00 + u * (n10 - n00);
  const double nx1 = n01 + u * (n11 - n01);
  return std::clamp((nx0 + v * (nx1 - nx0)) * kSqrt2, -1.0, 1.0);
}

double fbm2(double x, double y, const NoiseParams& p) {
  double sum = 0.0;
  double norm = 0.0;
  double amp = 1.0;
  double freq = p.base_frequency;
  for (int o = 0; o < p.octaves; ++o) {
    sum += amp * perlin2(x * freq, y * freq, p.seed ^ static_cast<std::uint64_t>(o));
    norm += amp;
    amp *= p.persistence;
    freq *= p.lacunarity;
  }
  return sum / norm;
}

ScalarField noise_field_window(int full_width, int x0, int y0, int w, int h, const NoiseParams& p) {
  ScalarField f{w, h, std::vector<double>(static_cast<std::size_t>(w) * h)};
  const double inv = 1.0 / full_width;
  for (int y = 0; y < h; ++y) {
    const double ny = (y0 + y + 0.5) * inv;
    for (int x = 0; x < w; ++x) f.at(x, y) = fbm2((x0 + x + 0.5) * inv, ny, p);
  }
  return f;
}

ScalarField noise_field(int width, int height, const NoiseParams& p) {
  return noise_field_window(width, 0, 0, width, height, p);
}

}  // namespace synthforge

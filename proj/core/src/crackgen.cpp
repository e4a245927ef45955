// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "synthforge/crackgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "synthforge/raster.hpp"

namespace synthforge {

namespace {

constexpr double kTipWidth = 0.5;
constexpr int kPilotSamples = 32;

enum Stream : std::uint64_t {
  kSurface = 1,
  kCracks = 2,
  kPilot = 0x70696c6f74ULL,
};

std::vector<Point> midpoint_displace(Point a, Point b, int depth, double roughness, Rng& rng) {
  std::vector<Point> pts{a, b};
  for (int level = 0; level < depth; ++level) {
    std::vector<Point> next;
    next.reserve(pts.size() * 2 - 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const Point& p = pts[i];
      const Point& q = pts[i + 1];
      const double dx = q.x - p.x;
      const double dy = q.y - p.y;
      const double len = std::hypot(dx, dy);
      const double offset = rng.uniform(-1.0, 1.0) * roughness * len;
      Point mid{(p.x + q.x) * 0.5, (p.y + q.y) * 0.5};
      if (len > 0.0) {
        mid.x += -dy / len * offset;
        mid.y += dx / len * offset;
      }
      next.push_back(p);
      next.push_back(mid);
    }
    next.push_back(pts.back());
    pts = std::move(next);
  }
  return pts;
}

std::vector<double> taper(std::size_t n, double from) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
    w[i] = from + (kTipWidth - from) * t;
  }
  return w;
}

void clamp_points(std::vector<Point>& pts, int width, int height) {
  for (auto& p : pts) {
    p.x = std::clamp(p.x, 0.5, width - 0.5);
    p.y = std::clamp(p.y, 0.5, height - 0.5);
  }
}

}  // namespace

void CrackParams::validate() const {
  if (n_cracks < 0) throw ConfigError("n_cracks must be >= 0");
  if (root_width < 1.0 || root_width > 8.0) throw ConfigError("root_width must be in [1, 8]");
  if (!(width_taper > 0.0 && width_taper <= 1.0)) throw ConfigError("width_taper must be in (0, 1]");
  if (branch_prob < 0.0 || branch_prob > 0.5) throw ConfigError("branch_prob must be in [0, 0.5]");
  if (roughness < 0.0) throw ConfigError("roughness must be >= 0");
  if (recursion_depth < 3 || recursion_depth > 8) throw ConfigError("recursion_depth must be in [3, 8]");
}

std::vector<CrackPolyline> gen_crack_polyline(const CrackParams& p, int width, int height) {
  p.validate();
  Rng rng(p.seed);
  std::vector<CrackPolyline> out;
  const double extent = std::min(width, height);
  for (int c = 0; c < p.n_cracks; ++c) {
    // Start on a random border side, heading inward.
    const auto side = rng.uniform_int(0, 3);
    const double t = rng.uniform(0.1, 0.9);
    Point start;
    double normal_angle;
    switch (side) {
      case 0: start = {t * width, 0.0}; normal_angle = std::numbers::pi / 2; break;
      case 1: start = {static_cast<double>(width), t * height}; normal_angle = std::numbers::pi; break;
      case 2: start = {t * width, static_cast<double>(height)}; normal_angle = -std::numbers::pi / 2; break;
      default: start = {0.0, t * height}; normal_angle = 0.0; break;
    }
    const double angle = normal_angle + rng.uniform(-50.0, 50.0) * std::numbers::pi / 180.0;
    const double length = rng.uniform(0.45, 0.75) * extent;
    Point end{start.x + std::cos(angle) * length, start.y + std::sin(angle) * length};
    end.x = std::clamp(end.x, 2.0, width - 2.0);
    end.y = std::clamp(end.y, 2.0, height - 2.0);
    const double darkness = rng.uniform(0.25, 0.45);

    CrackPolyline main;
    main.points = midpoint_displace(start, end, p.recursion_depth, p.roughness, rng);
    clamp_points(main.points, width, height);
    main.widths = taper(main.points.size(), p.root_width);
    main.darkness = darkness;
    main.crack_index = c;

    std::vector<CrackPolyline> branches;
    for (std::size_t i = 0; i + 1 < main.points.size(); ++i) {
      const bool spawn = rng.bernoulli(p.branch_prob);
      if (!spawn) continue;
      const Point& a = main.points[i];
      const Point& b = main.points[i + 1];
      const double heading = std::atan2(b.y - a.y, b.x - a.x);
      const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
      const double turn = sign * rng.uniform(25.0, 60.0) * std::numbers::pi / 180.0;
      const double blen = rng.uniform(0.15, 0.35) * length;
      Point bend{a.x + std::cos(heading + turn) * blen, a.y + std::sin(heading + turn) * blen};
      CrackPolyline br;
      br.points = midpoint_displace(a, bend, std::max(1, p.recursion_depth - 2), p.roughness, rng);
      clamp_points(br.points, width, height);
      br.widths = taper(br.points.size(), std::max(kTipWidth, main.widths[i] * p.width_taper));
      br.darkness = darkness;
      br.crack_index = c;
      br.branch = true;
      branches.push_back(std::move(br));
    }
    out.push_back(std::move(main));
    for (auto& br : branches) out.push_back(std::move(br));
  }
  return out;
}

std::vector<float> crack_coverage(const std::vector<CrackPolyline>& polylines, int width, int height,
                                  std::vector<float>* darkness) {
  std::vector<float> cov(static_cast<std::size_t>(width) * height, 0.0f);
  if (darkness) darkness->assign(cov.size(), 1.0f);
  for (const auto& pl : polylines) {
    for (std::size_t i = 0; i + 1 < pl.points.size(); ++i) {
      const Point a = pl.points[i];
      const Point b = pl.points[i + 1];
      const double wa = std::max(pl.widths[i], kMinStrokeWidth);
      const double wb = std::max(pl.widths[i + 1], kMinStrokeWidth);
      const double reach = std::max(wa, wb) * 0.5 + 1.0;
      const int x0 = std::max(0, static_cast<int>(std::floor(std::min(a.x, b.x) - reach)));
      const int x1 = std::min(width - 1, static_cast<int>(std::ceil(std::max(a.x, b.x) + reach)));
      const int y0 = std::max(0, static_cast<int>(std::floor(std::min(a.y, b.y) - reach)));
      const int y1 = std::min(height - 1, static_cast<int>(std::ceil(std::max(a.y, b.y) + reach)));
      const double dx = b.x - a.x;
      const double dy = b.y - a.y;
      const double len2 = dx * dx + dy * dy;
      for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
          const double cx = x + 0.5;
          const double cy = y + 0.5;
          double t = len2 > 0.0 ? ((cx - a.x) * dx + (cy - a.y) * dy) / len2 : 0.0;
          t = std::clamp(t, 0.0, 1.0);
          const double dist = std::hypot(cx - (a.x + t * dx), cy - (a.y + t * dy));
          const double w = wa + (wb - wa) * t;
          const auto c = static_cast<float>(std::clamp(w * 0.5 - dist + 0.5, 0.0, 1.0));
          const std::size_t idx = static_cast<std::size_t>(y) * width + x;
          if (c > cov[idx]) {
            cov[idx] = c;
            if (darkness) (*darkness)[idx] = static_cast<float>(pl.darkness);
          }
        }
      }
    }
  }
  return cov;
}

RenderedCracks render_cracks(const ImageBuffer& surface, const std::vector<CrackPolyline>& polylines) {
  std::vector<float> dark;
  const auto cov = crack_coverage(polylines, surface.width, surface.height, &dark);
  RenderedCracks out{surface, LabelMask(surface.width, surface.height, ClassId::Crack)};
  for (std::size_t i = 0; i < cov.size(); ++i) {
    if (cov[i] <= 0.0f) continue;
    const double factor = 1.0 - cov[i] * (1.0 - dark[i]);
    for (int c = 0; c < 3; ++c) {
      auto& v = out.image.data[i * 3 + c];
      v = static_cast<std::uint8_t>(std::lround(v * factor));
    }
    if (cov[i] > 0.5f) out.mask.bits[i] = 1;
  }
  return out;
}

LabelMask crack_mask(const std::vector<CrackPolyline>& polylines, int width, int height) {
  const auto cov = crack_coverage(polylines, width, height);
  LabelMask m(width, height, ClassId::Crack);
  for (std::size_t i = 0; i < cov.size(); ++i) m.bits[i] = cov[i] > 0.5f ? 1 : 0;
  return m;
}

std::vector<int> distribute_shapes(std::int64_t shapes, std::int64_t samples) {
  if (samples < 1) throw ConfigError("crack budget needs at least one sample");
  if (shapes < samples) {
    throw ConfigError("crack budget of " + std::to_string(shapes) + " shapes cannot give each of " +
                      std::to_string(samples) + " samples at least one crack");
  }
  const auto base = shapes / samples;
  const auto rem = shapes % samples;
  std::vector<int> out(static_cast<std::size_t>(samples));
  for (std::int64_t i = 0; i < samples; ++i) out[static_cast<std::size_t>(i)] = static_cast<int>(base + (i < rem ? 1 : 0));
  return out;
}

CrackSchedule calibrate_crack_set(const CrackBudget& b, const CrackParams& base, int width, int height,
                                  std::uint64_t seed) {
  if (b.n_samples < 1 || b.target_total_pixels < 1 || b.target_total_shapes < 1) {
    throw ConfigError("crack budget values must all be positive");
  }
  const auto counts = distribute_shapes(b.target_total_shapes, b.n_samples);

  // Pilot geometry is fixed once; only widths vary between evaluations.
  std::vector<CrackParams> pilot(kPilotSamples);
  std::int64_t pilot_shapes = 0;
  for (int i = 0; i < kPilotSamples; ++i) {
    pilot[i] = base;
    pilot[i].n_cracks = counts[static_cast<std::size_t>(i) % counts.size()];
    pilot[i].seed = derive_seed({seed ^ kPilot, static_cast<std::uint64_t>(i)});
    pilot_shapes += pilot[i].n_cracks;
  }
  auto per_shape = [&](double w) {
    std::int64_t pixels = 0;
    for (auto p : pilot) {
      p.root_width = w;
      pixels += static_cast<std::int64_t>(crack_mask(gen_crack_polyline(p, width, height), width, height).popcount());
    }
    return static_cast<double>(pixels) / static_cast<double>(pilot_shapes);
  };
  const double target = static_cast<double>(b.target_total_pixels) / static_cast<double>(b.target_total_shapes);

  double lo = 1.0;
  double hi = 8.0;
  const double at_lo = per_shape(lo);
  const double at_hi = per_shape(hi);
  if (at_lo > target * 1.1) {
    throw ConfigError("crack budget infeasible: " + std::to_string(target) +
                      " px/shape needs a root width below the 1 px bound (minimum yield " + std::to_string(at_lo) + ")");
  }
  if (at_hi < target * 0.9) {
    throw ConfigError("crack budget infeasible: " + std::to_string(target) +
                      " px/shape needs a root width above the 8 px bound (maximum yield " + std::to_string(at_hi) + ")");
  }
  double best_w = std::abs(at_lo - target) < std::abs(at_hi - target) ? lo : hi;
  double best_yield = best_w == lo ? at_lo : at_hi;
  for (int iter = 0; iter < 30 && std::abs(best_yield / target - 1.0) > 0.002; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double y = per_shape(mid);
    if (std::abs(y - target) < std::abs(best_yield - target)) {
      best_w = mid;
      best_yield = y;
    }
    if (y < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  CrackSchedule s;
  s.root_width = best_w;
  s.pilot_pixels_per_shape = best_yield;
  s.samples.reserve(counts.size());
  for (int n : counts) {
    CrackParams p = base;
    p.n_cracks = n;
    p.root_width = best_w;
    s.samples.push_back(p);
  }
  return s;
}

Sample gen_synthcrack_sample(SeedSpec spec, CrackParams params, bool weathered, int width, int height) {
  const std::uint64_t seed = derive_seed(spec);
  const Surface surface = random_surface(substream(seed, kSurface), weathered, width, height);
  params.seed = substream(seed, kCracks);
  const auto polylines = gen_crack_polyline(params, width, height);
  auto rendered = render_cracks(surface.image, polylines);

  Sample s;
  s.image = std::move(rendered.image);
  s.weathered = weathered;
  s.masks = MaskSet(width, height);
  if (!rendered.mask.empty()) s.masks.put(rendered.mask);
  if (!surface.pore_mask.empty()) s.masks.put(surface.pore_mask);
  if (weathered && !surface.weathering_mask.empty()) s.masks.put(surface.weathering_mask);

  s.annotation.image_name = "image.png";
  s.annotation.image_width = width;
  s.annotation.image_height = height;
  const double pad = std::max(4.0, params.root_width);
  for (int c = 0; c < params.n_cracks; ++c) {
    std::vector<Point> pts;
    for (const auto& pl : polylines) {
      if (pl.crack_index != c) continue;
      for (const auto& p : pl.points) {
        for (const auto& [ox, oy] : {std::pair{-pad, 0.0}, {pad, 0.0}, {0.0, -pad}, {0.0, pad}}) pts.push_back({p.x + ox, p.y + oy});
      }
    }
    Polygon hull = clip_polygon(convex_hull(std::move(pts)), RectD{0.0, 0.0, double(width), double(height)});
    if (hull.points.size() >= 3) s.annotation.shapes.push_back({ClassId::Crack, std::move(hull)});
  }
  s.extra = {{"nCracks", params.n_cracks}, {"rootWidth", params.root_width}};
  return s;
}

}  // namespace synthforge

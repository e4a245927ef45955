// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "synthforge/raster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace synthforge {

namespace {

// Scan one row at pixel-center height yc. Crossing predicate and intersection
// formula are the classic crossing-number test, so each span boundary is
// resolved exactly as a per-pixel point-in-polygon query would resolve it.
void fill_row(const std::vector<Point>& pts, double yc, int row, LabelMask& out, std::vector<double>& xs) {
  xs.clear();
  const std::size_t n = pts.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& pi = pts[i];
    const Point& pj = pts[j];
    if ((pi.y > yc) != (pj.y > yc)) {
      xs.push_back((pj.x - pi.x) * (yc - pi.y) / (pj.y - pi.y) + pi.x);
    }
  }
  if (xs.size() < 2) return;
  std::sort(xs.begin(), xs.end());

  auto first_at_or_after = [](double a) {
    // Smallest integer x with x + 0.5 >= a.
    double c = std::ceil(a - 0.5);
    if (c < -1.0) return std::int64_t{-1};
    if (c > 1e9) return std::int64_t{1000000000};
    auto x = static_cast<std::int64_t>(c);
    while (static_cast<double>(x) + 0.5 < a) ++x;
    while (static_cast<double>(x - 1) + 0.5 >= a) --x;
    return x;
  };

  for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
    std::int64_t x0 = first_at_or_after(xs[k]);
    std::int64_t x1 = first_at_or_after(xs[k + 1]);
    x0 = std::max<std::int64_t>(x0, 0);
    x1 = std::min<std::int64_t>(x1, out.width);
    for (std::int64_t x = x0; x < x1; ++x) out.set(static_cast<int>(x), row);
  }
}

}  // namespace

LabelMask rasterize_polygon(const Polygon& poly, int width, int height, ClassId cls) {
  LabelMask out(width, height, cls);
  if (poly.points.size() < 3) return out;
  std::vector<double> xs;
  const RectD b = polygon_bounds(poly);
  const int y_begin = std::max(0, static_cast<int>(std::floor(b.y0 - 1.0)));
  const int y_end = std::min(height, static_cast<int>(std::ceil(b.y1 + 1.0)));
  for (int y = y_begin; y < y_end; ++y) fill_row(poly.points, y + 0.5, y, out, xs);
  return out;
}

LabelMask rasterize_polygons(const std::vector<Polygon>& polys, int width, int height, ClassId cls) {
  LabelMask out(width, height, cls);
  for (const auto& p : polys) out |= rasterize_polygon(p, width, height, cls);
  return out;
}

LabelMask dilate(const LabelMask& mask, int kernel_w, int kernel_h) {
  if (kernel_w < 1 || kernel_h < 1) throw ConfigError("dilation kernel must be at least 1x1");
  const int w = mask.width;
  const int h = mask.height;
  const int ax = kernel_w / 2;
  const int ay = kernel_h / 2;
  // Output x is set iff any input in [x - (k - 1 - a), x + a] is set.
  const int back_x = kernel_w - 1 - ax;
  const int back_y = kernel_h - 1 - ay;

  std::vector<std::uint8_t> tmp(mask.bits.size(), 0);
  std::vector<int> prefix(static_cast<std::size_t>(std::max(w, h)) + 1);

  for (int y = 0; y < h; ++y) {
    const std::size_t row = static_cast<std::size_t>(y) * w;
    prefix[0] = 0;
    for (int x = 0; x < w; ++x) prefix[x + 1] = prefix[x] + mask.bits[row + x];
    for (int x = 0; x < w; ++x) {
      const int lo = std::max(0, x - back_x);
      const int hi = std::min(w - 1, x + ax);
      tmp[row + x] = prefix[hi + 1] - prefix[lo] > 0 ? 1 : 0;
    }
  }

  LabelMask out(w, h, mask.cls);
  for (int x = 0; x < w; ++x) {
    prefix[0] = 0;
    for (int y = 0; y < h; ++y) prefix[y + 1] = prefix[y] + tmp[static_cast<std::size_t>(y) * w + x];
    for (int y = 0; y < h; ++y) {
      const int lo = std::max(0, y - back_y);
      const int hi = std::min(h - 1, y + ay);
      out.bits[static_cast<std::size_t>(y) * w + x] = prefix[hi + 1] - prefix[lo] > 0 ? 1 : 0;
    }
  }
  return out;
}

ComponentLabeling label_components(const LabelMask& mask) {
  const int w = mask.width;
  const int h = mask.height;
  ComponentLabeling result;
  result.labels.assign(mask.bits.size(), -1);
  std::vector<std::pair<int, int>> stack;

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * w + x;
      if (!mask.bits[idx] || result.labels[idx] >= 0) continue;
      const int id = static_cast<int>(result.components.size());
      Component comp{id, 0, {x, y, x + 1, y + 1}};
      result.labels[idx] = id;
      stack.assign(1, {x, y});
      while (!stack.empty()) {
        const auto [cx, cy] = stack.back();
        stack.pop_back();
        ++comp.pixel_count;
        comp.bbox.x0 = std::min(comp.bbox.x0, cx);
        comp.bbox.y0 = std::min(comp.bbox.y0, cy);
        comp.bbox.x1 = std::max(comp.bbox.x1, cx + 1);
        comp.bbox.y1 = std::max(comp.bbox.y1, cy + 1);
        for (int dy = -1; dy <= 1; ++dy) {
          const int ny = cy + dy;
          if (ny < 0 || ny >= h) continue;
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = cx + dx;
            if ((dx == 0 && dy == 0) || nx < 0 || nx >= w) continue;
            const std::size_t nidx = static_cast<std::size_t>(ny) * w + nx;
            if (mask.bits[nidx] && result.labels[nidx] < 0) {
              result.labels[nidx] = id;
              stack.emplace_back(nx, ny);
            }
          }
        }
      }
      result.components.push_back(comp);
    }
  }
  return result;
}

std::vector<Component> connected_components(const LabelMask& mask) { return label_components(mask).components; }

LabelMask remove_small_components(const LabelMask& mask, std::size_t min_area) {
  const auto labeling = label_components(mask);
  LabelMask out(mask.width, mask.height, mask.cls);
  for (std::size_t i = 0; i < out.bits.size(); ++i) {
    const int l = labeling.labels[i];
    if (l >= 0 && labeling.components[static_cast<std::size_t>(l)].pixel_count >= min_area) out.bits[i] = 1;
  }
  return out;
}

double polygon_area(const Polygon& poly) {
  const auto& p = poly.points;
  if (p.size() < 3) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0, j = p.size() - 1; i < p.size(); j = i++) acc += p[j].x * p[i].y - p[i].x * p[j].y;
  return std::abs(acc) * 0.5;
}

RectD polygon_bounds(const Polygon& poly) {
  RectD r{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
          -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& p : poly.points) {
    r.x0 = std::min(r.x0, p.x);
    r.y0 = std::min(r.y0, p.y);
    r.x1 = std::max(r.x1, p.x);
    r.y1 = std::max(r.y1, p.y);
  }
  if (poly.points.empty()) r = {};
  return r;
}

Polygon clip_polygon(const Polygon& poly, const RectD& rect) {
  std::vector<Point> pts = poly.points;
  // Edge index: 0 left, 1 right, 2 top, 3 bottom.
  auto inside = [&](const Point& p, int edge) {
    switch (edge) {
      case 0: return p.x >= rect.x0;
      case 1: return p.x <= rect.x1;
      case 2: return p.y >= rect.y0;
      default: return p.y <= rect.y1;
    }
  };
  auto intersect = [&](const Point& a, const Point& b, int edge) {
    double t;
    switch (edge) {
      case 0: t = (rect.x0 - a.x) / (b.x - a.x); return Point{rect.x0, a.y + t * (b.y - a.y)};
      case 1: t = (rect.x1 - a.x) / (b.x - a.x); return Point{rect.x1, a.y + t * (b.y - a.y)};
      case 2: t = (rect.y0 - a.y) / (b.y - a.y); return Point{a.x + t * (b.x - a.x), rect.y0};
      default: t = (rect.y1 - a.y) / (b.y - a.y); return Point{a.x + t * (b.x - a.x), rect.y1};
    }
  };
  for (int edge = 0; edge < 4 && !pts.empty(); ++edge) {
    std::vector<Point> next;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Point& cur = pts[i];
      const Point& prev = pts[(i + pts.size() - 1) % pts.size()];
      const bool cin = inside(cur, edge);
      const bool pin = inside(prev, edge);
      if (cin) {
        if (!pin) next.push_back(intersect(prev, cur, edge));
        next.push_back(cur);
      } else if (pin) {
        next.push_back(intersect(prev, cur, edge));
      }
    }
    pts = std::move(next);
  }
  return Polygon{std::move(pts)};
}

Polygon clamp_polygon(const Polygon& poly, double width, double height) {
  Polygon out = poly;
  for (auto& p : out.points) {
    p.x = std::clamp(p.x, 0.0, width);
    p.y = std::clamp(p.y, 0.0, height);
  }
  return out;
}

Polygon translate_polygon(const Polygon& poly, double dx, double dy) {
  Polygon out = poly;
  for (auto& p : out.points) {
    p.x += dx;
    p.y += dy;
  }
  return out;
}

Polygon scale_polygon(const Polygon& poly, double sx, double sy) {
  Polygon out = poly;
  for (auto& p : out.points) {
    p.x *= sx;
    p.y *= sy;
  }
  return out;
}

Polygon convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return Polygon{pts};
  auto cross = [](const Point& o, const Point& a, const Point& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  };
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return Polygon{std::move(hull)};
}

}  // namespace synthforge

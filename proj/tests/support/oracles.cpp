// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>

namespace synthforge::testing {

bool pnpoly(const Polygon& poly, double x, double y) {
  const auto& v = poly.points;
  bool inside = false;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if (((v[i].y > y) != (v[j].y > y)) && (x < (v[j].x - v[i].x) * (y - v[i].y) / (v[j].y - v[i].y) + v[i].x)) {
      inside = !inside;
    }
  }
  return inside;
}

LabelMask oracle_rasterize(const Polygon& poly, int width, int height) {
  LabelMask m(width, height);
  if (poly.points.size() < 3) return m;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (pnpoly(poly, x + 0.5, y + 0.5)) m.set(x, y);
    }
  }
  return m;
}

LabelMask oracle_dilate(const LabelMask& mask, int kw, int kh) {
  LabelMask out(mask.width, mask.height, mask.cls);
  const int ax = kw / 2;
  const int ay = kh / 2;
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      bool hit = false;
      for (int sy = y + ay - kh + 1; sy <= y + ay && !hit; ++sy) {
        for (int sx = x + ax - kw + 1; sx <= x + ax && !hit; ++sx) {
          if (sx >= 0 && sy >= 0 && sx < mask.width && sy < mask.height && mask.get(sx, sy)) hit = true;
        }
      }
      if (hit) out.set(x, y);
    }
  }
  return out;
}

std::vector<std::size_t> oracle_component_sizes(const LabelMask& mask) {
  std::vector<std::uint8_t> seen(mask.bits.size(), 0);
  std::vector<std::size_t> sizes;
  for (int y0 = 0; y0 < mask.height; ++y0) {
    for (int x0 = 0; x0 < mask.width; ++x0) {
      if (!mask.get(x0, y0) || seen[static_cast<std::size_t>(y0) * mask.width + x0]) continue;
      std::size_t n = 0;
      std::deque<std::pair<int, int>> q{{x0, y0}};
      seen[static_cast<std::size_t>(y0) * mask.width + x0] = 1;
      while (!q.empty()) {
        auto [x, y] = q.front();
        q.pop_front();
        ++n;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = x + dx;
            const int ny = y + dy;
            if (nx < 0 || ny < 0 || nx >= mask.width || ny >= mask.height) continue;
            const std::size_t i = static_cast<std::size_t>(ny) * mask.width + nx;
            if (mask.get(nx, ny) && !seen[i]) {
              seen[i] = 1;
              q.emplace_back(nx, ny);
            }
          }
        }
      }
      sizes.push_back(n);
    }
  }
  return sizes;
}

Tally oracle_tally(const LabelMask& pred, const LabelMask& truth) {
  Tally t;
  for (int y = 0; y < pred.height; ++y) {
    for (int x = 0; x < pred.width; ++x) {
      const bool p = pred.get(x, y);
      const bool g = truth.get(x, y);
      t.tp += p && g;
      t.fp += p && !g;
      t.fn += !p && g;
      t.tn += !p && !g;
    }
  }
  return t;
}

double oracle_between_variance(const std::array<std::uint64_t, 256>& hist, const std::vector<int>& thresholds) {
  double total = 0;
  double sum = 0;
  for (int i = 0; i < 256; ++i) {
    total += static_cast<double>(hist[i]);
    sum += static_cast<double>(hist[i]) * i;
  }
  const double mu = sum / total;
  double var = 0;
  int lo = 0;
  for (std::size_t j = 0; j <= thresholds.size(); ++j) {
    const int hi = j < thresholds.size() ? thresholds[j] : 255;
    double n = 0;
    double s = 0;
    for (int i = lo; i <= hi; ++i) {
      n += static_cast<double>(hist[i]);
      s += static_cast<double>(hist[i]) * i;
    }
    if (n > 0) {
      const double w = n / total;
      const double m = s / n;
      var += w * (m - mu) * (m - mu);
    }
    lo = hi + 1;
  }
  return var;
}

std::vector<int> oracle_otsu(const std::array<std::uint64_t, 256>& hist, int k) {
  // Cumulative sums keep the enumeration tractable; the variance itself is
  // recomputed from weights and means.
  std::array<double, 257> cn{};
  std::array<double, 257> cs{};
  for (int i = 0; i < 256; ++i) {
    cn[i + 1] = cn[i] + static_cast<double>(hist[i]);
    cs[i + 1] = cs[i] + static_cast<double>(hist[i]) * i;
  }
  const double total = cn[256];
  const double mu = cs[256] / total;
  const auto cls = [&](int lo, int hi) {  // levels [lo, hi]
    const double n = cn[hi + 1] - cn[lo];
    if (n <= 0) return 0.0;
    const double m = (cs[hi + 1] - cs[lo]) / n;
    return n / total * (m - mu) * (m - mu);
  };
  std::vector<std::pair<double, std::vector<int>>> all;
  std::vector<int> t(static_cast<std::size_t>(k - 1));
  std::function<void(int, int)> rec = [&](int depth, int start) {
    if (depth == k - 1) {
      double v = 0;
      int lo = 0;
      for (int th : t) {
        v += cls(lo, th);
        lo = th + 1;
      }
      v += cls(lo, 255);
      all.emplace_back(v, t);
      return;
    }
    for (int a = start; a < 255; ++a) {
      t[static_cast<std::size_t>(depth)] = a;
      rec(depth + 1, a + 1);
    }
  };
  rec(0, 0);
  double best = -1;
  for (const auto& [v, tt] : all) best = std::max(best, v);
  for (const auto& [v, tt] : all) {  // enumeration order is lexicographic
    if (v >= best - 1e-9 * std::max(1.0, best)) return tt;
  }
  return {};
}

}  // namespace synthforge::testing

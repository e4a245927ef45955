// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "synthforge/finecrack.hpp"

#include <algorithm>
#include <cmath>

#include "synthforge/imgops.hpp"
#include "synthforge/raster.hpp"

namespace synthforge {

namespace {

struct Prefix {
  std::array<long double, 257> n{};  // counts of levels < i
  std::array<long double, 257> s{};  // level-weighted sums
};

Prefix prefix_sums(const Histogram& h) {
  Prefix p;
  for (int i = 0; i < 256; ++i) {
    p.n[i + 1] = p.n[i] + static_cast<long double>(h[i]);
    p.s[i + 1] = p.s[i] + static_cast<long double>(h[i]) * i;
  }
  return p;
}

// S^2 / n of levels [lo, hi).
long double term(const Prefix& p, int lo, int hi) {
  const long double n = p.n[hi] - p.n[lo];
  if (n <= 0) return 0;
  const long double s = p.s[hi] - p.s[lo];
  return s * s / n;
}

std::pair<double, double> percentile_pair(std::vector<std::uint8_t> v, double lo, double hi) {
  std::sort(v.begin(), v.end());
  const auto idx = [&](double pct) {
    return static_cast<std::size_t>(std::llround(pct / 100.0 * static_cast<double>(v.size() - 1)));
  };
  return {v[idx(lo)], v[idx(hi)]};
}

void check_pct(double lo, double hi) {
  if (!(lo >= 0.0 && lo < hi && hi <= 100.0)) throw ConfigError("contrast percentiles must satisfy 0 <= low < high <= 100");
}

std::uint8_t remap(std::uint8_t v, double lo, double hi) { return clamp_u8((v - lo) * 255.0 / (hi - lo)); }

}  // namespace

Histogram gray_histogram(const GrayImage& img) {
  Histogram h{};
  for (auto v : img.data) h[v] += 1;
  return h;
}

std::size_t distinct_levels(const Histogram& hist) {
  return static_cast<std::size_t>(std::count_if(hist.begin(), hist.end(), [](std::uint64_t c) { return c > 0; }));
}

double between_class_variance(const Histogram& hist, const std::vector<int>& thresholds) {
  const Prefix p = prefix_sums(hist);
  const long double total = p.n[256];
  if (total <= 0) return 0.0;
  const long double mu = p.s[256] / total;
  long double acc = 0;
  int lo = 0;
  for (std::size_t j = 0; j <= thresholds.size(); ++j) {
    const int hi = j < thresholds.size() ? thresholds[j] + 1 : 256;
    const long double n = p.n[hi] - p.n[lo];
    if (n > 0) {
      const long double mj = (p.s[hi] - p.s[lo]) / n;
      acc += n / total * (mj - mu) * (mj - mu);
    }
    lo = hi;
  }
  return static_cast<double>(acc);
}

OtsuResult multi_otsu(const Histogram& hist, int k) {
  if (k < 2 || k > 4) throw ConfigError("multi_otsu class count must be 2, 3 or 4");
  if (distinct_levels(hist) < static_cast<std::size_t>(k)) throw DataError("insufficient modes");
  const Prefix p = prefix_sums(hist);
  // Maximizing sum S_j^2 / n_j is equivalent; mu and N are constant.
  long double best = -1;
  std::vector<int> arg;
  const auto consider = [&](long double v, std::initializer_list<int> t) {
    // Relative slack so rounding noise cannot break an exact tie out of order.
    if (v > best + 1e-15L * std::max<long double>(1, std::abs(best))) {
      best = v;
      arg.assign(t);
    }
  };
  if (k == 2) {
    for (int a = 0; a < 255; ++a) consider(term(p, 0, a + 1) + term(p, a + 1, 256), {a});
  } else if (k == 3) {
    for (int a = 0; a < 255; ++a) {
      const long double ta = term(p, 0, a + 1);
      for (int b = a + 1; b < 255; ++b) consider(ta + term(p, a + 1, b + 1) + term(p, b + 1, 256), {a, b});
    }
  } else {
    for (int a = 0; a < 255; ++a) {
      const long double ta = term(p, 0, a + 1);
      for (int b = a + 1; b < 255; ++b) {
        const long double tb = ta + term(p, a + 1, b + 1);
        for (int c = b + 1; c < 255; ++c) consider(tb + term(p, b + 1, c + 1) + term(p, c + 1, 256), {a, b, c});
      }
    }
  }
  OtsuResult r;
  r.thresholds = arg;
  r.between_class_variance = between_class_variance(hist, arg);
  return r;
}

GrayImage contrast_stretch(const GrayImage& img, double low_pct, double high_pct) {
  check_pct(low_pct, high_pct);
  if (img.data.empty()) return img;
  const auto [lo, hi] = percentile_pair(img.data, low_pct, high_pct);
  if (hi <= lo) return img;
  GrayImage out = img;
  for (auto& v : out.data) v = remap(v, lo, hi);
  return out;
}

ImageBuffer contrast_stretch(const ImageBuffer& img, double low_pct, double high_pct) {
  check_pct(low_pct, high_pct);
  if (img.data.empty()) return img;
  const auto [lo, hi] = percentile_pair(img.data, low_pct, high_pct);
  if (hi <= lo) return img;
  ImageBuffer out = img;
  for (auto& v : out.data) v = remap(v, lo, hi);
  return out;
}

LabelMask refine_crack_polygon(const ImageBuffer& image, const Polygon& poly, const RefineOptions& opt,
                               std::vector<std::string>* warnings) {
  const int w = image.width;
  const int h = image.height;
  LabelMask out(w, h, ClassId::Crack);
  const Polygon clamped = clamp_polygon(poly, w, h);
  if (clamped.points.size() < 3) return out;
  const RectD b = polygon_bounds(clamped);
  BoundingBox rect{std::max(0, static_cast<int>(std::floor(b.x0)) - opt.margin),
                   std::max(0, static_cast<int>(std::floor(b.y0)) - opt.margin),
                   std::min(w, static_cast<int>(std::ceil(b.x1)) + opt.margin),
                   std::min(h, static_cast<int>(std::ceil(b.y1)) + opt.margin)};
  if (rect.empty()) return out;

  const GrayImage gray = contrast_stretch(to_gray(crop(image, rect)), opt.low_pct, opt.high_pct);
  const Histogram hist = gray_histogram(gray);
  const std::size_t levels = distinct_levels(hist);
  if (levels < 2) {
    if (warnings) warnings->push_back("insufficient modes");
    return out;
  }
  const int k = std::min<int>(opt.classes, static_cast<int>(levels));
  const OtsuResult otsu = multi_otsu(hist, k);
  const int t = otsu.thresholds.front();

  const int side = 2 * opt.restrict_radius + 1;
  const LabelMask allowed = crop(dilate(rasterize_polygon(clamped, w, h), side, side), rect);
  LabelMask local(rect.width(), rect.height(), ClassId::Crack);
  for (std::size_t i = 0; i < local.bits.size(); ++i) local.bits[i] = (gray.data[i] <= t && allowed.bits[i]) ? 1 : 0;
  local = remove_small_components(local, opt.min_component);
  for (int y = 0; y < local.height; ++y) {
    for (int x = 0; x < local.width; ++x) {
      if (local.get(x, y)) out.set(rect.x0 + x, rect.y0 + y);
    }
  }
  return out;
}

LabelMask refine_image(const ImageBuffer& image, const Annotation& a, const RefineOptions& opt,
                       std::vector<std::string>* warnings) {
  LabelMask out(image.width, image.height, ClassId::Crack);
  const bool rescale = a.image_width != image.width || a.image_height != image.height;
  const double sx = a.image_width > 0 ? static_cast<double>(image.width) / a.image_width : 1.0;
  const double sy = a.image_height > 0 ? static_cast<double>(image.height) / a.image_height : 1.0;
  for (const auto& s : a.shapes) {
    if (s.label != ClassId::Crack && s.label != ClassId::ACrack) continue;
    const Polygon poly = rescale ? scale_polygon(s.polygon, sx, sy) : s.polygon;
    LabelMask m = (s.label == ClassId::ACrack && opt.acrack_provider) ? opt.acrack_provider(image, poly)
                                                                      : refine_crack_polygon(image, poly, opt, warnings);
    m.cls = ClassId::Crack;
    out |= m;
  }
  return out;
}

ImageBuffer crack_overlay(const ImageBuffer& image, const LabelMask& mask) {
  if (mask.width != image.width || mask.height != image.height) throw Error("crack_overlay: dimension mismatch");
  ImageBuffer out = image;
  static constexpr double kRed[3] = {255.0, 0.0, 0.0};
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      if (!mask.get(x, y)) continue;
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = clamp_u8(0.4 * image.at(x, y, c) + 0.6 * kRed[c]);
    }
  }
  return out;
}

}  // namespace synthforge

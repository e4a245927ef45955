// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "synthforge/compositor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "synthforge/image_io.hpp"
#include "synthforge/imgops.hpp"
#include "synthforge/raster.hpp"
#include "synthforge/texture.hpp"

namespace synthforge {

namespace {

enum Stream : std::uint64_t {
  kSurface = 1,
  kPlacement = 2,
};

constexpr int kAngleDraws = 50;

Annotation scale_annotation(const Annotation& a, int width, int height) {
  Annotation out = a;
  out.image_width = width;
  out.image_height = height;
  if (a.image_width == width && a.image_height == height) return out;
  const double sx = static_cast<double>(width) / a.image_width;
  const double sy = static_cast<double>(height) / a.image_height;
  for (auto& s : out.shapes) s.polygon = scale_polygon(s.polygon, sx, sy);
  return out;
}

bool is_host(ClassId c) { return c == ClassId::Spalling || c == ClassId::Rockpocket; }

bool rasters_overlap(const Polygon& a, const Polygon& b, int w, int h) {
  const LabelMask ma = rasterize_polygon(a, w, h);
  const LabelMask mb = rasterize_polygon(b, w, h);
  for (std::size_t i = 0; i < ma.bits.size(); ++i) {
    if (ma.bits[i] && mb.bits[i]) return true;
  }
  return false;
}

BoundingBox padded_rect(const Polygon& poly, int pad, int w, int h) {
  const RectD b = polygon_bounds(poly);
  BoundingBox r;
  r.x0 = std::max(0, static_cast<int>(std::floor(b.x0)) - pad);
  r.y0 = std::max(0, static_cast<int>(std::floor(b.y0)) - pad);
  r.x1 = std::min(w, static_cast<int>(std::ceil(b.x1)) + pad);
  r.y1 = std::min(h, static_cast<int>(std::ceil(b.y1)) + pad);
  return r;
}

BoundingBox rect_union(const BoundingBox& a, const BoundingBox& b) {
  return {std::min(a.x0, b.x0), std::min(a.y0, b.y0), std::max(a.x1, b.x1), std::max(a.y1, b.y1)};
}

LabelMask paste_raster(const Polygon& crop_poly, ClassId cls, int w, int h) {
  LabelMask m = rasterize_polygon(crop_poly, w, h, cls);
  if (dilated_on_paste(cls)) m = dilate(m, kPasteDilation, kPasteDilation);
  return m;
}

// Chessboard distance to the nearest unmasked pixel, capped at 3; the frame
// border counts as unmasked.
std::vector<float> feather_alpha(const LabelMask& mask) {
  const int w = mask.width;
  const int h = mask.height;
  std::vector<std::uint8_t> level(mask.bits.begin(), mask.bits.end());
  std::vector<float> alpha(level.size(), 0.0f);
  for (std::size_t i = 0; i < level.size(); ++i) alpha[i] = level[i] ? 1.0f : 0.0f;
  for (int d = 1; d <= 2; ++d) {
    std::vector<std::uint8_t> next(level.size(), 0);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        if (!level[i]) continue;
        bool interior = true;
        for (int dy = -1; dy <= 1 && interior; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = x + dx;
            const int ny = y + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h || !level[static_cast<std::size_t>(ny) * w + nx]) {
              interior = false;
              break;
            }
          }
        }
        if (interior) {
          next[i] = 1;
        } else {
          alpha[i] = static_cast<float>(d) / 3.0f;
        }
      }
    }
    level = std::move(next);
  }
  return alpha;
}

struct RotationFrame {
  double cos_t = 1.0;
  double sin_t = 0.0;
  double cx = 0.0, cy = 0.0;    // crop center
  double ccx = 0.0, ccy = 0.0;  // canvas center
  int width = 0;
  int height = 0;
};

RotationFrame rotation_frame(int w, int h, double angle_deg) {
  RotationFrame f;
  const double t = angle_deg * std::numbers::pi / 180.0;
  f.cos_t = std::cos(t);
  f.sin_t = std::sin(t);
  const double ac = std::abs(f.cos_t);
  const double as = std::abs(f.sin_t);
  f.width = std::max(1, static_cast<int>(std::ceil(w * ac + h * as - 1e-9)));
  f.height = std::max(1, static_cast<int>(std::ceil(w * as + h * ac - 1e-9)));
  f.cx = w / 2.0;
  f.cy = h / 2.0;
  f.ccx = f.width / 2.0;
  f.ccy = f.height / 2.0;
  return f;
}

Point forward(const RotationFrame& f, Point p) {
  const double dx = p.x - f.cx;
  const double dy = p.y - f.cy;
  return {f.cos_t * dx - f.sin_t * dy + f.ccx, f.sin_t * dx + f.cos_t * dy + f.ccy};
}

Point inverse(const RotationFrame& f, Point q) {
  const double dx = q.x - f.ccx;
  const double dy = q.y - f.ccy;
  return {f.cos_t * dx + f.sin_t * dy + f.cx, -f.sin_t * dx + f.cos_t * dy + f.cy};
}

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

bool dilated_on_paste(ClassId cls) {
  switch (cls) {
    case ClassId::Spalling:
    case ClassId::Rockpocket:
    case ClassId::Wetspot:
    case ClassId::Hollowareas:
    case ClassId::Efflorescence:
      return true;
    default:
      return false;
  }
}

nlohmann::json ClassStats::to_json() const {
  nlohmann::json classes = nlohmann::json::object();
  for (ClassId c : foreground_classes()) {
    const auto& k = (*this)[c];
    classes[std::string(class_name(c))] = {
        {"pixels", k.pixel_count}, {"shapes", k.shape_count}, {"images", k.image_count}};
  }
  return {{"resolution", resolution}, {"images", images}, {"skipped", skipped},
          {"warnings", warnings},     {"classes", classes}};
}

void accumulate_class_stats(ClassStats& stats, const Annotation& a) {
  const Annotation scaled = scale_annotation(a, stats.resolution, stats.resolution);
  std::map<ClassId, std::vector<Polygon>> by_class;
  for (const auto& s : scaled.shapes) {
    if (s.label == ClassId::Background) continue;
    by_class[s.label].push_back(s.polygon);
  }
  for (const auto& [cls, polys] : by_class) {
    auto& k = stats[cls];
    k.shape_count += static_cast<std::int64_t>(polys.size());
    k.image_count += 1;
    k.pixel_count += static_cast<std::int64_t>(
        rasterize_polygons(polys, stats.resolution, stats.resolution, cls).popcount());
  }
  stats.images += 1;
}

ClassStats compute_class_stats(const std::filesystem::path& dataset_dir, int resolution) {
  if (resolution < 1) throw ConfigError("resolution must be >= 1");
  ClassStats stats;
  stats.resolution = resolution;
  const DatasetListing listing = list_dataset(dataset_dir);
  stats.warnings = listing.warnings;
  for (const auto& e : listing.entries) {
    try {
      accumulate_class_stats(stats, load_annotation(e.annotation));
    } catch (const Error& err) {
      stats.skipped += 1;
      stats.warnings.push_back(e.annotation.string() + ": " + err.what());
    }
  }
  return stats;
}

std::int64_t AllocationPlan::allocated(ClassId c) const {
  for (const auto& e : entries) {
    if (e.cls == c) return e.allocated;
  }
  return 0;
}

nlohmann::json AllocationPlan::to_json() const {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& e : entries) {
    classes.push_back({{"class", std::string(class_name(e.cls))},
                       {"pixelEstimate", e.pixel_estimate},
                       {"shapeEstimate", e.shape_estimate},
                       {"demand", e.demand},
                       {"allocated", e.allocated}});
  }
  return {{"total", total}, {"meanPixels", mean_pixels}, {"meanShapes", mean_shapes}, {"classes", classes}};
}

std::vector<std::int64_t> apportion(const std::vector<double>& demands, std::int64_t n) {
  if (n < 0) throw ConfigError("cannot apportion a negative total");
  if (demands.empty()) {
    if (n != 0) throw ConfigError("cannot apportion samples over zero classes");
    return {};
  }
  for (double d : demands) {
    if (!(d >= 0.0) || !std::isfinite(d)) throw ConfigError("demands must be finite and non-negative");
  }
  double total = std::accumulate(demands.begin(), demands.end(), 0.0);
  std::vector<double> d = demands;
  if (total <= 0.0) {
    std::fill(d.begin(), d.end(), 1.0);
    total = static_cast<double>(d.size());
  }
  std::vector<std::int64_t> out(d.size(), 0);
  std::vector<double> frac(d.size(), 0.0);
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double q = static_cast<double>(n) * d[i] / total;
    const double f = std::floor(q);
    out[i] = static_cast<std::int64_t>(f);
    frac[i] = q - f;
    assigned += out[i];
  }
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] > 0.0) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  std::int64_t remaining = n - assigned;
  // Floating error can leave the remainder above the number of seats in one pass.
  while (remaining > 0 && !order.empty()) {
    for (std::size_t i : order) {
      if (remaining == 0) break;
      out[i] += 1;
      --remaining;
    }
  }
  while (remaining < 0 && !order.empty()) {
    for (auto it = order.rbegin(); it != order.rend() && remaining < 0; ++it) {
      if (out[*it] > 0) {
        out[*it] -= 1;
        ++remaining;
      }
    }
  }
  return out;
}

AllocationPlan plan_allocation(const ClassStats& stats, std::int64_t n, const std::map<ClassId, ClassYield>& yields,
                               AverageScope scope) {
  if (n < 1) throw ConfigError("daclonsynth sample count must be >= 1");
  std::vector<double> pix;
  std::vector<double> shp;
  if (scope == AverageScope::TargetClasses) {
    for (ClassId c : kTargetClasses) {
      pix.push_back(static_cast<double>(stats[c].pixel_count));
      shp.push_back(static_cast<double>(stats[c].shape_count));
    }
  } else {
    for (ClassId c : foreground_classes()) {
      pix.push_back(static_cast<double>(stats[c].pixel_count));
      shp.push_back(static_cast<double>(stats[c].shape_count));
    }
  }
  AllocationPlan plan;
  plan.total = n;
  plan.mean_pixels = mean_of(pix);
  plan.mean_shapes = mean_of(shp);

  std::vector<double> demands;
  std::size_t positive = 0;
  for (ClassId c : kTargetClasses) {
    AllocationEntry e;
    e.cls = c;
    const double dp = std::max(0.0, plan.mean_pixels - static_cast<double>(stats[c].pixel_count));
    const double ds = std::max(0.0, plan.mean_shapes - static_cast<double>(stats[c].shape_count));
    if (dp > 0.0 || ds > 0.0) {
      const auto it = yields.find(c);
      if (it == yields.end() || !(it->second.pixels_per_sample > 0.0) || !(it->second.shapes_per_sample > 0.0)) {
        throw ConfigError("no positive donor yield for demanded class " + std::string(class_name(c)));
      }
      e.pixel_estimate = dp / it->second.pixels_per_sample;
      e.shape_estimate = ds / it->second.shapes_per_sample;
    }
    e.demand = (e.pixel_estimate + e.shape_estimate) / 2.0;
    if (e.demand > 0.0) ++positive;
    demands.push_back(e.demand);
    plan.entries.push_back(e);
  }
  if (static_cast<std::size_t>(n) < positive) {
    throw ConfigError("daclonsynth sample count " + std::to_string(n) + " is below the " + std::to_string(positive) +
                      " classes with positive demand");
  }
  const auto alloc = apportion(demands, n);
  for (std::size_t i = 0; i < alloc.size(); ++i) plan.entries[i].allocated = alloc[i];
  return plan;
}

std::string DonorCrop::describe() const {
  return image_name + "#" + std::to_string(shape_index) + " (" + std::string(class_name(cls)) + ", " +
         std::to_string(patch.width) + "x" + std::to_string(patch.height) + ")";
}

std::vector<DonorCrop> extract_donor_crops(const Annotation& a, const ImageBuffer& image, ClassId cls,
                                           std::vector<std::string>* warnings) {
  const int w = image.width;
  const int h = image.height;
  const Annotation ann = scale_annotation(a, w, h);
  std::vector<Polygon> polys;
  polys.reserve(ann.shapes.size());
  for (const auto& s : ann.shapes) polys.push_back(clamp_polygon(s.polygon, w, h));

  std::vector<DonorCrop> out;
  for (std::size_t i = 0; i < ann.shapes.size(); ++i) {
    if (ann.shapes[i].label != cls) continue;
    const Polygon& poly = polys[i];
    const std::string where = a.image_name + "#" + std::to_string(i);
    if (poly.points.size() < 3 || polygon_area(poly) <= 0.0) {
      if (warnings) warnings->push_back(where + ": polygon outside image bounds, skipped");
      continue;
    }
    BoundingBox rect = padded_rect(poly, dilated_on_paste(cls) ? kDilatedCropPadding : kCropPadding, w, h);
    std::vector<std::size_t> hosts;
    if (cls == ClassId::ExposedRebars) {
      for (std::size_t j = 0; j < ann.shapes.size(); ++j) {
        if (!is_host(ann.shapes[j].label) || polys[j].points.size() < 3) continue;
        if (!rasters_overlap(poly, polys[j], w, h)) continue;
        hosts.push_back(j);
        rect = rect_union(rect, padded_rect(polys[j], kDilatedCropPadding, w, h));
      }
    }
    if (rect.empty()) {
      if (warnings) warnings->push_back(where + ": empty crop, skipped");
      continue;
    }

    DonorCrop crop;
    crop.image_name = a.image_name;
    crop.cls = cls;
    crop.shape_index = static_cast<int>(i);
    crop.source_rect = rect;
    crop.patch = synthforge::crop(image, rect);
    const int cw = rect.width();
    const int ch = rect.height();
    const RectD clip{static_cast<double>(rect.x0), static_cast<double>(rect.y0), static_cast<double>(rect.x1),
                     static_cast<double>(rect.y1)};
    for (std::size_t j = 0; j < ann.shapes.size(); ++j) {
      Polygon clipped = clip_polygon(polys[j], clip);
      if (clipped.points.size() < 3 || polygon_area(clipped) <= 0.0) continue;
      crop.shapes.push_back({ann.shapes[j].label, translate_polygon(clipped, -rect.x0, -rect.y0), j == i});
    }
    crop.paste_mask = paste_raster(translate_polygon(poly, -rect.x0, -rect.y0), cls, cw, ch);
    crop.paste_mask.cls = cls;
    for (std::size_t j : hosts) {
      crop.paste_mask |= paste_raster(translate_polygon(polys[j], -rect.x0, -rect.y0), ann.shapes[j].label, cw, ch);
    }
    if (crop.paste_mask.empty()) {
      if (warnings) warnings->push_back(where + ": polygon covers no pixel centers, skipped");
      continue;
    }
    out.push_back(std::move(crop));
  }
  return out;
}

std::vector<DonorCrop> extract_donor_crops(const std::filesystem::path& dataset_dir, ClassId cls, int resolution,
                                           std::vector<std::string>* warnings) {
  if (resolution < 1) throw ConfigError("resolution must be >= 1");
  const DatasetListing listing = list_dataset(dataset_dir);
  if (warnings) warnings->insert(warnings->end(), listing.warnings.begin(), listing.warnings.end());
  std::vector<DonorCrop> out;
  for (const auto& e : listing.entries) {
    Annotation a;
    try {
      a = load_annotation(e.annotation);
    } catch (const Error& err) {
      if (warnings) warnings->push_back(e.annotation.string() + ": " + err.what());
      continue;
    }
    const bool has = std::any_of(a.shapes.begin(), a.shapes.end(), [&](const Shape& s) { return s.label == cls; });
    if (!has) continue;
    ImageBuffer img;
    try {
      img = resize_bilinear(read_image(e.image), resolution, resolution);
    } catch (const Error& err) {
      if (warnings) warnings->push_back(e.image.string() + ": " + err.what());
      continue;
    }
    // Crops are described by file stem plus shape index.
    a.image_name = e.annotation.parent_path().filename().string() + "/" + a.image_name;
    auto crops = extract_donor_crops(a, img, cls, warnings);
    for (auto& c : crops) out.push_back(std::move(c));
  }
  return out;
}

ClassYield measure_yield(const std::vector<DonorCrop>& crops) {
  ClassYield y;
  if (crops.empty()) return y;
  double pixels = 0.0;
  double shapes = 0.0;
  for (const auto& c : crops) {
    std::vector<Polygon> polys;
    for (const auto& s : c.shapes) {
      if (s.label == c.cls) polys.push_back(s.polygon);
    }
    shapes += static_cast<double>(polys.size());
    pixels += static_cast<double>(rasterize_polygons(polys, c.patch.width, c.patch.height, c.cls).popcount());
  }
  y.pixels_per_sample = pixels / static_cast<double>(crops.size());
  y.shapes_per_sample = shapes / static_cast<double>(crops.size());
  return y;
}

RotatedCrop rotate_crop(const DonorCrop& crop, double angle_deg) {
  const RotationFrame f = rotation_frame(crop.patch.width, crop.patch.height, angle_deg);
  RotatedCrop rc;
  rc.angle_deg = angle_deg;
  rc.width = f.width;
  rc.height = f.height;
  rc.image = ImageBuffer(f.width, f.height);
  rc.mask = LabelMask(f.width, f.height, crop.cls);
  const FloatImage src = to_float(crop.patch);
  const int sw = crop.patch.width;
  const int sh = crop.patch.height;
  for (int v = 0; v < f.height; ++v) {
    for (int u = 0; u < f.width; ++u) {
      const Point p = inverse(f, {u + 0.5, v + 0.5});
      const int mx = static_cast<int>(std::floor(p.x));
      const int my = static_cast<int>(std::floor(p.y));
      if (mx < 0 || my < 0 || mx >= sw || my >= sh) continue;
      if (crop.paste_mask.get(mx, my)) rc.mask.set(u, v);
      for (int c = 0; c < 3; ++c) rc.image.at(u, v, c) = clamp_u8(sample_bilinear(src, p.x - 0.5, p.y - 0.5, c));
    }
  }
  rc.alpha = feather_alpha(rc.mask);
  return rc;
}

Point paste_transform(const DonorCrop& crop, const RotatedCrop& rc, Point p, int x, int y) {
  const RotationFrame f = rotation_frame(crop.patch.width, crop.patch.height, rc.angle_deg);
  const Point q = forward(f, p);
  return {q.x + x, q.y + y};
}

PasteResult paste(const DonorCrop& crop, const ImageBuffer& surface, double angle_deg, int x, int y) {
  const RotatedCrop rc = rotate_crop(crop, angle_deg);
  if (x < 0 || y < 0 || x + rc.width > surface.width || y + rc.height > surface.height) {
    throw DataError("donor shape " + crop.describe() + " rotated to " + std::to_string(rc.width) + "x" +
                    std::to_string(rc.height) + " does not fit at (" + std::to_string(x) + ", " + std::to_string(y) +
                    ") on a " + std::to_string(surface.width) + "x" + std::to_string(surface.height) + " surface");
  }
  PasteResult r;
  r.image = surface;
  r.opaque = LabelMask(surface.width, surface.height, crop.cls);
  for (int v = 0; v < rc.height; ++v) {
    for (int u = 0; u < rc.width; ++u) {
      const float a = rc.alpha[static_cast<std::size_t>(v) * rc.width + u];
      if (a <= 0.0f) continue;
      const int sx = x + u;
      const int sy = y + v;
      for (int c = 0; c < 3; ++c) {
        const double mixed = surface.at(sx, sy, c) * (1.0 - a) + rc.image.at(u, v, c) * static_cast<double>(a);
        r.image.at(sx, sy, c) = clamp_u8(mixed);
      }
      if (a > 0.5f) r.opaque.set(sx, sy);
    }
  }
  r.masks = MaskSet(surface.width, surface.height);
  for (const auto& s : crop.shapes) {
    Polygon t;
    t.points.reserve(s.polygon.points.size());
    for (const Point& p : s.polygon.points) t.points.push_back(paste_transform(crop, rc, p, x, y));
    t = clamp_polygon(t, surface.width, surface.height);
    const LabelMask m = rasterize_polygon(t, surface.width, surface.height, s.label);
    if (!m.empty()) r.masks.merge(m);
    r.shapes.push_back({s.label, std::move(t)});
  }
  return r;
}

std::vector<DaclonsynthJob> daclonsynth_jobs(const AllocationPlan& plan) {
  std::vector<DaclonsynthJob> jobs;
  std::uint64_t global = 0;
  for (const auto& e : plan.entries) {
    for (std::int64_t i = 0; i < e.allocated; ++i) jobs.push_back({e.cls, i, global++, i % 2 == 0});
  }
  return jobs;
}

Sample gen_daclonsynth_sample(const DaclonsynthJob& job, const std::vector<DonorCrop>& donors,
                              std::uint64_t master_seed, int width, int height) {
  if (donors.empty()) throw DataError("no donor crops for class " + std::string(class_name(job.cls)));
  const std::uint64_t seed = derive_seed({master_seed, job.global_index});
  const Surface surface = random_surface(substream(seed, kSurface), job.weathered, width, height);
  Rng rng(substream(seed, kPlacement));
  const DonorCrop& donor = donors[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(donors.size()) - 1))];

  const auto fits = [&](double angle) {
    const RotationFrame f = rotation_frame(donor.patch.width, donor.patch.height, angle);
    return f.width <= width && f.height <= height;
  };
  double angle = 0.0;
  bool placed = false;
  for (int i = 0; i < kAngleDraws && !placed; ++i) {
    angle = rng.uniform(0.0, 360.0);
    placed = fits(angle);
  }
  if (!placed) {
    std::vector<double> axis;
    for (double a : {0.0, 90.0, 180.0, 270.0}) {
      if (fits(a)) axis.push_back(a);
    }
    if (axis.empty()) {
      throw DataError("donor shape " + donor.describe() + " does not fit a " + std::to_string(width) + "x" +
                      std::to_string(height) + " surface at any rotation");
    }
    angle = axis[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(axis.size()) - 1))];
  }
  const RotationFrame f = rotation_frame(donor.patch.width, donor.patch.height, angle);
  const int x = static_cast<int>(rng.uniform_int(0, width - f.width));
  const int y = static_cast<int>(rng.uniform_int(0, height - f.height));
  PasteResult pr = paste(donor, surface.image, angle, x, y);

  Sample s;
  s.image = std::move(pr.image);
  s.weathered = job.weathered;
  s.masks = std::move(pr.masks);
  const auto subtract_opaque = [&](LabelMask m) {
    for (std::size_t i = 0; i < m.bits.size(); ++i) {
      if (pr.opaque.bits[i]) m.bits[i] = 0;
    }
    if (!m.empty()) s.masks.merge(m);
  };
  subtract_opaque(surface.pore_mask);
  if (job.weathered) subtract_opaque(surface.weathering_mask);

  s.annotation.image_name = "image.png";
  s.annotation.image_width = width;
  s.annotation.image_height = height;
  s.annotation.shapes = std::move(pr.shapes);
  s.extra = {{"targetClass", std::string(class_name(job.cls))},
             {"classIndex", job.local_index},
             {"donor", donor.describe()},
             {"angle", angle},
             {"position", {x, y}}};
  return s;
}

}  // namespace synthforge

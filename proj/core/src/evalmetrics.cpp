// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "synthforge/evalmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "synthforge/dataset.hpp"
#include "synthforge/image_io.hpp"
#include "synthforge/parallel.hpp"
#include "synthforge/raster.hpp"

namespace synthforge {

namespace {

void check_dims(const LabelMask& a, const LabelMask& b) {
  if (a.width != b.width || a.height != b.height) {
    throw DataError("mask dimension mismatch: " + std::to_string(a.width) + "x" + std::to_string(a.height) + " vs " +
                    std::to_string(b.width) + "x" + std::to_string(b.height));
  }
}

double ratio(std::int64_t num, std::int64_t den, bool other_empty) {
  if (den == 0) return other_empty ? 1.0 : 0.0;
  return static_cast<double>(num) / static_cast<double>(den);
}

// Order-independent sum.
double stable_sum(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return std::accumulate(v.begin(), v.end(), 0.0);
}

std::vector<ClassId> resolve_classes(const EvaluateOptions& opt) {
  if (!opt.classes.empty()) return opt.classes;
  return {foreground_classes().begin(), foreground_classes().end()};
}

nlohmann::json scores_json(const ClassScores& s) {
  return {{"iou", s.iou * 100.0}, {"f1", s.f1 * 100.0}, {"recall", s.recall * 100.0}, {"precision", s.precision * 100.0}};
}

ClassScores scores_from_json(const nlohmann::json& j) {
  return {j.at("iou").get<double>() / 100.0, j.at("f1").get<double>() / 100.0, j.at("recall").get<double>() / 100.0,
          j.at("precision").get<double>() / 100.0};
}

nlohmann::json optional_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

std::string cell(const std::optional<double>& v) { return v ? format_fixed(*v) : "n/a"; }

std::string pad_left(const std::string& s, std::size_t w) { return s.size() >= w ? s : std::string(w - s.size(), ' ') + s; }
std::string pad_right(const std::string& s, std::size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }

std::string sample_key(const std::filesystem::path& annotation, const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  if (annotation.filename() == "annotation.json") return fs::relative(annotation.parent_path(), root).generic_string();
  return fs::relative(annotation, root).replace_extension().generic_string();
}

MaskSet truth_masks(const DatasetEntry& e) { return load_entry_masks(e); }

MaskSet load_prediction(const std::filesystem::path& dir, int width, int height) {
  namespace fs = std::filesystem;
  const fs::path masks = fs::is_directory(dir / "masks") ? dir / "masks" : dir;
  MaskSet out(width, height);
  for (ClassId c : foreground_classes()) {
    const fs::path p = masks / (std::string(class_name(c)) + ".png");
    if (!fs::exists(p)) continue;
    LabelMask m = gray_to_mask(read_png_gray(p), c);
    if (m.width != width || m.height != height) {
      throw DataError(p.string() + ": prediction is " + std::to_string(m.width) + "x" + std::to_string(m.height) +
                      ", truth is " + std::to_string(width) + "x" + std::to_string(height));
    }
    out.put(std::move(m));
  }
  return out;
}

}  // namespace

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& o) {
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  tn += o.tn;
  return *this;
}

ConfusionCounts confusion(const LabelMask& pred, const LabelMask& truth) {
  check_dims(pred, truth);
  ConfusionCounts c;
  for (std::size_t i = 0; i < pred.bits.size(); ++i) {
    const bool p = pred.bits[i] != 0;
    const bool t = truth.bits[i] != 0;
    if (p && t) {
      ++c.tp;
    } else if (p) {
      ++c.fp;
    } else if (t) {
      ++c.fn;
    } else {
      ++c.tn;
    }
  }
  return c;
}

double iou_from_counts(const ConfusionCounts& c) { return ratio(c.tp, c.tp + c.fp + c.fn, true); }

Prf prf_from_counts(const ConfusionCounts& c) {
  const bool pred_empty = c.tp + c.fp == 0;
  const bool truth_empty = c.tp + c.fn == 0;
  Prf r;
  r.precision = ratio(c.tp, c.tp + c.fp, truth_empty);
  r.recall = ratio(c.tp, c.tp + c.fn, pred_empty);
  r.f1 = ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn, true);
  return r;
}

double image_class_iou(const LabelMask& pred, const LabelMask& truth) { return iou_from_counts(confusion(pred, truth)); }

Prf image_class_prf(const LabelMask& pred, const LabelMask& truth) { return prf_from_counts(confusion(pred, truth)); }

nlohmann::json MetricReport::to_json() const {
  nlohmann::json cls = nlohmann::json::object();
  for (ClassId c : classes) {
    const auto it = scores.find(c);
    cls[std::string(class_name(c))] = (it != scores.end() && it->second) ? scores_json(*it->second) : nlohmann::json();
  }
  return {{"formatVersion", kFormatVersion}, {"images", images},          {"presentOnly", present_only},
          {"label", label},                  {"classes", cls},            {"mean", scores_json(mean)}};
}

MetricReport MetricReport::from_json(const nlohmann::json& j) {
  try {
    MetricReport r;
    r.images = j.at("images").get<std::int64_t>();
    r.present_only = j.value("presentOnly", false);
    r.label = j.value("label", std::string());
    r.mean = scores_from_json(j.at("mean"));
    for (const auto& [name, v] : j.at("classes").items()) {
      const auto c = class_from_name(name);
      if (!c) throw ParseError("unknown class '" + name + "' in metric report");
      r.classes.push_back(*c);
      r.scores[*c] = v.is_null() ? std::nullopt : std::optional<ClassScores>(scores_from_json(v));
    }
    std::sort(r.classes.begin(), r.classes.end());
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed metric report: ") + e.what());
  }
}

std::string MetricReport::text_table() const {
  std::ostringstream os;
  os << pad_right("Class", 16) << pad_left("IoU", 9) << pad_left("F1", 9) << pad_left("Recall", 9)
     << pad_left("Precision", 11) << '\n';
  const auto row = [&](const std::string& name, const std::optional<ClassScores>& s) {
    os << pad_right(name, 16);
    if (s) {
      os << pad_left(format_fixed(s->iou * 100), 9) << pad_left(format_fixed(s->f1 * 100), 9)
         << pad_left(format_fixed(s->recall * 100), 9) << pad_left(format_fixed(s->precision * 100), 11);
    } else {
      os << pad_left("n/a", 9) << pad_left("n/a", 9) << pad_left("n/a", 9) << pad_left("n/a", 11);
    }
    os << '\n';
  };
  for (ClassId c : classes) {
    const auto it = scores.find(c);
    row(std::string(class_name(c)), it != scores.end() ? it->second : std::nullopt);
  }
  row("mean", mean);
  return os.str();
}

MetricReport evaluate(const std::vector<MaskSet>& preds, const std::vector<MaskSet>& truths, const EvaluateOptions& opt) {
  if (preds.size() != truths.size()) throw DataError("prediction and truth counts differ");
  const std::vector<ClassId> classes = resolve_classes(opt);
  const std::size_t n = truths.size();
  // Per image, per class: {iou, f1, recall, precision, contributes}.
  std::vector<std::vector<std::array<double, 5>>> per(n, std::vector<std::array<double, 5>>(classes.size()));
  parallel_for(n, opt.workers, [&](std::size_t i) {
    if (preds[i].width() != truths[i].width() || preds[i].height() != truths[i].height()) {
      throw DataError("image " + std::to_string(i) + ": prediction and truth dimensions differ");
    }
    for (std::size_t k = 0; k < classes.size(); ++k) {
      const LabelMask t = truths[i].get(classes[k]);
      const ConfusionCounts c = confusion(preds[i].get(classes[k]), t);
      const Prf prf = prf_from_counts(c);
      const bool contributes = !opt.present_only || c.tp + c.fn > 0;
      per[i][k] = {iou_from_counts(c), prf.f1, prf.recall, prf.precision, contributes ? 1.0 : 0.0};
    }
  });

  MetricReport r;
  r.classes = classes;
  r.images = static_cast<std::int64_t>(n);
  r.present_only = opt.present_only;
  std::array<std::vector<double>, 4> class_means;
  for (std::size_t k = 0; k < classes.size(); ++k) {
    std::array<std::vector<double>, 4> vals;
    for (std::size_t i = 0; i < n; ++i) {
      if (per[i][k][4] == 0.0) continue;
      for (int m = 0; m < 4; ++m) vals[m].push_back(per[i][k][m]);
    }
    if (vals[0].empty()) {
      r.scores[classes[k]] = std::nullopt;
      continue;
    }
    const double cnt = static_cast<double>(vals[0].size());
    ClassScores s{stable_sum(vals[0]) / cnt, stable_sum(vals[1]) / cnt, stable_sum(vals[2]) / cnt,
                  stable_sum(vals[3]) / cnt};
    r.scores[classes[k]] = s;
    class_means[0].push_back(s.iou);
    class_means[1].push_back(s.f1);
    class_means[2].push_back(s.recall);
    class_means[3].push_back(s.precision);
  }
  if (!class_means[0].empty()) {
    const double cnt = static_cast<double>(class_means[0].size());
    r.mean = {std::accumulate(class_means[0].begin(), class_means[0].end(), 0.0) / cnt,
              std::accumulate(class_means[1].begin(), class_means[1].end(), 0.0) / cnt,
              std::accumulate(class_means[2].begin(), class_means[2].end(), 0.0) / cnt,
              std::accumulate(class_means[3].begin(), class_means[3].end(), 0.0) / cnt};
  }
  return r;
}

MetricReport evaluate(const std::filesystem::path& pred_dir, const std::filesystem::path& truth_dir,
                      const EvaluateOptions& opt) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(truth_dir)) throw DataError("truth directory not found: " + truth_dir.string());
  if (!fs::is_directory(pred_dir)) throw DataError("prediction directory not found: " + pred_dir.string());
  const DatasetListing listing = list_dataset(truth_dir);
  std::vector<std::string> missing;
  for (const auto& e : listing.entries) {
    if (!fs::is_directory(pred_dir / sample_key(e.annotation, truth_dir))) missing.push_back(sample_key(e.annotation, truth_dir));
  }
  if (!missing.empty()) {
    std::string msg = "missing predictions for " + std::to_string(missing.size()) + " image(s):";
    for (const auto& m : missing) msg += " " + m;
    throw DataError(msg);
  }
  std::vector<MaskSet> truths(listing.entries.size());
  std::vector<MaskSet> preds(listing.entries.size());
  parallel_for(listing.entries.size(), opt.workers, [&](std::size_t i) {
    const auto& e = listing.entries[i];
    truths[i] = truth_masks(e);
    preds[i] = load_prediction(pred_dir / sample_key(e.annotation, truth_dir), truths[i].width(), truths[i].height());
  });
  return evaluate(preds, truths, opt);
}

std::optional<double> relative_change(double raw, double perturbed) {
  if (raw == 0.0) return std::nullopt;
  return (perturbed - raw) / raw * 100.0;
}

RobustnessReport robustness_report(const MetricReport& raw, const std::vector<MetricReport>& perturbed) {
  if (perturbed.empty()) throw ConfigError("robustness report needs at least one perturbed report");
  for (const auto& p : perturbed) {
    if (p.classes != raw.classes) throw ConfigError("perturbed report '" + p.label + "' covers a different class set");
  }
  RobustnessReport r;
  r.raw = raw.mean;
  const double n = static_cast<double>(perturbed.size());
  for (const auto& p : perturbed) {
    r.perturbed.iou += p.mean.iou / n;
    r.perturbed.f1 += p.mean.f1 / n;
    r.perturbed.recall += p.mean.recall / n;
    r.perturbed.precision += p.mean.precision / n;
  }
  r.change_iou = relative_change(r.raw.iou, r.perturbed.iou);
  r.change_f1 = relative_change(r.raw.f1, r.perturbed.f1);
  r.change_recall = relative_change(r.raw.recall, r.perturbed.recall);
  r.change_precision = relative_change(r.raw.precision, r.perturbed.precision);
  r.breakdown = perturbed;
  return r;
}

nlohmann::json RobustnessReport::to_json() const {
  nlohmann::json b = nlohmann::json::array();
  for (const auto& p : breakdown) b.push_back({{"label", p.label}, {"mean", scores_json(p.mean)}});
  return {{"formatVersion", kFormatVersion},
          {"raw", scores_json(raw)},
          {"perturbed", scores_json(perturbed)},
          {"change",
           {{"iou", optional_json(change_iou)},
            {"f1", optional_json(change_f1)},
            {"recall", optional_json(change_recall)},
            {"precision", optional_json(change_precision)}}},
          {"breakdown", b}};
}

std::string RobustnessReport::text_table() const {
  std::ostringstream os;
  os << pad_right("", 12) << pad_left("mIoU", 9) << pad_left("mF1", 9) << pad_left("mRecall", 9)
     << pad_left("mPrecision", 12) << '\n';
  const auto row = [&](const std::string& name, const ClassScores& s) {
    os << pad_right(name, 12) << pad_left(format_fixed(s.iou * 100), 9) << pad_left(format_fixed(s.f1 * 100), 9)
       << pad_left(format_fixed(s.recall * 100), 9) << pad_left(format_fixed(s.precision * 100), 12) << '\n';
  };
  row("raw", raw);
  row("perturbed", perturbed);
  os << pad_right("change %", 12) << pad_left(cell(change_iou), 9) << pad_left(cell(change_f1), 9)
     << pad_left(cell(change_recall), 9) << pad_left(cell(change_precision), 12) << '\n';
  return os.str();
}

StatsRow derive_stats_row(std::int64_t pixels, std::optional<std::int64_t> shapes, std::int64_t images) {
  StatsRow r;
  r.pixels = pixels;
  r.shapes = shapes;
  r.images = images;
  if (shapes && images > 0) r.shapes_per_image = static_cast<double>(*shapes) / static_cast<double>(images);
  if (shapes && *shapes > 0) r.pixels_per_shape = static_cast<double>(pixels) / static_cast<double>(*shapes);
  if (images > 0) r.pixels_per_image = static_cast<double>(pixels) / static_cast<double>(images);
  return r;
}

void finalize_stats_table(StatsTable& t) {
  std::int64_t shapes = 0;
  std::int64_t pixels = 0;
  for (auto& [c, r] : t.rows) {
    r = derive_stats_row(r.pixels, r.shapes, r.images);
    if (r.shapes) shapes += *r.shapes;
    pixels += r.pixels;
  }
  t.total_pixels = pixels;
  for (auto& [c, r] : t.rows) {
    r.pixel_share = pixels > 0 ? 100.0 * static_cast<double>(r.pixels) / static_cast<double>(pixels) : 0.0;
    if (r.shapes) {
      r.shape_share = shapes > 0 ? std::optional<double>(100.0 * static_cast<double>(*r.shapes) / shapes) : std::nullopt;
    }
  }
}

void accumulate_stats(StatsTable& t, const Annotation& a) {
  const int w = a.image_width;
  const int h = a.image_height;
  std::map<ClassId, std::vector<Polygon>> by_class;
  for (const auto& s : a.shapes) by_class[s.label].push_back(s.polygon);
  LabelMask fg(w, h, ClassId::Crack);
  for (const auto& [cls, polys] : by_class) {
    auto& row = t.rows[cls];
    row.shapes = row.shapes.value_or(0) + static_cast<std::int64_t>(polys.size());
    if (cls == ClassId::Background) continue;
    row.images += 1;
    const LabelMask m = rasterize_polygons(polys, w, h, cls);
    row.pixels += static_cast<std::int64_t>(m.popcount());
    fg |= m;
  }
  auto& bg = t.rows[ClassId::Background];
  const std::int64_t bg_pixels = static_cast<std::int64_t>(w) * h - static_cast<std::int64_t>(fg.popcount());
  bg.pixels += bg_pixels;
  if (bg_pixels > 0) bg.images += 1;
  t.images += 1;
}

StatsTable stats_table(const std::filesystem::path& dataset_dir) {
  StatsTable t;
  for (std::size_t i = 0; i < kNumClasses; ++i) t.rows[static_cast<ClassId>(i)].shapes = std::nullopt;
  for (ClassId c : foreground_classes()) t.rows[c].shapes = 0;
  const DatasetListing listing = list_dataset(dataset_dir);
  t.warnings = listing.warnings;
  for (const auto& e : listing.entries) {
    try {
      accumulate_stats(t, load_annotation(e.annotation));
    } catch (const Error& err) {
      t.warnings.push_back(e.annotation.string() + ": " + err.what());
    }
  }
  finalize_stats_table(t);
  return t;
}

nlohmann::json StatsTable::to_json() const {
  nlohmann::json rows_json = nlohmann::json::object();
  const auto opt_i = [](const std::optional<std::int64_t>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); };
  for (const auto& [c, r] : rows) {
    rows_json[std::string(class_name(c))] = {{"pixels", r.pixels},
                                             {"shapes", opt_i(r.shapes)},
                                             {"images", r.images},
                                             {"shapesPerImage", optional_json(r.shapes_per_image)},
                                             {"pixelsPerShape", optional_json(r.pixels_per_shape)},
                                             {"pixelsPerImage", optional_json(r.pixels_per_image)},
                                             {"shapeShare", optional_json(r.shape_share)},
                                             {"pixelShare", r.pixel_share}};
  }
  return {{"formatVersion", kFormatVersion}, {"images", images}, {"totalPixels", total_pixels},
          {"warnings", warnings},            {"classes", rows_json}};
}

std::string StatsTable::text_table() const {
  std::ostringstream os;
  const std::size_t cw = 14;
  os << pad_right("Class", 16);
  for (const char* h : {"#pixels", "#shape", "#images", "#shape/image", "#pixels/shape", "#pixels/image", "%shape", "%pixels"}) {
    os << pad_left(h, cw);
  }
  os << '\n';
  const auto g = [](const std::optional<double>& v) { return v ? format_grouped(*v) : std::string(); };
  const auto f = [](const std::optional<double>& v) { return v ? format_fixed(*v) : std::string(); };
  for (const auto& [c, r] : rows) {
    os << pad_right(std::string(class_name(c)), 16) << pad_left(format_grouped(static_cast<double>(r.pixels)), cw)
       << pad_left(r.shapes ? format_grouped(static_cast<double>(*r.shapes)) : std::string(), cw)
       << pad_left(format_grouped(static_cast<double>(r.images)), cw) << pad_left(f(r.shapes_per_image), cw)
       << pad_left(g(r.pixels_per_shape), cw) << pad_left(g(r.pixels_per_image), cw) << pad_left(f(r.shape_share), cw)
       << pad_left(format_fixed(r.pixel_share), cw) << '\n';
  }
  return os.str();
}

std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s = buf;
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string format_grouped(double v) {
  const long long n = std::llround(v);
  std::string digits = std::to_string(n < 0 ? -n : n);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i > 0 && (digits.size() - i) % 3 == 0) out += ',';
    out += digits[i];
  }
  return n < 0 ? "-" + out : out;
}

}  // namespace synthforge

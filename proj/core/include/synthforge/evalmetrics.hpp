// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "synthforge/types.hpp"

namespace synthforge {

struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;

  std::int64_t total() const { return tp + fp + fn + tn; }
  ConfusionCounts& operator+=(const ConfusionCounts& o);
};

ConfusionCounts confusion(const LabelMask& pred, const LabelMask& truth);

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// A zero denominator yields 1 when both masks are empty, else 0.
double iou_from_counts(const ConfusionCounts& c);
Prf prf_from_counts(const ConfusionCounts& c);

double image_class_iou(const LabelMask& pred, const LabelMask& truth);
Prf image_class_prf(const LabelMask& pred, const LabelMask& truth);

struct ClassScores {  // fractions in [0, 1]
  double iou = 0.0;
  double f1 = 0.0;
  double recall = 0.0;
  double precision = 0.0;
};

struct MetricReport {
  std::vector<ClassId> classes;
  std::map<ClassId, std::optional<ClassScores>> scores;  // nullopt: no image contributed
  ClassScores mean;
  std::int64_t images = 0;
  bool present_only = false;
  std::string label;  // e.g. a perturbation name

  nlohmann::json to_json() const;
  static MetricReport from_json(const nlohmann::json& j);
  /// Scores x100 with two decimals.
  std::string text_table() const;
};

struct EvaluateOptions {
  std::vector<ClassId> classes;  // empty: all foreground classes
  bool present_only = false;     // average only over images whose truth has the class
  int workers = 1;
};

/// Per class: mean over images of the image-level metric; mean row =
/// unweighted mean over classes with a score.
MetricReport evaluate(const std::vector<MaskSet>& preds, const std::vector<MaskSet>& truths,
                      const EvaluateOptions& opt = {});

/// Truth samples come from list_dataset(truth_dir); masks/ when present,
/// otherwise rasterized polygons. The prediction for a sample keyed K (its
/// directory for annotation.json layouts, else the annotation path without
/// extension) is pred_dir/K/<Class>.png or pred_dir/K/masks/<Class>.png; a
/// missing class file is an empty prediction. Throws DataError listing
/// samples with no prediction directory.
MetricReport evaluate(const std::filesystem::path& pred_dir, const std::filesystem::path& truth_dir,
                      const EvaluateOptions& opt = {});

/// (perturbed - raw) / raw * 100; nullopt when raw is 0.
std::optional<double> relative_change(double raw, double perturbed);

struct RobustnessReport {
  ClassScores raw;
  ClassScores perturbed;  // uniform mean over perturbation reports
  std::optional<double> change_iou, change_f1, change_recall, change_precision;
  std::vector<MetricReport> breakdown;

  nlohmann::json to_json() const;
  std::string text_table() const;
};

RobustnessReport robustness_report(const MetricReport& raw, const std::vector<MetricReport>& perturbed);

struct StatsRow {
  std::int64_t pixels = 0;
  std::optional<std::int64_t> shapes;  // Background: only when annotated
  std::int64_t images = 0;
  std::optional<double> shapes_per_image;
  std::optional<double> pixels_per_shape;
  std::optional<double> pixels_per_image;
  std::optional<double> shape_share;  // percent
  double pixel_share = 0.0;           // percent
};

StatsRow derive_stats_row(std::int64_t pixels, std::optional<std::int64_t> shapes, std::int64_t images);

struct StatsTable {
  std::map<ClassId, StatsRow> rows;  // all 20 classes
  std::int64_t total_pixels = 0;
  std::int64_t images = 0;
  std::vector<std::string> warnings;

  nlohmann::json to_json() const;
  std::string text_table() const;
};

/// Builds shares from raw per-class counts (shares over all classes present).
void finalize_stats_table(StatsTable& t);

/// Native-resolution counts; Background pixels = image area minus the
/// foreground union.
StatsTable stats_table(const std::filesystem::path& dataset_dir);
void accumulate_stats(StatsTable& t, const Annotation& a);

/// Fixed two-decimal formatting; integers use thousands separators.
std::string format_fixed(double v, int decimals = 2);
std::string format_grouped(double v);

}  // namespace synthforge

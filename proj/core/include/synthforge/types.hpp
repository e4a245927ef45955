// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace synthforge {

/// Base error for all library failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input documents (JSON syntax, schema violations).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Missing or inconsistent data on disk.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Invalid parameters or configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Stable integer codes; Background is 0 and derived, never stored as a mask.
enum class ClassId : std::uint8_t {
  Background = 0,
  Crack,
  ACrack,
  Efflorescence,
  Rockpocket,
  WConccor,
  Hollowareas,
  Cavity,
  Spalling,
  Restformwork,
  Wetspot,
  Rust,
  Graffiti,
  Weathering,
  ExposedRebars,
  Bearing,
  EJoint,
  Drainage,
  PEquipment,
  JTape,
};

inline constexpr std::size_t kNumClasses = 20;
inline constexpr std::size_t kNumForegroundClasses = 19;

std::string_view class_name(ClassId id);
/// Exact, case-sensitive name lookup. Returns nullopt for unknown names.
std::optional<ClassId> class_from_name(std::string_view name);
/// All 19 foreground classes in code order.
std::span<const ClassId> foreground_classes();

constexpr int class_index(ClassId id) { return static_cast<int>(id); }

/// Interleaved RGB, 8 bits per channel, row-major.
struct ImageBuffer {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  ImageBuffer() = default;
  ImageBuffer(int w, int h, std::uint8_t fill = 0);

  static constexpr int channels = 3;

  std::uint8_t& at(int x, int y, int c) {
    return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }
  std::uint8_t at(int x, int y, int c) const {
    return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }

  friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;
};

/// Single-channel 8-bit raster.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0);

  std::uint8_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

/// Binary per-pixel membership for one foreground class.
struct LabelMask {
  int width = 0;
  int height = 0;
  ClassId cls = ClassId::Crack;
  std::vector<std::uint8_t> bits;  // 0 or 1

  LabelMask() = default;
  LabelMask(int w, int h, ClassId c = ClassId::Crack);

  bool get(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
  void set(int x, int y, bool v = true) {
    bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0;
  }
  bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }

  std::size_t popcount() const;
  bool empty() const { return popcount() == 0; }

  LabelMask& operator|=(const LabelMask& other);
  LabelMask& operator&=(const LabelMask& other);

  friend bool operator==(const LabelMask&, const LabelMask&) = default;
};

/// Multi-label ground truth: foreground masks that may overlap. An absent class
/// is equivalent to an all-zero mask.
class MaskSet {
 public:
  MaskSet() = default;
  MaskSet(int w, int h) : width_(w), height_(h) {}

  int width() const { return width_; }
  int height() const { return height_; }

  /// Inserts or replaces. Throws on dimension mismatch or Background.
  void put(LabelMask mask);
  /// ORs into an existing mask (inserting if absent).
  void merge(const LabelMask& mask);
  void erase(ClassId cls) { masks_.erase(cls); }

  bool contains(ClassId cls) const { return masks_.count(cls) != 0; }
  const LabelMask* find(ClassId cls) const;
  /// The stored mask, or an all-zero mask of matching size.
  LabelMask get(ClassId cls) const;
  LabelMask union_all() const;

  const std::map<ClassId, LabelMask>& masks() const { return masks_; }
  std::size_t size() const { return masks_.size(); }

  friend bool operator==(const MaskSet&, const MaskSet&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::map<ClassId, LabelMask> masks_;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

/// Implicitly closed polygon.
struct Polygon {
  std::vector<Point> points;
  friend bool operator==(const Polygon&, const Polygon&) = default;
};

struct Shape {
  ClassId label = ClassId::Crack;
  Polygon polygon;
  friend bool operator==(const Shape&, const Shape&) = default;
};

struct Annotation {
  std::string image_name;
  int image_width = 0;
  int image_height = 0;
  std::vector<Shape> shapes;
  friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct BoundingBox {
  int x0 = 0;  // inclusive
  int y0 = 0;
  int x1 = 0;  // exclusive
  int y1 = 0;

  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  bool empty() const { return x1 <= x0 || y1 <= y0; }
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

}  // namespace synthforge

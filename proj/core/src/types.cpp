// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "synthforge/types.hpp"

#include <algorithm>
#include <numeric>

namespace synthforge {

namespace {

constexpr std::array<std::string_view, kNumClasses> kClassNames = {
    "Background", "Crack",        "ACrack",     "Efflorescence", "Rockpocket",
    "WConccor",   "Hollowareas",  "Cavity",     "Spalling",      "Restformwork",
    "Wetspot",    "Rust",         "Graffiti",   "Weathering",    "ExposedRebars",
    "Bearing",    "EJoint",       "Drainage",   "PEquipment",    "JTape",
};

constexpr std::array<ClassId, kNumForegroundClasses> kForeground = [] {
  std::array<ClassId, kNumForegroundClasses> out{};
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<ClassId>(i + 1);
  return out;
}();

}  // namespace

std::string_view class_name(ClassId id) { return kClassNames.at(static_cast<std::size_t>(id)); }

std::optional<ClassId> class_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kClassNames.size(); ++i) {
    if (kClassNames[i] == name) return static_cast<ClassId>(i);
  }
  return std::nullopt;
}

std::span<const ClassId> foreground_classes() { return kForeground; }

ImageBuffer::ImageBuffer(int w, int h, std::uint8_t fill) : width(w), height(h) {
  if (w < 1 || h < 1) throw ConfigError("image dimensions must be >= 1");
  data.assign(static_cast<std::size_t>(w) * h * 3, fill);
}

GrayImage::GrayImage(int w, int h, std::uint8_t fill) : width(w), height(h) {
  if (w < 1 || h < 1) throw ConfigError("image dimensions must be >= 1");
  data.assign(static_cast<std::size_t>(w) * h, fill);
}

LabelMask::LabelMask(int w, int h, ClassId c) : width(w), height(h), cls(c) {
  if (w < 1 || h < 1) throw ConfigError("mask dimensions must be >= 1");
  bits.assign(static_cast<std::size_t>(w) * h, 0);
}

std::size_t LabelMask::popcount() const {
  return static_cast<std::size_t>(std::count_if(bits.begin(), bits.end(), [](auto b) { return b != 0; }));
}

LabelMask& LabelMask::operator|=(const LabelMask& other) {
  if (other.width != width || other.height != height) throw Error("mask dimension mismatch");
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = (bits[i] | other.bits[i]) ? 1 : 0;
  return *this;
}

LabelMask& LabelMask::operator&=(const LabelMask& other) {
  if (other.width != width || other.height != height) throw Error("mask dimension mismatch");
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = (bits[i] && other.bits[i]) ? 1 : 0;
  return *this;
}

void MaskSet::put(LabelMask mask) {
  if (mask.cls == ClassId::Background) throw Error("Background is derived and cannot be stored");
  if (masks_.empty() && width_ == 0 && height_ == 0) {
    width_ = mask.width;
    height_ = mask.height;
  }
  if (mask.width != width_ || mask.height != height_) {
    throw DataError("mask '" + std::string(class_name(mask.cls)) + "' is " + std::to_string(mask.width) + "x" +
                    std::to_string(mask.height) + ", expected " + std::to_string(width_) + "x" +
                    std::to_string(height_));
  }
  const ClassId cls = mask.cls;
  masks_.insert_or_assign(cls, std::move(mask));
}

void MaskSet::merge(const LabelMask& mask) {
  auto it = masks_.find(mask.cls);
  if (it == masks_.end()) {
    put(mask);
    return;
  }
  it->second |= mask;
}

const LabelMask* MaskSet::find(ClassId cls) const {
  auto it = masks_.find(cls);
  return it == masks_.end() ? nullptr : &it->second;
}

LabelMask MaskSet::get(ClassId cls) const {
  if (const auto* m = find(cls)) return *m;
  return LabelMask(width_, height_, cls);
}

LabelMask MaskSet::union_all() const {
  LabelMask out(width_, height_, ClassId::Crack);
  for (const auto& [cls, m] : masks_) out |= m;
  return out;
}

}  // namespace synthforge

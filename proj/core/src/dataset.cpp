// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "synthforge/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "synthforge/image_io.hpp"
#include "synthforge/raster.hpp"

namespace synthforge {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw DataError("write failed for '" + path.string() + "'");
}

}  // namespace

json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t offset = e.byte == 0 ? 0 : e.byte - 1;
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(what + ": malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(col) +
                     " (byte " + std::to_string(e.byte) + ")");
  }
}

json read_json_file(const fs::path& path) { return parse_json_text(read_text(path), "'" + path.string() + "'"); }

void write_json_file(const json& j, const fs::path& path) { write_text(path, j.dump(2) + "\n"); }

Annotation annotation_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("annotation must be a JSON object");
  Annotation a;
  try {
    if (j.contains("formatVersion") && j.at("formatVersion").get<std::string>() != kFormatVersion) {
      throw ParseError("unsupported annotation formatVersion '" + j.at("formatVersion").get<std::string>() + "'");
    }
    a.image_name = j.at("imageName").get<std::string>();
    const auto w = j.at("imageWidth").get<long long>();
    const auto h = j.at("imageHeight").get<long long>();
    if (w < 0 || h < 0) throw ParseError("negative image dimensions in annotation for '" + a.image_name + "'");
    if (w == 0 || h == 0) throw ParseError("zero image dimensions in annotation for '" + a.image_name + "'");
    a.image_width = static_cast<int>(w);
    a.image_height = static_cast<int>(h);
    if (j.contains("shapes")) {
      for (const auto& s : j.at("shapes")) {
        const auto label = s.at("label").get<std::string>();
        const auto cls = class_from_name(label);
        if (!cls) throw ParseError("unknown label '" + label + "'");
        Shape shape{*cls, {}};
        for (const auto& p : s.at("points")) {
          if (!p.is_array() || p.size() != 2) throw ParseError("points must be [x, y] pairs");
          const double x = p.at(0).get<double>();
          const double y = p.at(1).get<double>();
          if (!std::isfinite(x) || !std::isfinite(y)) throw ParseError("non-finite coordinate");
          shape.polygon.points.push_back({x, y});
        }
        if (shape.polygon.points.size() < 3) throw ParseError("shape '" + label + "' has fewer than 3 points");
        shape.polygon = clamp_polygon(shape.polygon, a.image_width, a.image_height);
        a.shapes.push_back(std::move(shape));
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("annotation schema error: ") + e.what());
  }
  return a;
}

json annotation_to_json(const Annotation& a) {
  json shapes = json::array();
  for (const auto& s : a.shapes) {
    json pts = json::array();
    for (const auto& p : s.polygon.points) pts.push_back({p.x, p.y});
    shapes.push_back({{"label", std::string(class_name(s.label))}, {"points", std::move(pts)}});
  }
  return {{"formatVersion", kFormatVersion},
          {"imageName", a.image_name},
          {"imageWidth", a.image_width},
          {"imageHeight", a.image_height},
          {"shapes", std::move(shapes)}};
}

Annotation load_annotation(const fs::path& path) {
  const json j = read_json_file(path);
  try {
    return annotation_from_json(j);
  } catch (const ParseError& e) {
    throw ParseError("'" + path.string() + "': " + e.what());
  }
}

void save_annotation(const Annotation& a, const fs::path& path) { write_json_file(annotation_to_json(a), path); }

void save_maskset(const MaskSet& m, const fs::path& dir) {
  fs::create_directories(dir);
  for (const auto& [cls, mask] : m.masks()) {
    write_png(mask_to_gray(mask), dir / (std::string(class_name(cls)) + ".png"));
  }
}

MaskSet load_maskset(const fs::path& dir) {
  MaskSet out;
  if (!fs::is_directory(dir)) return out;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".png") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    const auto cls = class_from_name(f.stem().string());
    if (!cls || *cls == ClassId::Background) continue;
    LabelMask mask = gray_to_mask(read_png_gray(f), *cls);
    if (out.size() > 0 && (mask.width != out.width() || mask.height != out.height())) {
      throw DataError("'" + f.string() + "' is " + std::to_string(mask.width) + "x" + std::to_string(mask.height) +
                      " but other masks in '" + dir.string() + "' are " + std::to_string(out.width()) + "x" +
                      std::to_string(out.height()));
    }
    if (out.size() == 0) out = MaskSet(mask.width, mask.height);
    out.put(std::move(mask));
  }
  return out;
}

std::string sample_dir_name(std::uint64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%05llu", static_cast<unsigned long long>(index));
  return buf;
}

void write_sample(const Sample& s, const SampleProvenance& prov, const fs::path& dir) {
  fs::create_directories(dir);
  const fs::path manifest_path = dir / "manifest.json";
  fs::remove(manifest_path);
  write_png(s.image, dir / "image.png");
  Annotation ann = s.annotation;
  ann.image_name = "image.png";
  save_annotation(ann, dir / "annotation.json");
  fs::remove_all(dir / "masks");
  save_maskset(s.masks, dir / "masks");

  json masks = json::array();
  for (const auto& [cls, m] : s.masks.masks()) masks.push_back("masks/" + std::string(class_name(cls)) + ".png");
  json manifest = {
      {"formatVersion", kFormatVersion},
      {"toolVersion", kToolVersion},
      {"extension", prov.extension},
      {"masterSeed", prov.master_seed},
      {"sampleIndex", prov.sample_index},
      {"configHash", prov.config_hash},
      {"image", "image.png"},
      {"annotation", "annotation.json"},
      {"masks", masks},
      {"weathered", s.weathered},
      {"warnings", s.warnings},
  };
  for (const auto& [k, v] : s.extra.items()) manifest[k] = v;
  write_json_file(manifest, manifest_path);
}

bool sample_complete(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  if (!fs::is_regular_file(manifest_path)) return false;
  try {
    const json m = read_json_file(manifest_path);
    if (!fs::is_regular_file(dir / m.at("image").get<std::string>())) return false;
    if (!fs::is_regular_file(dir / m.at("annotation").get<std::string>())) return false;
    for (const auto& f : m.at("masks")) {
      if (!fs::is_regular_file(dir / f.get<std::string>())) return false;
    }
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

DatasetListing list_dataset(const fs::path& root) {
  DatasetListing out;
  if (!fs::is_directory(root)) throw DataError("dataset root '" + root.string() + "' is not a directory");
  std::vector<fs::path> candidates;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file() || e.path().extension() != ".json") continue;
    const auto name = e.path().filename().string();
    if (name == "manifest.json" || name == "plan.json") continue;
    candidates.push_back(e.path());
  }
  std::sort(candidates.begin(), candidates.end());
  for (const auto& path : candidates) {
    json j;
    try {
      j = read_json_file(path);
    } catch (const Error& e) {
      out.warnings.push_back(e.what());
      continue;
    }
    if (!j.is_object() || !j.contains("imageName") || !j["imageName"].is_string()) continue;
    const auto image_name = j["imageName"].get<std::string>();
    DatasetEntry entry{path, {}, std::nullopt};
    const fs::path parent = path.parent_path();
    for (const fs::path& cand : {parent / image_name, parent.parent_path() / "images" / image_name}) {
      if (fs::is_regular_file(cand)) {
        entry.image = cand;
        break;
      }
    }
    if (entry.image.empty()) {
      out.warnings.push_back("'" + path.string() + "': image '" + image_name + "' not found");
      continue;
    }
    if (path.filename() == "annotation.json" && fs::is_directory(parent / "masks")) entry.masks_dir = parent / "masks";
    out.entries.push_back(std::move(entry));
  }
  return out;
}

MaskSet annotation_masks(const Annotation& a, int width, int height) {
  const double sx = static_cast<double>(width) / a.image_width;
  const double sy = static_cast<double>(height) / a.image_height;
  std::map<ClassId, std::vector<Polygon>> by_class;
  for (const auto& s : a.shapes) {
    if (s.label == ClassId::Background) continue;
    by_class[s.label].push_back(sx == 1.0 && sy == 1.0 ? s.polygon : scale_polygon(s.polygon, sx, sy));
  }
  MaskSet m(width, height);
  for (const auto& [cls, polys] : by_class) m.put(rasterize_polygons(polys, width, height, cls));
  return m;
}

MaskSet load_entry_masks(const DatasetEntry& e) {
  if (e.masks_dir) {
    MaskSet m = load_maskset(*e.masks_dir);
    if (m.width() > 0) return m;
  }
  const Annotation a = load_annotation(e.annotation);
  return annotation_masks(a, a.image_width, a.image_height);
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace synthforge

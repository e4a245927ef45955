// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "synthforge/dataset.hpp"
#include "synthforge/image_io.hpp"
#include "toy_data.hpp"

namespace sf = synthforge;
namespace st = synthforge::testing;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json good_doc() {
  return json::parse(R"({"imageName":"a.png","imageWidth":100,"imageHeight":50,
    "shapes":[{"label":"Crack","points":[[1,1],[10,1],[10,10]]}]})");
}

}  // namespace

TEST(Annotation, ParsesAndRoundTrips) {
  const auto a = sf::annotation_from_json(good_doc());
  EXPECT_EQ(a.image_name, "a.png");
  EXPECT_EQ(a.image_width, 100);
  ASSERT_EQ(a.shapes.size(), 1u);
  EXPECT_EQ(a.shapes[0].label, sf::ClassId::Crack);
  EXPECT_EQ(sf::annotation_from_json(sf::annotation_to_json(a)), a);
}

TEST(Annotation, ClampsOutOfFrameVertices) {
  auto j = good_doc();
  j["shapes"][0]["points"][1] = {250.0, -4.0};
  const auto a = sf::annotation_from_json(j);
  EXPECT_EQ(a.shapes[0].polygon.points[1], (sf::Point{100.0, 0.0}));
}

TEST(Annotation, RejectsInvalidDocuments) {
  auto few = good_doc();
  few["shapes"][0]["points"].erase(2);
  EXPECT_THROW(sf::annotation_from_json(few), sf::ParseError);
  auto label = good_doc();
  label["shapes"][0]["label"] = "Pothole";
  EXPECT_THROW(sf::annotation_from_json(label), sf::ParseError);
  auto zero = good_doc();
  zero["imageWidth"] = 0;
  EXPECT_THROW(sf::annotation_from_json(zero), sf::ParseError);
  auto neg = good_doc();
  neg["imageHeight"] = -2;
  EXPECT_THROW(sf::annotation_from_json(neg), sf::ParseError);
  auto missing = good_doc();
  missing.erase("imageName");
  EXPECT_THROW(sf::annotation_from_json(missing), sf::ParseError);
  auto version = good_doc();
  version["formatVersion"] = "9";
  EXPECT_THROW(sf::annotation_from_json(version), sf::ParseError);
  EXPECT_THROW(sf::parse_json_text("{\"a\": ", "x"), sf::ParseError);
}

TEST(Annotation, EmptyShapeListIsValid) {
  auto j = good_doc();
  j["shapes"] = json::array();
  EXPECT_TRUE(sf::annotation_from_json(j).shapes.empty());
}

TEST(Samples, WriteThenCompleteAndResumeDetection) {
  st::TempDir tmp;
  sf::Sample s;
  s.image = sf::ImageBuffer(8, 8, 100);
  s.masks = sf::MaskSet(8, 8);
  sf::LabelMask m(8, 8, sf::ClassId::Cavity);
  m.set(3, 3);
  s.masks.put(m);
  s.annotation = {"image.png", 8, 8, {{sf::ClassId::Cavity, {{{3, 3}, {4, 3}, {4, 4}}}}}};
  s.extra = {{"custom", 5}};
  const fs::path dir = tmp / sf::sample_dir_name(7);
  EXPECT_EQ(dir.filename(), "00007");
  EXPECT_FALSE(sf::sample_complete(dir));
  sf::write_sample(s, {"synthcavity", 1, 7, "abc"}, dir);
  EXPECT_TRUE(sf::sample_complete(dir));
  const auto manifest = sf::read_json_file(dir / "manifest.json");
  EXPECT_EQ(manifest["custom"], 5);
  EXPECT_EQ(manifest["sampleIndex"], 7);
  EXPECT_EQ(sf::load_maskset(dir / "masks").get(sf::ClassId::Cavity), m);
  fs::remove(dir / "masks" / "Cavity.png");
  EXPECT_FALSE(sf::sample_complete(dir));
}

TEST(Listing, FindsBothLayoutsAndSkipsManifests) {
  st::TempDir tmp;
  st::write_toy_dataset(tmp.path(), {.images = 3, .width = 32, .height = 32, .seed = 4});
  sf::Sample s;
  s.image = sf::ImageBuffer(8, 8);
  s.masks = sf::MaskSet(8, 8);
  s.annotation = {"image.png", 8, 8, {}};
  sf::write_sample(s, {"x", 0, 0, "h"}, tmp / "gen" / "00000");
  sf::write_json_file({{"imageName", "ghost.png"}}, tmp / "orphan.json");
  sf::write_json_file({{"other", 1}}, tmp / "plain.json");

  const auto l = sf::list_dataset(tmp.path());
  ASSERT_EQ(l.entries.size(), 4u);
  int with_masks = 0;
  for (const auto& e : l.entries) {
    EXPECT_TRUE(fs::is_regular_file(e.image));
    with_masks += e.masks_dir.has_value();
  }
  EXPECT_EQ(with_masks, 1);
  ASSERT_EQ(l.warnings.size(), 1u);
  EXPECT_NE(l.warnings[0].find("ghost.png"), std::string::npos);
  EXPECT_THROW(sf::list_dataset(tmp / "missing"), sf::DataError);
}

TEST(Hashing, Fnv1aKnownVectors) {
  EXPECT_EQ(sf::fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(sf::fnv1a_hex("a"), "af63dc4c8601ec8c");
}

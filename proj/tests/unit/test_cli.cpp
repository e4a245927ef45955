// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "synthforge/cli/commands.hpp"
#include "synthforge/cli/config.hpp"
#include "synthforge/cli/preview.hpp"
#include "synthforge/dataset.hpp"
#include "synthforge/image_io.hpp"
#include "toy_data.hpp"

namespace sf = synthforge;
namespace cli = synthforge::cli;
namespace st = synthforge::testing;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "synthforge");
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, HelpAndUsageErrors) {
  const auto help = run({"--help"});
  EXPECT_EQ(help.code, cli::kExitOk);
  EXPECT_NE(help.out.find("gen"), std::string::npos);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kExitConfig);
  EXPECT_EQ(run({"gen"}).code, cli::kExitConfig);
  st::TempDir tmp;
  EXPECT_EQ(run({"gen", "synthwhatever", "--out", tmp.path().string(), "-n", "1"}).code, cli::kExitConfig);
}

TEST(Cli, GenResumeSkipsCompleteSamples) {
  st::TempDir tmp;
  const auto out = tmp / "cav";
  const auto first = run({"gen", "synthcavity", "--out", out.string(), "-n", "4", "--seed", "3", "--resolution", "96"});
  ASSERT_EQ(first.code, 0) << first.err;
  for (int i = 0; i < 4; ++i) EXPECT_TRUE(sf::sample_complete(out / sf::sample_dir_name(i)));
  EXPECT_TRUE(fs::is_regular_file(out / "plan.json"));
  EXPECT_TRUE(fs::is_regular_file(out / "manifest.json"));
  const auto image_before = sf::read_png_rgb(out / "00002" / "image.png");
  fs::remove(out / "00002" / "manifest.json");
  const auto second = run({"gen", "synthcavity", "--out", out.string(), "-n", "4", "--seed", "3", "--resolution", "96"});
  ASSERT_EQ(second.code, 0);
  EXPECT_NE(second.out.find("generated 1 sample(s), skipped 3"), std::string::npos) << second.out;
  EXPECT_EQ(sf::read_png_rgb(out / "00002" / "image.png"), image_before);
}

TEST(Cli, DaclonsynthWithoutDatasetIsDataError) {
  st::TempDir tmp;
  const auto r = run({"gen", "daclonsynth", "--out", (tmp / "d").string(), "-n", "2"});
  EXPECT_EQ(r.code, cli::kExitData);
  EXPECT_NE(r.err.find("event="), std::string::npos);
  EXPECT_EQ(run({"gen", "daclonsynth", "--out", (tmp / "d").string(), "-n", "2", "--dataset", (tmp / "nope").string()})
                .code,
            cli::kExitData);
}

TEST(Cli, DaclonsynthPlanAndGenerate) {
  st::TempDir tmp;
  st::write_toy_dataset(tmp / "real", {.images = 12, .width = 128, .height = 128, .seed = 6});
  const auto plan = run({"plan", "--dataset", (tmp / "real").string(), "-n", "10", "--resolution", "128"});
  ASSERT_EQ(plan.code, 0) << plan.err;
  const auto j = nlohmann::json::parse(plan.out);
  std::int64_t total = 0;
  for (const auto& c : j["classes"]) total += c["allocated"].get<std::int64_t>();
  EXPECT_EQ(total, 10);
  const auto gen = run({"gen", "daclonsynth", "--dataset", (tmp / "real").string(), "-n", "10", "--resolution", "128",
                        "--out", (tmp / "syn").string()});
  ASSERT_EQ(gen.code, 0) << gen.err;
  EXPECT_TRUE(sf::sample_complete(tmp / "syn" / "00009"));
}

TEST(Cli, ConfigRejectsUnknownKeysAndBadValues) {
  st::TempDir tmp;
  sf::write_json_file({{"masterSeed", 1}, {"bogus", 2}}, tmp / "a.json");
  EXPECT_THROW(cli::load_run_config(tmp / "a.json"), sf::ConfigError);
  EXPECT_EQ(run({"gen", "synthcrack", "--config", (tmp / "a.json").string(), "--out", (tmp / "o").string()}).code,
            cli::kExitConfig);
  sf::write_json_file({{"synthcrack", {{"samples", 4}, {"targetShapes", 2}}}}, tmp / "b.json");
  EXPECT_EQ(run({"gen", "synthcrack", "--config", (tmp / "b.json").string(), "--out", (tmp / "o").string()}).code,
            cli::kExitConfig);
  cli::RunConfig c;
  c.workers = 1;
  cli::RunConfig d = c;
  d.workers = 8;
  EXPECT_EQ(c.hash(), d.hash());
  d.master_seed = 1;
  EXPECT_NE(c.hash(), d.hash());
  EXPECT_EQ(cli::RunConfig::from_json(c.to_json()).to_json(), c.to_json());
}

TEST(Cli, WorkerResolutionOrder) {
  ::unsetenv("SYNTHFORGE_WORKERS");
  EXPECT_EQ(cli::resolve_workers(3, std::nullopt), 3);
  ::setenv("SYNTHFORGE_WORKERS", "5", 1);
  EXPECT_EQ(cli::resolve_workers(3, std::nullopt), 5);
  EXPECT_EQ(cli::resolve_workers(3, 2), 2);
  ::unsetenv("SYNTHFORGE_WORKERS");
}

TEST(Cli, PreviewLegendListsPresentClasses) {
  st::TempDir tmp;
  // The default pixel budget is sized for 512 x 512.
  sf::write_json_file({{"resolution", 128}, {"synthcrack", {{"pixelsPerShape", 400}}}}, tmp / "cfg.json");
  const auto gen = run({"gen", "synthcrack", "--config", (tmp / "cfg.json").string(), "--out", (tmp / "c").string(), "-n", "2"});
  ASSERT_EQ(gen.code, 0) << gen.err;
  const auto r = run({"preview", (tmp / "c" / "00000").string(), (tmp / "p.png").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("Crack"), std::string::npos);
  const auto img = sf::read_png_rgb(tmp / "p.png");
  EXPECT_EQ(img.width, 128);
  EXPECT_GT(img.height, 128);

  const sf::ImageBuffer base(16, 16, 50);
  const auto plain = cli::render_preview(base, sf::MaskSet(16, 16));
  EXPECT_EQ(plain.image, base);
  EXPECT_TRUE(plain.legend.empty());
  sf::MaskSet ms(16, 16);
  sf::LabelMask m(16, 16, sf::ClassId::Rust);
  m.set(3, 3);
  ms.put(m);
  const auto p = cli::render_preview(base, ms);
  EXPECT_EQ(p.legend, std::vector<sf::ClassId>{sf::ClassId::Rust});
  EXPECT_EQ(p.image.height, 16 + cli::kLegendRow + 4);
  EXPECT_NE(p.image.at(3, 3, 0), 50);
  EXPECT_EQ(p.image.at(4, 4, 0), 50);
}

TEST(Cli, StatsEvaluateAndReportRoundTrip) {
  st::TempDir tmp;
  st::write_toy_dataset(tmp / "real", {.images = 3, .width = 48, .height = 48, .seed = 1});
  const auto stats = run({"stats", "--dataset", (tmp / "real").string(), "--out", (tmp / "s.json").string()});
  ASSERT_EQ(stats.code, 0) << stats.err;
  EXPECT_NE(stats.out.find("Spalling"), std::string::npos);
  for (int i = 0; i < 3; ++i) {
    char name[16];
    std::snprintf(name, sizeof name, "img_%03d", i);
    const auto a = sf::load_annotation(tmp / "real" / "annotations" / (std::string(name) + ".json"));
    sf::save_maskset(sf::annotation_masks(a, 48, 48), tmp / "pred" / "annotations" / name);
  }
  ASSERT_EQ(run({"evaluate", "--pred", (tmp / "pred").string(), "--truth", (tmp / "real").string(), "--out",
                 (tmp / "raw.json").string()})
                .code,
            0);
  ASSERT_EQ(run({"evaluate", "--pred", (tmp / "pred").string(), "--truth", (tmp / "real").string(), "--out",
                 (tmp / "fog.json").string(), "--label", "fog"})
                .code,
            0);
  const auto rep = run({"report", "--raw", (tmp / "raw.json").string(), "--perturbed", (tmp / "fog.json").string()});
  ASSERT_EQ(rep.code, 0) << rep.err;
  EXPECT_NE(rep.out.find("0.00"), std::string::npos);
  EXPECT_EQ(run({"evaluate", "--pred", (tmp / "none").string(), "--truth", (tmp / "real").string()}).code,
            cli::kExitData);
}

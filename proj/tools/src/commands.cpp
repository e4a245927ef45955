// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "synthforge/cli/commands.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/null_sink.h>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <ostream>

#include "synthforge/cavitygen.hpp"
#include "synthforge/cli/preview.hpp"
#include "synthforge/compositor.hpp"
#include "synthforge/crackgen.hpp"
#include "synthforge/dataset.hpp"
#include "synthforge/evalmetrics.hpp"
#include "synthforge/finecrack.hpp"
#include "synthforge/image_io.hpp"
#include "synthforge/parallel.hpp"
#include "synthforge/perturb.hpp"

namespace synthforge::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::shared_ptr<spdlog::logger> g_log = spdlog::null_logger_mt("synthforge-null");

struct DaclonsynthSetup {
  ClassStats stats;
  std::map<ClassId, std::vector<DonorCrop>> donors;
  std::map<ClassId, ClassYield> yields;
  AllocationPlan plan;
  std::vector<std::string> warnings;

  json to_json(const RunConfig& cfg) const {
    json y = json::object();
    json counts = json::object();
    for (const auto& [c, v] : yields) {
      y[std::string(class_name(c))] = {{"pixelsPerSample", v.pixels_per_sample},
                                       {"shapesPerSample", v.shapes_per_sample}};
    }
    for (const auto& [c, v] : donors) counts[std::string(class_name(c))] = v.size();
    return {{"formatVersion", kFormatVersion},
            {"toolVersion", kToolVersion},
            {"extension", "daclonsynth"},
            {"configHash", cfg.hash()},
            {"masterSeed", cfg.master_seed},
            {"averageScope", cfg.daclonsynth.scope == AverageScope::TargetClasses ? "target" : "all"},
            {"stats", stats.to_json()},
            {"donors", counts},
            {"yields", y},
            {"plan", plan.to_json()},
            {"warnings", warnings}};
  }
};

DaclonsynthSetup setup_daclonsynth(const RunConfig& cfg) {
  if (cfg.dataset_root.empty()) throw DataError("daclonsynth needs a real dataset root (dataset.root or --dataset)");
  if (!fs::is_directory(cfg.dataset_root)) throw DataError("dataset root not found: " + cfg.dataset_root);
  DaclonsynthSetup s;
  s.stats = compute_class_stats(cfg.dataset_root, cfg.resolution);
  for (ClassId c : kTargetClasses) {
    s.donors[c] = extract_donor_crops(cfg.dataset_root, c, cfg.resolution, &s.warnings);
    if (!s.donors[c].empty()) s.yields[c] = measure_yield(s.donors[c]);
  }
  try {
    s.plan = plan_allocation(s.stats, cfg.daclonsynth.samples, s.yields, cfg.daclonsynth.scope);
  } catch (const ConfigError& e) {
    // A deficit class without donors is a data problem, not a config one.
    if (std::string(e.what()).rfind("no positive donor yield", 0) == 0) throw DataError(e.what());
    throw;
  }
  for (const auto& e : s.plan.entries) {
    if (e.allocated > 0 && s.donors[e.cls].empty()) {
      throw DataError("no donor crops for demanded class " + std::string(class_name(e.cls)));
    }
  }
  return s;
}

void write_run_manifest(const std::string& ext, const RunConfig& cfg, std::int64_t n, const fs::path& out_dir) {
  json c = cfg.to_json();
  c.erase("workers");
  write_json_file({{"formatVersion", kFormatVersion},
                   {"toolVersion", kToolVersion},
                   {"extension", ext},
                   {"configHash", cfg.hash()},
                   {"masterSeed", cfg.master_seed},
                   {"samples", n},
                   {"config", c}},
                  out_dir / "manifest.json");
}

std::string output_key(const fs::path& file, const fs::path& root, const std::map<std::string, int>& uses) {
  std::string key = file.stem().string();
  if (uses.at(key) > 1) {
    key = fs::relative(file, root).replace_extension().generic_string();
    std::replace(key.begin(), key.end(), '/', '_');
  }
  return key;
}

std::vector<ClassId> parse_classes(const std::string& spec) {
  if (spec == "all") return {foreground_classes().begin(), foreground_classes().end()};
  std::vector<ClassId> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = spec.find(',', pos);
    const std::string tok = spec.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    const auto c = class_from_name(tok);
    if (!c || *c == ClassId::Background) throw ConfigError("unknown class '" + tok + "'");
    out.push_back(*c);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = s.find(',', pos);
    out.push_back(s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

nlohmann::json plan_daclonsynth(const RunConfig& cfg) { return setup_daclonsynth(cfg).to_json(cfg); }

GenResult generate(const std::string& extension, const RunConfig& cfg, const fs::path& out_dir, int workers) {
  if (extension != "daclonsynth" && extension != "synthcrack" && extension != "synthcavity") {
    throw ConfigError("unknown extension '" + extension + "' (daclonsynth, synthcrack, synthcavity)");
  }
  cfg.validate();
  const int res = cfg.resolution;
  const std::string hash = cfg.hash();
  std::function<Sample(std::uint64_t)> make;
  json plan;
  std::int64_t n = 0;

  // Captured by the sample lambdas; must outlive the parallel loop.
  std::shared_ptr<DaclonsynthSetup> dsetup;
  std::shared_ptr<std::vector<DaclonsynthJob>> jobs;
  std::shared_ptr<CrackSchedule> schedule;

  if (extension == "daclonsynth") {
    dsetup = std::make_shared<DaclonsynthSetup>(setup_daclonsynth(cfg));
    jobs = std::make_shared<std::vector<DaclonsynthJob>>(daclonsynth_jobs(dsetup->plan));
    n = static_cast<std::int64_t>(jobs->size());
    plan = dsetup->to_json(cfg);
    for (const auto& w : dsetup->warnings) g_log->warn("event=donor_warning detail=\"{}\"", w);
    make = [&, dsetup, jobs](std::uint64_t i) {
      const DaclonsynthJob& job = (*jobs)[i];
      return gen_daclonsynth_sample(job, dsetup->donors.at(job.cls), cfg.master_seed, res, res);
    };
  } else if (extension == "synthcrack") {
    const auto& k = cfg.synthcrack;
    n = k.samples;
    CrackParams base;
    base.branch_prob = k.branch_prob;
    base.roughness = k.roughness;
    base.width_taper = k.width_taper;
    base.recursion_depth = k.recursion_depth;
    const CrackBudget budget{k.pixels(), k.shapes(), n};
    schedule = std::make_shared<CrackSchedule>(calibrate_crack_set(budget, base, res, res, cfg.master_seed));
    plan = {{"formatVersion", kFormatVersion}, {"toolVersion", kToolVersion},
            {"extension", extension},          {"configHash", hash},
            {"masterSeed", cfg.master_seed},   {"targetShapes", budget.target_total_shapes},
            {"targetPixels", budget.target_total_pixels}, {"rootWidth", schedule->root_width},
            {"pilotPixelsPerShape", schedule->pilot_pixels_per_shape}};
    make = [&, schedule](std::uint64_t i) {
      return gen_synthcrack_sample({cfg.master_seed, i}, schedule->samples[i], i % 2 == 0, res, res);
    };
  } else {
    n = cfg.synthcavity.samples;
    const auto& p = cfg.synthcavity.profile;
    plan = {{"formatVersion", kFormatVersion},
            {"toolVersion", kToolVersion},
            {"extension", extension},
            {"configHash", hash},
            {"masterSeed", cfg.master_seed},
            {"profile",
             {{"minShapesPerSample", p.min_shapes_per_sample},
              {"maxPixelsPerShape", p.max_pixels_per_shape},
              {"largeCavityFraction", p.large_cavity_fraction}}}};
    make = [&](std::uint64_t i) {
      return gen_synthcavity_sample({cfg.master_seed, i}, i % 2 == 0, cfg.synthcavity.profile, res, res);
    };
  }

  fs::create_directories(out_dir);
  write_json_file(plan, out_dir / "plan.json");
  g_log->info("event=gen_start extension={} samples={} workers={} config_hash={}", extension, n, workers, hash);

  std::vector<std::uint8_t> skipped(static_cast<std::size_t>(n), 0);
  parallel_for(static_cast<std::size_t>(n), workers, [&](std::size_t i) {
    const fs::path dir = out_dir / sample_dir_name(i);
    if (sample_complete(dir)) {
      skipped[i] = 1;
      return;
    }
    const Sample s = make(i);
    write_sample(s, {extension, cfg.master_seed, static_cast<std::uint64_t>(i), hash}, dir);
  });
  write_run_manifest(extension, cfg, n, out_dir);

  GenResult r;
  r.skipped = std::count(skipped.begin(), skipped.end(), 1);
  r.written = n - r.skipped;
  g_log->info("event=gen_done extension={} written={} skipped={}", extension, r.written, r.skipped);
  return r;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto logger = std::make_shared<spdlog::logger>("synthforge", sink);
  logger->set_pattern("%Y-%m-%dT%H:%M:%S level=%l %v");
  g_log = logger;

  CLI::App app{"synthforge: synthetic concrete-defect dataset tooling"};
  app.require_subcommand(1);
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error, off")->capture_default_str();

  // gen
  std::string ext;
  std::string config_path;
  std::string gen_out;
  std::optional<std::int64_t> gen_samples;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> dataset;
  std::optional<int> resolution;
  auto* gen = app.add_subcommand("gen", "Generate a dataset extension");
  gen->add_option("extension", ext, "daclonsynth | synthcrack | synthcavity")->required();
  gen->add_option("--config", config_path, "JSON run configuration");
  gen->add_option("--out", gen_out, "Output directory")->required();
  gen->add_option("--samples,-n", gen_samples, "Sample count (overrides config)");
  gen->add_option("--seed", seed, "Master seed (overrides config)");
  gen->add_option("--workers,-j", workers, "Worker threads (overrides config and SYNTHFORGE_WORKERS)");
  gen->add_option("--dataset", dataset, "Real dataset root (daclonsynth)");
  gen->add_option("--resolution", resolution, "Working resolution");

  // plan
  std::string plan_out;
  auto* plan = app.add_subcommand("plan", "Compute the daclonsynth allocation without generating");
  plan->add_option("--config", config_path, "JSON run configuration");
  plan->add_option("--dataset", dataset, "Real dataset root");
  plan->add_option("--samples,-n", gen_samples, "Sample count");
  plan->add_option("--resolution", resolution, "Working resolution");
  plan->add_option("--out", plan_out, "Write plan JSON here");

  // stats
  std::string stats_dir;
  std::string stats_out;
  bool working = false;
  auto* stats = app.add_subcommand("stats", "Dataset statistics table");
  stats->add_option("--dataset", stats_dir, "Dataset root")->required();
  stats->add_option("--out", stats_out, "Write JSON here");
  stats->add_flag("--working", working, "Class counts at the working resolution instead of native");
  stats->add_option("--resolution", resolution, "Working resolution for --working");

  // perturb
  std::string p_in;
  std::string p_out;
  std::string kinds = "all";
  int severity = 3;
  std::uint64_t p_seed = 0;
  auto* perturb = app.add_subcommand("perturb", "Apply the perturbation suite");
  perturb->add_option("--in", p_in, "Input dataset")->required();
  perturb->add_option("--out", p_out, "Output directory")->required();
  perturb->add_option("--kinds", kinds, "all or comma-separated names")->capture_default_str();
  perturb->add_option("--severity", severity, "1..5")->capture_default_str();
  perturb->add_option("--seed", p_seed, "Master seed")->capture_default_str();
  perturb->add_option("--workers,-j", workers, "Worker threads");

  // evaluate
  std::string pred_dir;
  std::string truth_dir;
  std::string classes = "all";
  std::string eval_out;
  std::string label;
  bool present_only = false;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score predictions against ground truth");
  evaluate_cmd->add_option("--pred", pred_dir, "Prediction root")->required();
  evaluate_cmd->add_option("--truth", truth_dir, "Ground-truth dataset")->required();
  evaluate_cmd->add_option("--classes", classes, "all or comma-separated class names")->capture_default_str();
  evaluate_cmd->add_option("--out", eval_out, "Write report JSON here");
  evaluate_cmd->add_option("--label", label, "Report label, e.g. a perturbation name");
  evaluate_cmd->add_flag("--present-only", present_only, "Average only over images containing the class");
  evaluate_cmd->add_option("--workers,-j", workers, "Worker threads");

  // report
  std::string raw_path;
  std::string perturbed_paths;
  std::string report_out;
  auto* report = app.add_subcommand("report", "Robustness change report");
  report->add_option("--raw", raw_path, "Raw metric report")->required();
  report->add_option("--perturbed", perturbed_paths, "Comma-separated perturbed reports")->required();
  report->add_option("--out", report_out, "Write JSON here");

  // refine
  std::string refine_in;
  std::string refine_out = "finecrack";
  auto* refine = app.add_subcommand("refine", "Refine coarse crack polygons into fine masks");
  refine->add_option("--dataset", refine_in, "Dataset root")->required();
  refine->add_option("--out", refine_out, "Output directory")->capture_default_str();
  refine->add_option("--workers,-j", workers, "Worker threads");

  // preview
  std::string sample_dir;
  std::string preview_out;
  auto* preview = app.add_subcommand("preview", "Overlay a sample's masks with a legend");
  preview->add_option("sample", sample_dir, "Sample directory")->required();
  preview->add_option("output", preview_out, "Output PNG")->required();

  std::vector<std::string> rev(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(rev.begin(), rev.end());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }
  logger->set_level(spdlog::level::from_str(log_level));

  try {
    const auto load_config = [&]() {
      RunConfig cfg = config_path.empty() ? RunConfig{} : load_run_config(config_path);
      if (seed) cfg.master_seed = *seed;
      if (dataset) cfg.dataset_root = *dataset;
      if (resolution) cfg.resolution = *resolution;
      return cfg;
    };

    if (*gen) {
      RunConfig cfg = load_config();
      if (gen_samples) cfg.samples(ext) = *gen_samples;
      cfg.validate();
      const int w = resolve_workers(cfg.workers, workers);
      const GenResult r = generate(ext, cfg, gen_out, w);
      out << "generated " << r.written << " sample(s), skipped " << r.skipped << " complete\n";
    } else if (*plan) {
      RunConfig cfg = load_config();
      if (gen_samples) cfg.daclonsynth.samples = *gen_samples;
      cfg.validate();
      const json j = plan_daclonsynth(cfg);
      if (!plan_out.empty()) write_json_file(j, plan_out);
      out << j["plan"].dump(2) << '\n';
    } else if (*stats) {
      if (working) {
        const ClassStats s = compute_class_stats(stats_dir, resolution.value_or(512));
        if (!stats_out.empty()) write_json_file(s.to_json(), stats_out);
        out << s.to_json().dump(2) << '\n';
      } else {
        const StatsTable t = stats_table(stats_dir);
        for (const auto& w : t.warnings) logger->warn("event=stats_warning detail=\"{}\"", w);
        if (!stats_out.empty()) write_json_file(t.to_json(), stats_out);
        out << t.text_table();
      }
    } else if (*perturb) {
      const int w = resolve_workers(1, workers);
      const json m = perturb_dataset(p_in, p_out, parse_perturb_kinds(kinds), severity, p_seed, w);
      for (const auto& e : m["errors"]) logger->warn("event=perturb_error detail=\"{}\"", e.get<std::string>());
      out << "wrote " << m["outputs"].size() << " perturbed image(s), " << m["errors"].size() << " error(s)\n";
    } else if (*evaluate_cmd) {
      EvaluateOptions opt;
      opt.classes = parse_classes(classes);
      opt.present_only = present_only;
      opt.workers = resolve_workers(1, workers);
      MetricReport r = evaluate(fs::path(pred_dir), fs::path(truth_dir), opt);
      r.label = label;
      if (!eval_out.empty()) write_json_file(r.to_json(), eval_out);
      out << r.text_table();
    } else if (*report) {
      const MetricReport raw = MetricReport::from_json(read_json_file(raw_path));
      std::vector<MetricReport> perturbed;
      for (const auto& p : split_list(perturbed_paths)) perturbed.push_back(MetricReport::from_json(read_json_file(p)));
      const RobustnessReport r = robustness_report(raw, perturbed);
      if (!report_out.empty()) write_json_file(r.to_json(), report_out);
      out << r.text_table();
    } else if (*refine) {
      const DatasetListing listing = list_dataset(refine_in);
      std::map<std::string, int> uses;
      for (const auto& e : listing.entries) uses[e.image.stem().string()] += 1;
      fs::create_directories(refine_out);
      std::vector<std::vector<std::string>> warns(listing.entries.size());
      parallel_for(listing.entries.size(), resolve_workers(1, workers), [&](std::size_t i) {
        const auto& e = listing.entries[i];
        const ImageBuffer img = read_image(e.image);
        const LabelMask m = refine_image(img, load_annotation(e.annotation), {}, &warns[i]);
        const std::string key = output_key(e.image, refine_in, uses);
        write_png(mask_to_gray(m), fs::path(refine_out) / (key + ".png"));
        write_png(crack_overlay(img, m), fs::path(refine_out) / (key + "_overlay.png"));
      });
      std::size_t nwarn = 0;
      for (std::size_t i = 0; i < warns.size(); ++i) {
        for (const auto& w : warns[i]) {
          logger->warn("event=refine_warning image={} detail=\"{}\"", listing.entries[i].image.string(), w);
          ++nwarn;
        }
      }
      out << "refined " << listing.entries.size() << " image(s), " << nwarn << " warning(s)\n";
    } else if (*preview) {
      const fs::path dir(sample_dir);
      if (!fs::is_directory(dir / "masks")) throw DataError("sample has no masks directory: " + dir.string());
      fs::path image = dir / "image.png";
      if (fs::is_regular_file(dir / "manifest.json")) image = dir / read_json_file(dir / "manifest.json").value("image", "image.png");
      const Preview p = render_preview(read_image(image), load_maskset(dir / "masks"));
      write_png(p.image, preview_out);
      out << "legend:";
      for (ClassId c : p.legend) out << ' ' << class_name(c);
      out << '\n';
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    logger->error("event=config_error detail=\"{}\"", e.what());
    return kExitConfig;
  } catch (const Error& e) {
    logger->error("event=data_error detail=\"{}\"", e.what());
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    logger->error("event=io_error detail=\"{}\"", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    logger->error("event=failure detail=\"{}\"", e.what());
    return kExitFailure;
  }
}

}  // namespace synthforge::cli

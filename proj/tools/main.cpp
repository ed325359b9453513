// Copyright 2026 The JPPF Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "jppf/bench.hpp"
#include "jppf/catalog.hpp"
#include "jppf/detection.hpp"
#include "jppf/errors.hpp"
#include "jppf/fusion.hpp"
#include "jppf/io.hpp"
#include "jppf/merge.hpp"
#include "jppf/metrics.hpp"
#include "jppf/synth.hpp"
#include "jppf/viz.hpp"

namespace fs = std::filesystem;

namespace {

struct FusionFlags {
  double confidence = 0.5;
  double overlap = 0.5;
  int min_stuff = -1;  // -1: scale the reference default to the image area
  bool no_normalize = false;
  int threads = 1;
};

void add_fusion_flags(CLI::App* cmd, FusionFlags& flags) {
  cmd->add_option("--confidence", flags.confidence,
                  "Detection confidence threshold")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--overlap", flags.overlap,
                  "Mask overlap threshold for suppression")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--min-stuff", flags.min_stuff,
                  "Minimum stuff region size in pixels (default: 2048 at "
                  "1024x2048, scaled to the image area)");
  cmd->add_flag("--no-normalize", flags.no_normalize,
                "Skip softmax normalization of the semantic and part heads");
  cmd->add_option("--threads", flags.threads, "Worker threads")
      ->check(CLI::PositiveNumber);
}

jppf::FusionConfig make_config(const FusionFlags& flags, int height,
                               int width) {
  jppf::FusionConfig config;
  config.confidence_threshold = static_cast<float>(flags.confidence);
  config.overlap_threshold = static_cast<float>(flags.overlap);
  config.min_stuff = flags.min_stuff >= 0
                         ? flags.min_stuff
                         : jppf::default_min_stuff(height, width);
  config.normalize_heads = !flags.no_normalize;
  return config;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) {
    throw jppf::IoError("cannot open for writing: " + path);
  }
  f << content;
}

int run(int argc, char** argv) {
  CLI::App app{"Panoptic-part fusion engine and evaluation toolkit"};
  app.require_subcommand(1);

  // ---- synth ----
  auto* synth = app.add_subcommand(
      "synth", "Generate a synthetic scene (gt, head tensors, detections)");
  jppf::SceneConfig scene_cfg;
  std::string synth_out;
  std::uint64_t seed = 1;
  synth->add_option("--catalog", scene_cfg.catalog,
                    "Catalog preset (cpp|ppp) or file path");
  synth->add_option("--width", scene_cfg.width)->check(CLI::PositiveNumber);
  synth->add_option("--height", scene_cfg.height)->check(CLI::PositiveNumber);
  synth->add_option("--min-instances", scene_cfg.min_instances);
  synth->add_option("--max-instances", scene_cfg.max_instances);
  synth->add_option("--sigma", scene_cfg.logit_noise_sigma,
                    "Logit noise standard deviation");
  synth->add_option("--jitter", scene_cfg.bbox_jitter,
                    "Detection box jitter in pixels");
  synth->add_option("--score-min", scene_cfg.score_min);
  synth->add_option("--score-max", scene_cfg.score_max);
  synth->add_option("--seed", seed);
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->set_config("--config");

  // ---- fuse ----
  auto* fuse = app.add_subcommand("fuse", "Joint fusion of the three heads");
  std::string fuse_sem, fuse_parts, fuse_dets, fuse_catalog = "cpp", fuse_out;
  FusionFlags fuse_flags;
  fuse->add_option("--sem", fuse_sem, "Semantic logits tensor")->required();
  fuse->add_option("--parts", fuse_parts, "Part logits tensor")->required();
  fuse->add_option("--dets", fuse_dets, "Detection file")->required();
  fuse->add_option("--catalog", fuse_catalog, "Catalog preset or path");
  fuse->add_option("--out", fuse_out, "Output label map")->required();
  add_fusion_flags(fuse, fuse_flags);
  fuse->set_config("--config");

  // ---- merge ----
  auto* merge = app.add_subcommand(
      "merge", "Top-down merge baseline (two-way fusion + part overlay)");
  std::string merge_sem, merge_dets, merge_panoptic, merge_parts,
      merge_part_map, merge_catalog = "cpp", merge_out;
  FusionFlags merge_flags;
  merge->add_option("--sem", merge_sem,
                    "Semantic logits tensor (to build the panoptic map)");
  merge->add_option("--dets", merge_dets, "Detection file");
  merge->add_option("--panoptic", merge_panoptic,
                    "Precomputed panoptic label map (skips the fusion)");
  merge->add_option("--parts", merge_parts,
                    "Part logits tensor (argmaxed internally)");
  merge->add_option("--part-map", merge_part_map, "Precomputed part map");
  merge->add_option("--catalog", merge_catalog, "Catalog preset or path");
  merge->add_option("--out", merge_out, "Output label map")->required();
  add_fusion_flags(merge, merge_flags);
  merge->set_config("--config");

  // ---- eval ----
  auto* eval = app.add_subcommand("eval", "Evaluate a prediction against gt");
  std::string eval_pred, eval_gt, eval_dets, eval_catalog = "cpp", eval_out;
  eval->add_option("--pred", eval_pred, "Predicted label map")->required();
  eval->add_option("--gt", eval_gt, "Ground-truth label map")->required();
  eval->add_option("--dets", eval_dets,
                   "Detection file (enables instance AP)");
  eval->add_option("--catalog", eval_catalog, "Catalog preset or path");
  eval->add_option("--out", eval_out,
                   "Report prefix (writes <prefix>.txt and <prefix>.kv)");
  eval->set_config("--config");

  // ---- viz ----
  auto* viz = app.add_subcommand("viz", "Render a label map to a PNG");
  std::string viz_in, viz_out;
  viz->add_option("--in", viz_in, "Label map file")->required();
  viz->add_option("--out", viz_out, "Output PNG path")->required();

  // ---- bench ----
  auto* bench = app.add_subcommand(
      "bench", "Time the joint fusion against the top-down merge path");
  std::string bench_catalog = "cpp", bench_out;
  int bench_width = 2048, bench_height = 1024, bench_instances = 20;
  int bench_reps = 5;
  double bench_sigma = 0.5;
  std::uint64_t bench_seed = 1;
  FusionFlags bench_flags;
  bench->add_option("--catalog", bench_catalog, "Catalog preset or path");
  bench->add_option("--width", bench_width)->check(CLI::PositiveNumber);
  bench->add_option("--height", bench_height)->check(CLI::PositiveNumber);
  bench->add_option("--instances", bench_instances,
                    "Instance count of the benchmark scene");
  bench->add_option("--sigma", bench_sigma);
  bench->add_option("--seed", bench_seed);
  bench->add_option("--reps", bench_reps, "Timing repetitions")
      ->check(CLI::PositiveNumber);
  bench->add_option("--out", bench_out, "Write the timing report here");
  add_fusion_flags(bench, bench_flags);
  bench->set_config("--config");

  // ---- catalog ----
  auto* catalog_cmd =
      app.add_subcommand("catalog", "Dump or validate a class catalog");
  std::string catalog_name = "cpp", catalog_out;
  bool catalog_validate = false;
  catalog_cmd->add_option("--name", catalog_name, "Preset name or file path");
  catalog_cmd->add_option("--out", catalog_out, "Write the catalog here");
  catalog_cmd->add_flag("--validate", catalog_validate,
                        "Print the validation report");

  CLI11_PARSE(app, argc, argv);

  if (synth->parsed()) {
    scene_cfg.seed = seed;
    const jppf::Scene scene = jppf::generate_scene(scene_cfg);
    fs::create_directories(synth_out);
    jppf::save_label_map((fs::path(synth_out) / "gt.jplm").string(), scene.gt);
    jppf::save_tensor((fs::path(synth_out) / "sem.jptf").string(),
                      scene.sem_logits);
    jppf::save_tensor((fs::path(synth_out) / "parts.jptf").string(),
                      scene.part_logits);
    jppf::save_detections((fs::path(synth_out) / "dets.txt").string(),
                          scene.dets);
    std::ofstream cfg_sink((fs::path(synth_out) / "scene.cfg").string());
    jppf::write_scene_config(cfg_sink, scene_cfg);
    std::cout << "wrote scene to " << synth_out << "\n";
    return 0;
  }

  if (fuse->parsed()) {
    const jppf::ClassCatalog catalog = jppf::resolve_catalog(fuse_catalog);
    const jppf::Tensor sem = jppf::load_tensor(fuse_sem);
    const jppf::Tensor parts = jppf::load_tensor(fuse_parts);
    const jppf::DetectionSet dets = jppf::load_detections(fuse_dets);
    sem.require_rank(3, "semantic logits");
    const jppf::FusionConfig config =
        make_config(fuse_flags, static_cast<int>(sem.height()),
                    static_cast<int>(sem.width()));
    const jppf::LabelMap out =
        jppf::jppf(sem, parts, dets, catalog, config, fuse_flags.threads);
    jppf::save_label_map(fuse_out, out);
    std::cout << "wrote " << fuse_out << "\n";
    return 0;
  }

  if (merge->parsed()) {
    const jppf::ClassCatalog catalog = jppf::resolve_catalog(merge_catalog);
    jppf::LabelMap panoptic;
    if (!merge_panoptic.empty()) {
      panoptic = jppf::load_label_map(merge_panoptic);
    } else if (!merge_sem.empty() && !merge_dets.empty()) {
      const jppf::Tensor sem = jppf::load_tensor(merge_sem);
      const jppf::DetectionSet dets = jppf::load_detections(merge_dets);
      sem.require_rank(3, "semantic logits");
      const jppf::FusionConfig config =
          make_config(merge_flags, static_cast<int>(sem.height()),
                      static_cast<int>(sem.width()));
      panoptic = jppf::panoptic_fuse_two(sem, dets, catalog, config,
                                         merge_flags.threads);
    } else {
      throw CLI::ValidationError(
          "merge", "provide --panoptic or both --sem and --dets");
    }
    jppf::PartSegMap part_map;
    if (!merge_part_map.empty()) {
      part_map = jppf::load_part_map(merge_part_map);
    } else if (!merge_parts.empty()) {
      part_map = jppf::part_map_from_logits(jppf::load_tensor(merge_parts));
    } else {
      throw CLI::ValidationError("merge",
                                 "provide --parts or --part-map");
    }
    const jppf::LabelMap out =
        jppf::top_down_merge(panoptic, part_map, catalog, merge_flags.threads);
    jppf::save_label_map(merge_out, out);
    std::cout << "wrote " << merge_out << "\n";
    return 0;
  }

  if (eval->parsed()) {
    const jppf::ClassCatalog catalog = jppf::resolve_catalog(eval_catalog);
    const jppf::LabelMap pred = jppf::load_label_map(eval_pred);
    const jppf::LabelMap gt = jppf::load_label_map(eval_gt);
    std::optional<jppf::DetectionSet> dets;
    if (!eval_dets.empty()) {
      dets = jppf::load_detections(eval_dets);
    }
    const jppf::EvalReport report =
        jppf::evaluate(pred, gt, catalog, dets ? &*dets : nullptr);
    jppf::write_report_text(std::cout, report, catalog);
    if (!eval_out.empty()) {
      std::ostringstream text, kv;
      jppf::write_report_text(text, report, catalog);
      jppf::write_report_kv(kv, report);
      write_text_file(eval_out + ".txt", text.str());
      write_text_file(eval_out + ".kv", kv.str());
    }
    return 0;
  }

  if (viz->parsed()) {
    const jppf::LabelMap map = jppf::load_label_map(viz_in);
    const auto pixels = jppf::render_label_map(map);
    jppf::write_png(viz_out, pixels, map.width, map.height);
    std::cout << "wrote " << viz_out << "\n";
    return 0;
  }

  if (bench->parsed()) {
    jppf::SceneConfig cfg;
    cfg.width = bench_width;
    cfg.height = bench_height;
    cfg.min_instances = bench_instances;
    cfg.max_instances = bench_instances;
    cfg.catalog = bench_catalog;
    cfg.logit_noise_sigma = bench_sigma;
    cfg.seed = bench_seed;
    const jppf::ClassCatalog catalog = jppf::resolve_catalog(bench_catalog);
    const jppf::Scene scene = jppf::generate_scene(cfg);
    const jppf::FusionConfig config =
        make_config(bench_flags, bench_height, bench_width);
    const jppf::BenchReport report = jppf::run_bench(
        scene, catalog, config, bench_reps, bench_flags.threads);
    jppf::write_bench_text(std::cout, report);
    if (!bench_out.empty()) {
      std::ostringstream text;
      jppf::write_bench_text(text, report);
      write_text_file(bench_out, text.str());
    }
    return 0;
  }

  if (catalog_cmd->parsed()) {
    const jppf::ClassCatalog catalog = jppf::resolve_catalog(catalog_name);
    if (catalog_validate) {
      const auto report = jppf::validate_catalog(catalog);
      if (report.empty()) {
        std::cout << "catalog is valid (" << catalog.num_classes()
                  << " classes, " << catalog.n_part_channels()
                  << " part channels)\n";
      } else {
        for (const auto& violation : report) {
          std::cout << "violation (class " << violation.class_id
                    << "): " << violation.message << "\n";
        }
        return 1;
      }
    }
    if (!catalog_out.empty()) {
      jppf::save_catalog(catalog_out, catalog);
      std::cout << "wrote " << catalog_out << "\n";
    } else if (!catalog_validate) {
      jppf::write_catalog(std::cout, catalog);
    }
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const jppf::FormatError& e) {
    std::cerr << "error: format: " << e.what() << "\n";
  } catch (const jppf::ParseError& e) {
    std::cerr << "error: parse: " << e.what() << "\n";
  } catch (const jppf::CatalogError& e) {
    std::cerr << "error: catalog: " << e.what() << "\n";
  } catch (const jppf::ShapeError& e) {
    std::cerr << "error: shape mismatch: " << e.what() << "\n";
  } catch (const jppf::BoundsError& e) {
    std::cerr << "error: bounds: " << e.what() << "\n";
  } catch (const jppf::GenerationError& e) {
    std::cerr << "error: generation: " << e.what() << "\n";
  } catch (const jppf::IoError& e) {
    std::cerr << "error: io: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 1;
}

/******************************************************************************
 * Copyright 2026 dynvo Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/
#include <CLI11.hpp>
#include <iostream>

#include "dynvo/commands.hpp"
#include "dynvo/error.hpp"
#include "dynvo/log.hpp"

int main(int argc, char** argv) {
  CLI::App app{"dynvo - RGB-D visual odometry for dynamic indoor scenes"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  uint64_t seed = 0;
  double delta = 1.0;
  int block_size = 0;
  double alpha_i = 0.0;
  int pyramid_levels = 0;
  int max_refine_iters = 0;
  bool debug_masks = false;

  app.add_option("--config", config_path, "key = value config file");
  auto* seed_opt = app.add_option("--seed", seed, "seed for all randomness");
  auto* delta_opt = app.add_option("--delta", delta, "RPE time delta in seconds");
  auto* block_opt = app.add_option("--block-size", block_size, "region tiling block in pixels");
  auto* alpha_opt = app.add_option("--alpha-i", alpha_i, "photometric scale factor");
  auto* pyr_opt = app.add_option("--pyramid-levels", pyramid_levels, "coarse-to-fine levels");
  auto* refine_opt =
      app.add_option("--max-refine-iters", max_refine_iters, "refine iteration cap (<= 7)")
          ->check(CLI::Range(1, 7));
  auto* debug_opt = app.add_flag("--debug-masks", debug_masks, "write per-pair mask PNGs");
  auto* out_opt = app.add_option("--out", out_dir, "output directory");

  std::string dataset_dir;
  auto* run = app.add_subcommand("run", "process a TUM-layout dataset");
  run->add_option("dataset", dataset_dir, "dataset directory")->required();

  std::string rgb_a, depth_a, rgb_b, depth_b;
  auto* segment = app.add_subcommand("segment", "segment moving objects in one frame pair");
  segment->add_option("rgbA", rgb_a)->required();
  segment->add_option("depthA", depth_a)->required();
  segment->add_option("rgbB", rgb_b)->required();
  segment->add_option("depthB", depth_b)->required();

  std::string gt_file, est_file, mode;
  auto* eval = app.add_subcommand("eval", "compare trajectories (RPE/ATE)");
  eval->add_option("gt", gt_file, "ground-truth trajectory")->required();
  eval->add_option("est", est_file, "estimated trajectory")->required();
  eval->add_option("mode", mode, "rpe or ate")->required()->check(CLI::IsMember({"rpe", "ate"}));

  std::string spec_file;
  auto* synth = app.add_subcommand("synth", "render a synthetic TUM-layout dataset");
  synth->add_option("spec", spec_file, "scene spec file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    dynvo::RunConfig config;
    if (!config_path.empty()) config = dynvo::parse_config_file(config_path);
    // flag > config file > default
    if (seed_opt->count()) config.refine.seed = seed;
    if (delta_opt->count()) config.rpe_delta = delta;
    if (block_opt->count()) config.refine.mask_params.block = block_size;
    if (alpha_opt->count()) config.refine.align.alpha_i = alpha_i;
    if (pyr_opt->count()) config.refine.align.pyramid_levels = pyramid_levels;
    if (refine_opt->count()) config.refine.max_iterations = max_refine_iters;
    if (debug_opt->count()) config.debug_masks = debug_masks;
    if (out_opt->count()) config.out_dir = out_dir;

    if (run->parsed()) return dynvo::cmd_run(dataset_dir, config);
    if (segment->parsed()) return dynvo::cmd_segment(rgb_a, depth_a, rgb_b, depth_b, config);
    if (eval->parsed()) return dynvo::cmd_eval(gt_file, est_file, mode, config.rpe_delta, std::cout);
    if (synth->parsed()) return dynvo::cmd_synth(spec_file, config.out_dir, config.refine.seed);
  } catch (const dynvo::Error& e) {
    dynvo::log::error("%s", e.what());
    return 1;
  } catch (const std::exception& e) {
    dynvo::log::error("unexpected: %s", e.what());
    return 1;
  }
  return 1;
}

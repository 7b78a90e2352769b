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
#include "dynvo/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "dynvo/error.hpp"
#include "dynvo/evaluation.hpp"
#include "dynvo/log.hpp"
#include "dynvo/png_io.hpp"
#include "dynvo/synth.hpp"

namespace dynvo {

namespace fs = std::filesystem;

namespace {

class TumFrameSource final : public FrameSource {
 public:
  TumFrameSource(const AssociatedSequence& seq) : seq_(seq) {}
  size_t size() const override { return seq_.pairs.size(); }
  Frame frame(size_t index) override { return load_frame(seq_.pairs[index], seq_.intrinsics); }

 private:
  const AssociatedSequence& seq_;
};

}  // namespace

int cmd_run(const std::string& dataset_dir, const RunConfig& config) {
  const AssociatedSequence seq = load_tum(dataset_dir, config.assoc_max_dt, config.intrinsics);
  if (seq.pairs.size() < 2) {
    raise(ErrorCode::InsufficientData, "dataset has fewer than 2 associated frames");
  }
  log::info("loaded %zu associated frames from %s", seq.pairs.size(), dataset_dir.c_str());

  fs::create_directories(config.out_dir);
  if (config.debug_masks) fs::create_directories(fs::path(config.out_dir) / "masks");

  std::ofstream stats(fs::path(config.out_dir) / "stats.csv");
  stats << "pair,timestamp,iterations,huber_objective,mask_change,dynamic_pixels,ok,fallback\n";
  std::ofstream align_log(fs::path(config.out_dir) / "align_log.csv");
  align_log << "pair,level,iter,objective,update_norm,valid\n";

  char row[256];
  const auto callback = [&](const PairLog& log_entry, const PairResult& result) {
    std::snprintf(row, sizeof(row), "%zu,%.6f,%d,%.9g,%.6g,%zu,%d,%d\n", log_entry.index,
                  log_entry.timestamp, log_entry.iterations, log_entry.final_objective,
                  log_entry.final_mask_change, log_entry.dynamic_pixels,
                  log_entry.ok ? 1 : 0, log_entry.fallback ? 1 : 0);
    stats << row;
    for (const AlignIterationStat& s : result.align_stats) {
      std::snprintf(row, sizeof(row), "%zu,%d,%d,%.9g,%.9g,%zu\n", log_entry.index, s.level,
                    s.iteration, s.objective, s.update_norm, s.valid);
      align_log << row;
    }
    if (config.debug_masks) {
      std::snprintf(row, sizeof(row), "mask_%06zu.png", log_entry.index);
      write_mask_png((fs::path(config.out_dir) / "masks" / row).string(), result.mask);
    }
  };

  TumFrameSource source(seq);
  const SequenceResult result = run_sequence(source, config.intrinsics, config.refine, callback);

  write_trajectory((fs::path(config.out_dir) / "trajectory.txt").string(), result.trajectory);
  log::info("wrote %zu poses (%zu fallback pairs)", result.trajectory.size(),
            result.fallback_count);
  return result.fallback_count > 0 ? 2 : 0;
}

int cmd_segment(const std::string& rgb_a, const std::string& depth_a, const std::string& rgb_b,
                const std::string& depth_b, const RunConfig& config) {
  Frame a;
  a.timestamp = 0.0;
  a.intensity = load_intensity_png(rgb_a);
  a.depth = load_depth_png(depth_a, config.intrinsics.depth_scale);
  Frame b;
  b.timestamp = 1.0 / 30.0;
  b.intensity = load_intensity_png(rgb_b);
  b.depth = load_depth_png(depth_b, config.intrinsics.depth_scale);
  if (a.width() != b.width() || a.height() != b.height() ||
      a.width() != a.depth.width() || a.height() != a.depth.height()) {
    raise(ErrorCode::InvalidArgument, "cmd_segment: image dimension mismatch");
  }

  Intrinsics K = config.intrinsics;
  K.width = a.width();
  K.height = a.height();

  RefineConfig refine = config.refine;
  refine.max_iterations = 1;  // clustering + pre-elimination + one refine pass
  const PairResult result = process_pair(a, b, K, PoseSE3::identity(), refine);

  fs::create_directories(config.out_dir);
  write_mask_png((fs::path(config.out_dir) / "mask.png").string(), result.mask);

  // Per-region dynamic coefficients from the hole-filled pair.
  Frame fa = a;
  Frame fb = b;
  fa.depth = fill_depth_holes(fa.depth);
  fb.depth = fill_depth_holes(fb.depth);
  const RegionGrid grid = partition_regions(fa.width(), fa.height(), config.refine.mask_params.block);
  const ClusterMap cmap_b = classify_depth(fb.depth, result.clusters.centroids);
  const EdgeGapProfile prof_a = edge_gap_profile(fa.depth, grid, result.clusters);
  const EdgeGapProfile prof_b = edge_gap_profile(fb.depth, grid, cmap_b);
  const std::vector<double> coeffs =
      dynamic_coefficients(prof_a, prof_b, grid, config.refine.mask_params);

  std::ofstream csv(fs::path(config.out_dir) / "coefficients.csv");
  csv << "region,col,row,coefficient\n";
  char row[128];
  for (int r = 0; r < grid.count(); ++r) {
    std::snprintf(row, sizeof(row), "%d,%d,%d,%.6f\n", r, r % grid.cols, r / grid.cols, coeffs[r]);
    csv << row;
  }
  if (!result.ok) {
    log::warn("segment: refinement incomplete (%s); wrote pre-elimination mask", result.error.c_str());
  }
  return 0;
}

int cmd_eval(const std::string& gt_file, const std::string& est_file, const std::string& mode,
             double delta, std::ostream& out) {
  const Trajectory gt = read_trajectory(gt_file);
  const Trajectory est = read_trajectory(est_file);
  MetricReport report;
  if (mode == "rpe") {
    report = relative_pose_error(gt, est, delta);
  } else if (mode == "ate") {
    report = absolute_trajectory_error(gt, est);
  } else {
    raise(ErrorCode::InvalidArgument, "cmd_eval: mode must be rpe or ate");
  }
  out << metric_report_csv(report, mode);
  return 0;
}

int cmd_synth(const std::string& spec_file, const std::string& out_dir, uint64_t seed) {
  const SceneSpec spec = parse_scene_spec(spec_file);
  const RenderedSequence seq = render_sequence(spec, seed);
  emit_tum_dataset(seq, spec.intrinsics, out_dir);
  log::info("rendered %zu frames into %s", seq.frames.size(), out_dir.c_str());
  return 0;
}

}  // namespace dynvo

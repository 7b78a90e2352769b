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
#include "dynvo/refine.hpp"

#include <cmath>

#include "dynvo/error.hpp"
#include "dynvo/log.hpp"

namespace dynvo {

PairResult process_pair(const Frame& frame_a, const Frame& frame_b, const Intrinsics& intrinsics,
                        const PoseSE3& init, const RefineConfig& cfg) {
  if (frame_a.width() != frame_b.width() || frame_a.height() != frame_b.height()) {
    raise(ErrorCode::InvalidArgument, "process_pair: frame dimension mismatch");
  }
  if (cfg.max_iterations < 1 || cfg.max_iterations > 7) {
    raise(ErrorCode::InvalidArgument, "process_pair: iteration cap must be in [1, 7]");
  }

  Frame a = frame_a;
  Frame b = frame_b;
  a.depth = fill_depth_holes(a.depth);
  b.depth = fill_depth_holes(b.depth);

  PairResult result;
  const DepthStats stats = compute_depth_stats(a.depth);
  if (stats.valid_count == 0) {
    result.ok = false;
    result.error = "empty-depth: frame A has no valid depth";
    result.mask = MotionMask::all_static(a.depth);
    return result;
  }
  const int n = cluster_count(stats, cfg.max_clusters);
  result.clusters = kmeans_depth(a.depth, n, cfg.seed);
  const ComponentMap components = connected_components(result.clusters);

  const RegionGrid grid = partition_regions(a.width(), a.height(), cfg.mask_params.block);
  MotionMask mask = pre_eliminate(a, b, result.clusters, grid, cfg.mask_params);

  result.mask = mask;
  result.pose = init;

  for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
    AlignResult aligned;
    try {
      aligned = gauss_newton_align(a, b, result.pose, mask, intrinsics, cfg.align);
    } catch (const Error& e) {
      result.ok = false;
      result.error = e.what();
      result.mask = mask;
      return result;  // best-so-far pose stays attached
    }
    result.pose = aligned.pose;
    result.objectives.push_back(aligned.stats.empty() ? 0.0 : aligned.stats.back().objective);
    result.align_stats = std::move(aligned.stats);

    const MotionMask next = reject_outliers(aligned.residual_set, mask, components, cfg.align);
    const double change = mask.change_fraction(next);
    result.mask_changes.push_back(change);
    mask = next;
    result.iterations = iter;
    if (change < cfg.mask_change_tol) break;
  }
  result.mask = mask;
  return result;
}

SequenceResult run_sequence(FrameSource& frames, const Intrinsics& intrinsics,
                            const RefineConfig& cfg, const PairCallback& callback) {
  if (frames.size() < 2) {
    raise(ErrorCode::InsufficientData, "run_sequence: need at least 2 frames");
  }

  SequenceResult out;
  Frame previous = frames.frame(0);
  out.trajectory.push_back({previous.timestamp, PoseSE3::identity()});

  PoseSE3 world = PoseSE3::identity();      // camera-to-world of the previous frame
  PoseSE3 last_relative = PoseSE3::identity();

  for (size_t i = 1; i < frames.size(); ++i) {
    Frame current = frames.frame(i);
    if (!(current.timestamp > previous.timestamp)) {
      raise(ErrorCode::InvalidArgument, "run_sequence: timestamps must strictly increase");
    }

    const PoseSE3 init = cfg.warm_start ? last_relative : PoseSE3::identity();
    const PairResult result = process_pair(previous, current, intrinsics, init, cfg);

    PairLog log;
    log.index = i - 1;
    log.timestamp = previous.timestamp;
    log.iterations = result.iterations;
    log.final_objective = result.objectives.empty() ? 0.0 : result.objectives.back();
    log.final_mask_change = result.mask_changes.empty() ? 0.0 : result.mask_changes.back();
    log.dynamic_pixels = result.mask.count(PixelState::Dynamic);
    log.ok = result.ok;
    log.error = result.error;

    PoseSE3 relative = result.pose;
    if (!result.ok) {
      log.fallback = true;
      out.fallback_count += 1;
      relative = last_relative;  // constant-velocity fallback
      log::warn("pair %zu failed (%s); reusing previous relative pose", i - 1,
                result.error.c_str());
    }
    log.relative = relative;

    world = world * relative.inverse();
    out.trajectory.push_back({current.timestamp, world});
    last_relative = relative;

    if (callback) callback(log, result);
    out.pairs.push_back(std::move(log));
    previous = std::move(current);
  }
  return out;
}

SequenceResult run_sequence(const std::vector<Frame>& frames, const Intrinsics& intrinsics,
                            const RefineConfig& cfg) {
  VectorFrameSource source(frames);
  return run_sequence(source, intrinsics, cfg);
}

}  // namespace dynvo

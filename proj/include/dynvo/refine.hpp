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
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dynvo/alignment.hpp"
#include "dynvo/dataset.hpp"
#include "dynvo/motion_mask.hpp"

namespace dynvo {

struct RefineConfig {
  AlignmentConfig align;
  MotionMaskParams mask_params;
  int max_iterations = 7;          // outer refine loop hard cap
  double mask_change_tol = 0.005;  // early stop when the mask settles
  int max_clusters = 12;
  uint64_t seed = 0;
  bool warm_start = true;          // previous relative pose seeds the next pair
};

struct PairResult {
  PoseSE3 pose;  // transform taking frame-A coordinates to frame-B coordinates
  MotionMask mask;
  int iterations = 0;
  std::vector<double> objectives;     // Huber objective after each refine iteration
  std::vector<double> mask_changes;   // state-change fraction per iteration
  bool ok = true;
  std::string error;

  ClusterMap clusters;                        // frame A clustering, for export/diagnostics
  std::vector<AlignIterationStat> align_stats;  // GN log of the last alignment
};

// Fig-style outer loop: fill holes, cluster A, pre-eliminate, then iterate
// align + outlier rejection until the mask settles (< mask_change_tol) or the
// iteration cap is reached. On alignment failure the best-so-far pose is
// returned with ok = false.
PairResult process_pair(const Frame& frame_a, const Frame& frame_b, const Intrinsics& intrinsics,
                        const PoseSE3& init, const RefineConfig& cfg);

// Lazy frame access so long sequences never sit in memory at once.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual size_t size() const = 0;
  virtual Frame frame(size_t index) = 0;
};

class VectorFrameSource final : public FrameSource {
 public:
  explicit VectorFrameSource(std::vector<Frame> frames) : frames_(std::move(frames)) {}
  size_t size() const override { return frames_.size(); }
  Frame frame(size_t index) override { return frames_[index]; }

 private:
  std::vector<Frame> frames_;
};

// Per-pair summary kept for the whole sequence; full PairResults are handed
// to the callback and then dropped so long runs stay in bounded memory.
struct PairLog {
  size_t index = 0;           // pair (index, index + 1)
  double timestamp = 0.0;     // frame A timestamp
  PoseSE3 relative;
  int iterations = 0;
  double final_objective = 0.0;
  double final_mask_change = 0.0;
  size_t dynamic_pixels = 0;
  bool ok = true;
  std::string error;
  bool fallback = false;      // constant-velocity fallback was used
};

struct SequenceResult {
  Trajectory trajectory;  // camera-to-world, first camera = identity
  std::vector<PairLog> pairs;
  size_t fallback_count = 0;
};

using PairCallback = std::function<void(const PairLog&, const PairResult&)>;

// Chains consecutive pairs. A failed pair logs a warning and reuses the
// previous relative pose (constant-velocity fallback).
SequenceResult run_sequence(FrameSource& frames, const Intrinsics& intrinsics,
                            const RefineConfig& cfg, const PairCallback& callback = {});

SequenceResult run_sequence(const std::vector<Frame>& frames, const Intrinsics& intrinsics,
                            const RefineConfig& cfg);

}  // namespace dynvo

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

#include <string>
#include <vector>

#include "dynvo/geometry.hpp"
#include "dynvo/image.hpp"
#include "dynvo/motion_mask.hpp"

namespace dynvo {

struct TrajectoryEntry {
  double timestamp = 0.0;
  PoseSE3 pose;  // camera-to-world
};

using Trajectory = std::vector<TrajectoryEntry>;

// TUM benchmark defaults (Freiburg Kinect).
Intrinsics tum_default_intrinsics();

struct AssociatedPair {
  double timestamp = 0.0;  // rgb timestamp
  double depth_timestamp = 0.0;
  std::string rgb_path;
  std::string depth_path;
};

struct AssociatedSequence {
  std::vector<AssociatedPair> pairs;
  Intrinsics intrinsics;
  Trajectory groundtruth;  // empty when groundtruth.txt is absent
};

// Parses rgb.txt / depth.txt and associates entries by greedy nearest
// timestamp within max_dt, each entry used at most once. groundtruth.txt is
// read when present.
AssociatedSequence load_tum(const std::string& dir, double max_dt = 0.02,
                            const Intrinsics& intrinsics = tum_default_intrinsics());

Frame load_frame(const AssociatedPair& pair, const Intrinsics& intrinsics);

// TUM trajectory format: "timestamp tx ty tz qx qy qz qw" per line.
Trajectory read_trajectory(const std::string& path);
void write_trajectory(const std::string& path, const Trajectory& trajectory);

// ASCII PLY of every STATIC valid-depth pixel, subsampled by stride,
// backprojected and placed in the world frame. Intensity goes out as a
// grayscale RGB triple.
void export_point_cloud(const std::string& path, const std::vector<Frame>& frames,
                        const std::vector<PoseSE3>& poses, const std::vector<MotionMask>& masks,
                        const Intrinsics& intrinsics, int stride);

}  // namespace dynvo

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

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "dynvo/dataset.hpp"
#include "dynvo/geometry.hpp"
#include "dynvo/image.hpp"
#include "dynvo/motion_mask.hpp"

namespace dynvo {

struct TextureSpec {
  enum class Kind { Checker, Gradient, Sine };
  Kind kind = Kind::Sine;
  double cell = 0.4;       // meters per period / checker cell
  double amplitude = 0.3;  // intensity swing
  double base = 0.55;      // mean intensity
};

struct BoxSpec {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();       // world frame, meters
  Eigen::Vector3d half_extent = Eigen::Vector3d::Zero();
};

struct MoverSpec {
  BoxSpec box;
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();  // meters per frame
  double intensity_offset = -0.15;                     // contrast against background
};

// Plane n . X = offset with the normal facing the viewed side.
struct PlaneSpec {
  Eigen::Vector3d normal = Eigen::Vector3d(0, 0, -1);
  double offset = -2.5;
};

struct SceneSpec {
  Intrinsics intrinsics;
  int frame_count = 2;
  double fps = 30.0;
  std::vector<PlaneSpec> planes;          // background
  std::vector<BoxSpec> static_boxes;
  std::vector<MoverSpec> movers;
  Twist camera_velocity = Twist::Zero();  // per-frame twist applied to T_wc
  std::vector<PoseSE3> camera_poses;      // optional explicit override (camera-to-world)
  TextureSpec texture;
  double depth_noise_sigma = 0.0;         // meters
};

struct RenderedSequence {
  std::vector<Frame> frames;
  Trajectory trajectory;                // camera-to-world, one entry per frame
  std::vector<MotionMask> gt_masks;     // DYNAMIC marks movers that changed pose
};

// Closed-form ray casting against the piecewise-planar scene. Deterministic
// for a fixed seed, including the added depth noise.
RenderedSequence render_sequence(const SceneSpec& spec, uint64_t seed);

PoseSE3 camera_pose_at(const SceneSpec& spec, int frame_index);

// Writes the rendered sequence as a TUM-layout dataset: rgb/, depth/,
// rgb.txt, depth.txt, groundtruth.txt, plus gt masks under mask/.
void emit_tum_dataset(const RenderedSequence& seq, const Intrinsics& intrinsics,
                      const std::string& dir);

// Flat key = value scene description plus plane/box/mover directive lines.
SceneSpec parse_scene_spec(const std::string& path);

}  // namespace dynvo

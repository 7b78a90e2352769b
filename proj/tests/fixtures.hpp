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

#include <cmath>

#include "dynvo/synth.hpp"

namespace dynvo::fixtures {

inline Intrinsics camera(int width, int height, double focal) {
  Intrinsics k;
  k.fx = focal;
  k.fy = focal;
  k.cx = width / 2.0 - 0.5;
  k.cy = height / 2.0 - 0.5;
  k.width = width;
  k.height = height;
  return k;
}

struct ScenePair {
  Frame a;
  Frame b;
  PoseSE3 gt_relative;  // frame-A coordinates to frame-B coordinates
  Intrinsics K;
  RenderedSequence seq;
};

inline PoseSE3 relative_pose(const Trajectory& traj, size_t ia, size_t ib) {
  return traj[ib].pose.inverse() * traj[ia].pose;
}

// Tilted sine-textured plane, two frames separated by camera_step.
inline ScenePair textured_plane_pair(const Twist& camera_step, int width = 160, int height = 120,
                                     double noise = 0.0, uint64_t seed = 1) {
  SceneSpec spec;
  spec.intrinsics = camera(width, height, 0.75 * width);
  spec.frame_count = 2;
  spec.planes.push_back({Eigen::Vector3d(0.25, 0.15, -1.0).normalized(), -1.9});
  spec.camera_velocity = camera_step;
  spec.depth_noise_sigma = noise;
  spec.texture.kind = TextureSpec::Kind::Sine;
  spec.texture.cell = 0.45;
  spec.texture.amplitude = 0.4;
  const RenderedSequence seq = render_sequence(spec, seed);

  ScenePair pair;
  pair.a = seq.frames[0];
  pair.b = seq.frames[1];
  pair.gt_relative = relative_pose(seq.trajectory, 0, 1);
  pair.K = spec.intrinsics;
  pair.seq = seq;
  return pair;
}

// Fronto-parallel plane at z = 2 with a camera x-step of exactly one pixel,
// so the warp lands on lattice points and sampling is exact.
inline ScenePair integer_shift_pair(int width = 160, int height = 120) {
  SceneSpec spec;
  spec.intrinsics = camera(width, height, 120.0);
  spec.frame_count = 2;
  spec.planes.push_back({Eigen::Vector3d(0, 0, -1), -2.0});
  spec.camera_velocity = Twist::Zero();
  spec.camera_velocity[0] = 2.0 / 120.0;  // one pixel at fx = 120, z = 2
  spec.texture.kind = TextureSpec::Kind::Sine;
  spec.texture.cell = 0.45;
  spec.texture.amplitude = 0.4;
  const RenderedSequence seq = render_sequence(spec, 1);

  ScenePair pair;
  pair.a = seq.frames[0];
  pair.b = seq.frames[1];
  pair.gt_relative = relative_pose(seq.trajectory, 0, 1);
  pair.K = spec.intrinsics;
  pair.seq = seq;
  return pair;
}

// Dynamic scene: textured plane background, one walking box, moving camera.
inline SceneSpec walking_box_scene(int width = 320, int height = 240, int frames = 3) {
  SceneSpec spec;
  spec.intrinsics = camera(width, height, 0.8 * width);
  spec.frame_count = frames;
  spec.planes.push_back({Eigen::Vector3d(0.1, 0.05, -1.0).normalized(), -2.6});
  // a static box anchors the global gap ratio like furniture would
  spec.static_boxes.push_back({Eigen::Vector3d(-0.8, 0.55, 2.1), Eigen::Vector3d(0.22, 0.18, 0.15)});
  MoverSpec mover;
  // footprint ~= 15% of the frame at z = 1.5
  mover.box.center = Eigen::Vector3d(-0.25, 0.0, 1.55);
  mover.box.half_extent = Eigen::Vector3d(0.22, 0.26, 0.12);
  mover.velocity = Eigen::Vector3d(0.16, 0.0, -0.08);  // lateral + toward camera
  spec.movers.push_back(mover);
  spec.camera_velocity = Twist::Zero();
  spec.camera_velocity[0] = 0.006;
  spec.camera_velocity[4] = 0.003;  // slight pan
  spec.texture.kind = TextureSpec::Kind::Sine;
  spec.texture.cell = 0.5;
  spec.texture.amplitude = 0.4;
  return spec;
}

// Static control: same background and camera motion, box does not move.
inline SceneSpec static_control_scene(int width = 320, int height = 240, int frames = 3) {
  SceneSpec spec = walking_box_scene(width, height, frames);
  spec.movers[0].velocity = Eigen::Vector3d::Zero();
  return spec;
}

inline double rotation_error_deg(const PoseSE3& a, const PoseSE3& b) {
  const Eigen::Matrix3d r = a.rotation().transpose() * b.rotation();
  const double c = std::clamp((r.trace() - 1.0) * 0.5, -1.0, 1.0);
  return std::acos(c) * 180.0 / M_PI;
}

inline double translation_error(const PoseSE3& a, const PoseSE3& b) {
  return (a.translation() - b.translation()).norm();
}

}  // namespace dynvo::fixtures

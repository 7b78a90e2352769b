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
#include <Eigen/Geometry>

namespace dynvo {

// Twist ordering: translational (x,y,z) first, rotational (x,y,z) last.
using Twist = Eigen::Matrix<double, 6, 1>;

struct Intrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;
  double depth_scale = 5000.0;  // raw depth units per meter

  bool valid() const;

  // Intrinsics of the next-coarser pyramid level (dimensions halved,
  // principal point mapped through the pixel-center convention).
  Intrinsics half() const;

  bool contains(double u, double v) const {
    return u >= 0.0 && v >= 0.0 && u <= width - 1.0 && v <= height - 1.0;
  }
};

// Rigid body transform. Rotation is stored as a matrix and re-orthonormalized
// by polar decomposition whenever the defect exceeds 1e-9, so long chains of
// composed increments stay on SO(3).
class PoseSE3 {
 public:
  PoseSE3() : rotation_(Eigen::Matrix3d::Identity()), translation_(Eigen::Vector3d::Zero()) {}
  PoseSE3(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation);

  static PoseSE3 identity() { return PoseSE3(); }

  const Eigen::Matrix3d& rotation() const { return rotation_; }
  const Eigen::Vector3d& translation() const { return translation_; }

  PoseSE3 inverse() const;
  PoseSE3 operator*(const PoseSE3& rhs) const;
  Eigen::Vector3d operator*(const Eigen::Vector3d& point) const {
    return rotation_ * point + translation_;
  }

  Eigen::Matrix4d matrix() const;
  double orthonormality_defect() const;
  bool is_valid() const;

 private:
  Eigen::Matrix3d rotation_;
  Eigen::Vector3d translation_;
};

Eigen::Matrix3d skew(const Eigen::Vector3d& v);

Eigen::Matrix3d so3_exp(const Eigen::Vector3d& w);
Eigen::Vector3d so3_log(const Eigen::Matrix3d& rotation);  // angle in [0, pi]
Eigen::Matrix3d so3_left_jacobian(const Eigen::Vector3d& w);
Eigen::Matrix3d so3_left_jacobian_inverse(const Eigen::Vector3d& w);

PoseSE3 se3_exp(const Twist& xi);
Twist se3_log(const PoseSE3& pose);

// Pinhole backprojection. depth must be positive.
Eigen::Vector3d backproject(const Intrinsics& K, double u, double v, double depth);

struct Projection {
  double u = 0.0;
  double v = 0.0;
  bool behind_camera = false;
  bool in_frame = false;
};

Projection project(const Intrinsics& K, const Eigen::Vector3d& point);

struct Warp {
  double u = 0.0;
  double v = 0.0;
  double transformed_depth = 0.0;  // z of the rigidly transformed point
  bool behind_camera = false;
  bool in_frame = false;
};

// omega(x, xi): backproject, transform by pose, reproject.
Warp warp_pixel(const Intrinsics& K, const PoseSE3& pose, double u, double v, double depth);

}  // namespace dynvo

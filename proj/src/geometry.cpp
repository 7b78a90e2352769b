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
#include "dynvo/geometry.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "dynvo/error.hpp"

namespace dynvo {

namespace {

constexpr double kSmallAngle = 1e-8;       // series switch for exp/log
constexpr double kOrthoDefectTol = 1e-9;   // re-orthonormalization trigger

Eigen::Matrix3d polar_orthonormalize(const Eigen::Matrix3d& m) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0.0) {
    Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
    flip(2, 2) = -1.0;
    r = svd.matrixU() * flip * svd.matrixV().transpose();
  }
  return r;
}

}  // namespace

bool Intrinsics::valid() const {
  return fx > 0.0 && fy > 0.0 && width > 0 && height > 0 && cx >= 0.0 && cx < width &&
         cy >= 0.0 && cy < height && depth_scale > 0.0;
}

Intrinsics Intrinsics::half() const {
  Intrinsics k = *this;
  k.fx = fx * 0.5;
  k.fy = fy * 0.5;
  k.cx = (cx + 0.5) * 0.5 - 0.5;
  k.cy = (cy + 0.5) * 0.5 - 0.5;
  k.width = width / 2;
  k.height = height / 2;
  return k;
}

PoseSE3::PoseSE3(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation)
    : rotation_(rotation), translation_(translation) {
  const double defect = (rotation_.transpose() * rotation_ - Eigen::Matrix3d::Identity()).norm();
  if (defect > kOrthoDefectTol || rotation_.determinant() < 0.0) {
    rotation_ = polar_orthonormalize(rotation_);
  }
}

PoseSE3 PoseSE3::inverse() const {
  return PoseSE3(rotation_.transpose(), -(rotation_.transpose() * translation_));
}

PoseSE3 PoseSE3::operator*(const PoseSE3& rhs) const {
  return PoseSE3(rotation_ * rhs.rotation_, rotation_ * rhs.translation_ + translation_);
}

Eigen::Matrix4d PoseSE3::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation_;
  m.topRightCorner<3, 1>() = translation_;
  return m;
}

double PoseSE3::orthonormality_defect() const {
  return (rotation_.transpose() * rotation_ - Eigen::Matrix3d::Identity()).norm();
}

bool PoseSE3::is_valid() const {
  return rotation_.allFinite() && translation_.allFinite() &&
         orthonormality_defect() < 1e-6 && std::abs(rotation_.determinant() - 1.0) < 1e-6;
}

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d s;
  s << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
      -v.y(), v.x(), 0.0;
  return s;
}

Eigen::Matrix3d so3_exp(const Eigen::Vector3d& w) {
  const double theta = w.norm();
  const Eigen::Matrix3d omega = skew(w);
  if (theta < kSmallAngle) {
    return Eigen::Matrix3d::Identity() + omega + 0.5 * omega * omega;
  }
  const double s = std::sin(theta) / theta;
  const double c = (1.0 - std::cos(theta)) / (theta * theta);
  return Eigen::Matrix3d::Identity() + s * omega + c * omega * omega;
}

Eigen::Vector3d so3_log(const Eigen::Matrix3d& rotation) {
  // Quaternion extraction (largest-diagonal branch inside Eigen) stays stable
  // at every angle including pi, where sin(theta)-based routes blow up.
  Eigen::Quaterniond q(rotation);
  q.normalize();
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();  // angle in [0, pi]
  const double vec_norm = q.vec().norm();
  if (vec_norm < kSmallAngle) {
    return 2.0 * q.vec();  // sin(theta/2) ~ theta/2
  }
  const double angle = 2.0 * std::atan2(vec_norm, q.w());
  return (angle / vec_norm) * q.vec();
}

Eigen::Matrix3d so3_left_jacobian(const Eigen::Vector3d& w) {
  const double theta = w.norm();
  const Eigen::Matrix3d omega = skew(w);
  if (theta < kSmallAngle) {
    return Eigen::Matrix3d::Identity() + 0.5 * omega + (1.0 / 6.0) * omega * omega;
  }
  const double a = (1.0 - std::cos(theta)) / (theta * theta);
  const double b = (theta - std::sin(theta)) / (theta * theta * theta);
  return Eigen::Matrix3d::Identity() + a * omega + b * omega * omega;
}

Eigen::Matrix3d so3_left_jacobian_inverse(const Eigen::Vector3d& w) {
  const double theta = w.norm();
  const Eigen::Matrix3d omega = skew(w);
  if (theta < kSmallAngle) {
    return Eigen::Matrix3d::Identity() - 0.5 * omega + (1.0 / 12.0) * omega * omega;
  }
  const double c = 1.0 / (theta * theta) -
                   (1.0 + std::cos(theta)) / (2.0 * theta * std::sin(theta));
  return Eigen::Matrix3d::Identity() - 0.5 * omega + c * omega * omega;
}

PoseSE3 se3_exp(const Twist& xi) {
  if (!xi.allFinite()) raise(ErrorCode::InvalidArgument, "se3_exp: non-finite twist");
  const Eigen::Vector3d v = xi.head<3>();
  const Eigen::Vector3d w = xi.tail<3>();
  return PoseSE3(so3_exp(w), so3_left_jacobian(w) * v);
}

Twist se3_log(const PoseSE3& pose) {
  const Eigen::Vector3d w = so3_log(pose.rotation());
  Twist xi;
  xi.head<3>() = so3_left_jacobian_inverse(w) * pose.translation();
  xi.tail<3>() = w;
  return xi;
}

Eigen::Vector3d backproject(const Intrinsics& K, double u, double v, double depth) {
  if (!(depth > 0.0)) raise(ErrorCode::InvalidDepth, "backproject: depth must be positive");
  return Eigen::Vector3d((u - K.cx) * depth / K.fx, (v - K.cy) * depth / K.fy, depth);
}

Projection project(const Intrinsics& K, const Eigen::Vector3d& point) {
  Projection p;
  if (!(point.z() > 0.0)) {
    p.behind_camera = true;
    return p;
  }
  p.u = K.fx * point.x() / point.z() + K.cx;
  p.v = K.fy * point.y() / point.z() + K.cy;
  p.in_frame = K.contains(p.u, p.v);
  return p;
}

Warp warp_pixel(const Intrinsics& K, const PoseSE3& pose, double u, double v, double depth) {
  const Eigen::Vector3d transformed = pose * backproject(K, u, v, depth);
  const Projection p = project(K, transformed);
  Warp w;
  w.u = p.u;
  w.v = p.v;
  w.transformed_depth = transformed.z();
  w.behind_camera = p.behind_camera;
  w.in_frame = p.in_frame;
  return w;
}

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::InvalidDepth: return "invalid-depth";
    case ErrorCode::EmptyDepth: return "empty-depth";
    case ErrorCode::InsufficientOverlap: return "insufficient-overlap";
    case ErrorCode::DegenerateGeometry: return "degenerate-geometry";
    case ErrorCode::DegenerateScene: return "degenerate-scene";
    case ErrorCode::IoError: return "io-error";
    case ErrorCode::FormatError: return "format-error";
    case ErrorCode::EmptyAssociation: return "empty-association";
    case ErrorCode::InsufficientData: return "insufficient-data";
  }
  return "unknown";
}

}  // namespace dynvo

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
#include <vector>

#include "dynvo/clustering.hpp"
#include "dynvo/geometry.hpp"
#include "dynvo/image.hpp"
#include "dynvo/motion_mask.hpp"

namespace dynvo {

struct AlignmentConfig {
  double alpha_i = 10.0;          // photometric scale against metric depth residuals
  int pyramid_levels = 3;
  int max_gn_iters = 20;          // per level
  double update_norm_tol = 1e-6;
  // Huber threshold in intensity-equivalent units; the combined residual
  // alpha_i * r_I + r_D switches to the linear regime at alpha_i * huber_delta.
  double huber_delta = 0.03;
  double outlier_kappa = 5.0;     // MAD multiplier for outlier rejection
  int min_valid_residuals = 200;
  double max_condition = 1e12;

  double huber_delta_combined() const { return alpha_i * huber_delta; }
};

struct PixelResidual {
  int u = 0;
  int v = 0;
  double r_i = 0.0;  // photometric
  double r_d = 0.0;  // depth (meters)
};

struct ResidualSet {
  std::vector<PixelResidual> entries;  // valid residuals only
  size_t invalid_count = 0;            // static pixels lost to warp/sampling
  double alpha_i = 10.0;
  double objective = 0.0;              // sum of (alpha_i * r_i + r_d)^2

  size_t valid_count() const { return entries.size(); }
  double combined(const PixelResidual& r) const { return alpha_i * r.r_i + r.r_d; }
};

// Residuals of every STATIC pixel of A with valid depth, warped into B.
// Pixels leaving the frame, landing behind the camera, or sampling invalid
// depth are counted invalid and excluded.
ResidualSet residuals(const Frame& frame_a, const Frame& frame_b, const PoseSE3& pose,
                      const MotionMask& mask, const Intrinsics& intrinsics,
                      const AlignmentConfig& cfg);

struct JacobianRow {
  int u = 0;
  int v = 0;
  double e = 0.0;                  // combined residual
  Eigen::Matrix<double, 1, 6> j;   // d e / d twist (left-multiplicative)
};

// Debug/verification surface: per-pixel combined residuals with their
// analytic Jacobian rows at the given pose.
std::vector<JacobianRow> residual_jacobian(const Frame& frame_a, const Frame& frame_b,
                                           const PoseSE3& pose, const MotionMask& mask,
                                           const Intrinsics& intrinsics,
                                           const AlignmentConfig& cfg);

struct AlignIterationStat {
  int level = 0;
  int iteration = 0;
  double objective = 0.0;     // Huber objective after the accepted step
  double update_norm = 0.0;
  size_t valid = 0;
};

struct AlignResult {
  PoseSE3 pose;
  ResidualSet residual_set;  // at the finest level, final pose
  std::vector<AlignIterationStat> stats;
};

// Coarse-to-fine Gauss-Newton over the Huber-weighted combined residual.
// Accepted steps never increase the Huber objective (step halving up to five
// times, else the level terminates).
AlignResult gauss_newton_align(const Frame& frame_a, const Frame& frame_b, const PoseSE3& init,
                               const MotionMask& mask, const Intrinsics& intrinsics,
                               const AlignmentConfig& cfg);

// Flips STATIC pixels whose combined residual magnitude exceeds
// median + outlier_kappa * MAD to DYNAMIC; a depth-cluster connected
// component with more than half of its static members flipped flips entirely.
// DYNAMIC pixels never flip back.
MotionMask reject_outliers(const ResidualSet& rset, const MotionMask& mask,
                           const ComponentMap& components, const AlignmentConfig& cfg);

}  // namespace dynvo

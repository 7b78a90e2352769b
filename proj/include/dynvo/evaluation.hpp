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

#include "dynvo/dataset.hpp"
#include "dynvo/geometry.hpp"

namespace dynvo {

struct MetricReport {
  double trans_rmse = 0.0;
  double trans_mean = 0.0;
  double trans_median = 0.0;
  double trans_max = 0.0;
  double trans_min = 0.0;
  double rot_rmse = 0.0;  // degrees (or deg/s for RPE)
  double rot_mean = 0.0;
  double rot_max = 0.0;
  size_t samples = 0;

  std::vector<double> per_sample_trans;  // plot-data series
};

// Relative pose error over a fixed time delta:
// E = (Q_t^-1 Q_{t+d})^-1 (P_t^-1 P_{t+d}); translational part reported in
// m/s, rotational in deg/s.
MetricReport relative_pose_error(const Trajectory& gt, const Trajectory& est,
                                 double delta = 1.0, double assoc_tol = 0.02);

// Absolute trajectory error after closed-form least-squares rigid alignment
// (no scale; RGB-D is metric).
MetricReport absolute_trajectory_error(const Trajectory& gt, const Trajectory& est,
                                       double assoc_tol = 0.02, bool with_rotation = false);

// Rigid transform T minimizing sum || gt_i - T * est_i ||^2 via the
// cross-covariance SVD; the sign of the smallest singular vector is chosen to
// keep det = +1.
PoseSE3 rigid_align(const std::vector<Eigen::Vector3d>& est,
                    const std::vector<Eigen::Vector3d>& gt);

// Timestamp association shared by both metrics (greedy nearest within tol).
std::vector<std::pair<size_t, size_t>> associate_trajectories(const Trajectory& gt,
                                                              const Trajectory& est,
                                                              double tol);

std::string metric_report_csv(const MetricReport& report, const std::string& label);

}  // namespace dynvo

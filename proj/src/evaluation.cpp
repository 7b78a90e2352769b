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
#include "dynvo/evaluation.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "dynvo/error.hpp"

namespace dynvo {

namespace {

double rotation_angle_deg(const Eigen::Matrix3d& r) {
  // quaternion-based log: exact zero on identical rotations, stable at pi
  return so3_log(r).norm() * 180.0 / M_PI;
}

struct Stats {
  double rmse = 0.0, mean = 0.0, median = 0.0, max = 0.0, min = 0.0;
};

Stats summarize(std::vector<double> values) {
  Stats s;
  if (values.empty()) return s;
  double sum = 0.0;
  double sum_sq = 0.0;
  s.max = values.front();
  s.min = values.front();
  for (double v : values) {
    sum += v;
    sum_sq += v * v;
    s.max = std::max(s.max, v);
    s.min = std::min(s.min, v);
  }
  s.mean = sum / values.size();
  s.rmse = std::sqrt(sum_sq / values.size());
  const size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  s.median = values[mid];
  return s;
}

}  // namespace

std::vector<std::pair<size_t, size_t>> associate_trajectories(const Trajectory& gt,
                                                              const Trajectory& est,
                                                              double tol) {
  struct Candidate {
    double dt;
    size_t g, e;
  };
  std::vector<Candidate> candidates;
  size_t lo = 0;
  for (size_t e = 0; e < est.size(); ++e) {
    while (lo < gt.size() && gt[lo].timestamp < est[e].timestamp - tol) ++lo;
    for (size_t g = lo; g < gt.size() && gt[g].timestamp <= est[e].timestamp + tol; ++g) {
      candidates.push_back({std::abs(gt[g].timestamp - est[e].timestamp), g, e});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.dt != b.dt) return a.dt < b.dt;
    if (a.g != b.g) return a.g < b.g;
    return a.e < b.e;
  });
  std::vector<char> gt_used(gt.size(), 0);
  std::vector<char> est_used(est.size(), 0);
  std::vector<std::pair<size_t, size_t>> matches;
  for (const Candidate& c : candidates) {
    if (gt_used[c.g] || est_used[c.e]) continue;
    gt_used[c.g] = 1;
    est_used[c.e] = 1;
    matches.emplace_back(c.g, c.e);
  }
  std::sort(matches.begin(), matches.end(),
            [&](const auto& a, const auto& b) { return est[a.second].timestamp < est[b.second].timestamp; });
  return matches;
}

MetricReport relative_pose_error(const Trajectory& gt, const Trajectory& est, double delta,
                                 double assoc_tol) {
  if (gt.empty() || est.empty()) raise(ErrorCode::EmptyAssociation, "empty trajectory");
  const auto matches = associate_trajectories(gt, est, assoc_tol);
  if (matches.empty()) raise(ErrorCode::EmptyAssociation, "no associable timestamps");

  std::vector<double> trans_errors;
  std::vector<double> rot_errors;
  for (size_t i = 0; i < matches.size(); ++i) {
    const double target = est[matches[i].second].timestamp + delta;
    // nearest later match at t + delta
    size_t best = matches.size();
    double best_dt = assoc_tol;
    for (size_t j = i + 1; j < matches.size(); ++j) {
      const double dt = std::abs(est[matches[j].second].timestamp - target);
      if (dt <= best_dt) {
        best_dt = dt;
        best = j;
      }
      if (est[matches[j].second].timestamp > target + assoc_tol) break;
    }
    if (best == matches.size()) continue;

    const PoseSE3& q0 = gt[matches[i].first].pose;
    const PoseSE3& q1 = gt[matches[best].first].pose;
    const PoseSE3& p0 = est[matches[i].second].pose;
    const PoseSE3& p1 = est[matches[best].second].pose;
    const PoseSE3 error = (q0.inverse() * q1).inverse() * (p0.inverse() * p1);
    trans_errors.push_back(error.translation().norm() / delta);
    rot_errors.push_back(rotation_angle_deg(error.rotation()) / delta);
  }
  if (trans_errors.empty()) raise(ErrorCode::EmptyAssociation, "no pose pairs at the given delta");

  MetricReport report;
  const Stats ts = summarize(trans_errors);
  const Stats rs = summarize(rot_errors);
  report.trans_rmse = ts.rmse;
  report.trans_mean = ts.mean;
  report.trans_median = ts.median;
  report.trans_max = ts.max;
  report.trans_min = ts.min;
  report.rot_rmse = rs.rmse;
  report.rot_mean = rs.mean;
  report.rot_max = rs.max;
  report.samples = trans_errors.size();
  report.per_sample_trans = std::move(trans_errors);
  return report;
}

PoseSE3 rigid_align(const std::vector<Eigen::Vector3d>& est,
                    const std::vector<Eigen::Vector3d>& gt) {
  if (est.size() != gt.size() || est.size() < 3) {
    raise(ErrorCode::InsufficientData, "rigid_align: need >= 3 paired points");
  }
  Eigen::Vector3d c_est = Eigen::Vector3d::Zero();
  Eigen::Vector3d c_gt = Eigen::Vector3d::Zero();
  for (size_t i = 0; i < est.size(); ++i) {
    c_est += est[i];
    c_gt += gt[i];
  }
  c_est /= static_cast<double>(est.size());
  c_gt /= static_cast<double>(gt.size());

  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  for (size_t i = 0; i < est.size(); ++i) {
    h += (est[i] - c_est) * (gt[i] - c_gt).transpose();
  }
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  // Canonical tie-break for degenerate sets: flip the smallest singular
  // vector so the determinant stays +1.
  if ((svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0) d(2, 2) = -1.0;
  const Eigen::Matrix3d r = svd.matrixV() * d * svd.matrixU().transpose();
  return PoseSE3(r, c_gt - r * c_est);
}

MetricReport absolute_trajectory_error(const Trajectory& gt, const Trajectory& est,
                                       double assoc_tol, bool with_rotation) {
  const auto matches = associate_trajectories(gt, est, assoc_tol);
  if (matches.size() < 3) raise(ErrorCode::InsufficientData, "ATE needs >= 3 associated poses");

  std::vector<Eigen::Vector3d> est_points(matches.size());
  std::vector<Eigen::Vector3d> gt_points(matches.size());
  for (size_t i = 0; i < matches.size(); ++i) {
    gt_points[i] = gt[matches[i].first].pose.translation();
    est_points[i] = est[matches[i].second].pose.translation();
  }
  const PoseSE3 alignment = rigid_align(est_points, gt_points);

  std::vector<double> trans_errors(matches.size());
  std::vector<double> rot_errors;
  for (size_t i = 0; i < matches.size(); ++i) {
    trans_errors[i] = (gt_points[i] - alignment * est_points[i]).norm();
  }
  if (with_rotation) {
    rot_errors.reserve(matches.size());
    for (size_t i = 0; i < matches.size(); ++i) {
      const Eigen::Matrix3d r = gt[matches[i].first].pose.rotation().transpose() *
                                alignment.rotation() * est[matches[i].second].pose.rotation();
      rot_errors.push_back(rotation_angle_deg(r));
    }
  }

  MetricReport report;
  const Stats ts = summarize(trans_errors);
  report.trans_rmse = ts.rmse;
  report.trans_mean = ts.mean;
  report.trans_median = ts.median;
  report.trans_max = ts.max;
  report.trans_min = ts.min;
  if (with_rotation) {
    const Stats rs = summarize(rot_errors);
    report.rot_rmse = rs.rmse;
    report.rot_mean = rs.mean;
    report.rot_max = rs.max;
  }
  report.samples = matches.size();
  report.per_sample_trans = std::move(trans_errors);
  return report;
}

std::string metric_report_csv(const MetricReport& report, const std::string& label) {
  std::ostringstream out;
  out.precision(9);
  out << "metric,samples,trans_rmse,trans_mean,trans_median,trans_max,trans_min,"
         "rot_rmse,rot_mean,rot_max\n";
  out << label << ',' << report.samples << ',' << report.trans_rmse << ',' << report.trans_mean
      << ',' << report.trans_median << ',' << report.trans_max << ',' << report.trans_min << ','
      << report.rot_rmse << ',' << report.rot_mean << ',' << report.rot_max << '\n';
  return out.str();
}

}  // namespace dynvo

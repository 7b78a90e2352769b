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
#include "dynvo/alignment.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "dynvo/error.hpp"
#include "dynvo/log.hpp"

namespace dynvo {

namespace {

using Matrix6d = Eigen::Matrix<double, 6, 6>;
using Vector6d = Eigen::Matrix<double, 6, 1>;
using RowJ = Eigen::Matrix<double, 1, 6>;

struct LevelData {
  Intrinsics K;
  IntensityImage intensity_a;
  DepthImage depth_a;
  IntensityImage intensity_b;
  DepthImage depth_b;
  MotionMask mask;
};

double huber_cost(double e, double delta) {
  const double a = std::abs(e);
  return a <= delta ? 0.5 * e * e : delta * (a - 0.5 * delta);
}

double huber_weight(double e, double delta) {
  const double a = std::abs(e);
  return a <= delta ? 1.0 : delta / a;
}

struct Evaluation {
  std::vector<PixelResidual> entries;
  std::vector<RowJ> jacobians;  // parallel to entries when requested
  size_t invalid = 0;
  double plain_objective = 0.0;
  double huber_objective = 0.0;
};

Evaluation evaluate_level(const LevelData& level, const PoseSE3& pose, double alpha,
                          double huber_delta, bool with_jacobian) {
  Evaluation out;
  const Intrinsics& K = level.K;
  const Eigen::Matrix3d& R = pose.rotation();
  const Eigen::Vector3d& t = pose.translation();

  out.entries.reserve(level.depth_a.size() / 4);
  for (int v = 0; v < K.height; ++v) {
    for (int u = 0; u < K.width; ++u) {
      if (level.mask.at(u, v) != PixelState::Static) continue;
      const double d = level.depth_a.at(u, v);
      if (d <= 0.0) continue;

      const Eigen::Vector3d point((u - K.cx) * d / K.fx, (v - K.cy) * d / K.fy, d);
      const Eigen::Vector3d q = R * point + t;
      if (q.z() <= 1e-6) {
        ++out.invalid;
        continue;
      }
      const double inv_z = 1.0 / q.z();
      const double wu = K.fx * q.x() * inv_z + K.cx;
      const double wv = K.fy * q.y() * inv_z + K.cy;

      const SampleGrad ib = sample_bilinear_grad(level.intensity_b, wu, wv);
      const SampleGrad db = sample_bilinear_grad_depth(level.depth_b, wu, wv);
      if (!ib.valid || !db.valid) {
        ++out.invalid;
        continue;
      }

      const double r_i = ib.value - level.intensity_a.at(u, v);
      const double r_d = db.value - q.z();
      out.entries.push_back({u, v, r_i, r_d});

      const double e = alpha * r_i + r_d;
      out.plain_objective += e * e;
      out.huber_objective += huber_cost(e, huber_delta);

      if (with_jacobian) {
        // d(warp pixel)/d(transformed point)
        Eigen::Matrix<double, 2, 3> j_proj;
        j_proj << K.fx * inv_z, 0.0, -K.fx * q.x() * inv_z * inv_z,
                  0.0, K.fy * inv_z, -K.fy * q.y() * inv_z * inv_z;
        // d(transformed point)/d(left-multiplied twist) = [I | -[q]x]
        Eigen::Matrix<double, 3, 6> j_point;
        j_point.leftCols<3>() = Eigen::Matrix3d::Identity();
        j_point.rightCols<3>() = -skew(q);

        const Eigen::Matrix<double, 2, 6> j_warp = j_proj * j_point;
        const RowJ j_int = Eigen::Matrix<double, 1, 2>(ib.du, ib.dv) * j_warp;
        RowJ j_dep = Eigen::Matrix<double, 1, 2>(db.du, db.dv) * j_warp;
        j_dep -= j_point.row(2);  // minus d(q_z)/d(twist)
        out.jacobians.push_back(alpha * j_int + j_dep);
      }
    }
  }
  return out;
}

ResidualSet to_residual_set(Evaluation&& eval, double alpha) {
  ResidualSet set;
  set.entries = std::move(eval.entries);
  set.invalid_count = eval.invalid;
  set.alpha_i = alpha;
  set.objective = eval.plain_objective;
  return set;
}

LevelData make_level(const Frame& a, const Frame& b, const MotionMask& mask,
                     const Intrinsics& K) {
  return LevelData{K, a.intensity, a.depth, b.intensity, b.depth, mask};
}

LevelData downsample(const LevelData& level) {
  return LevelData{level.K.half(),
                   dynvo::downsample(level.intensity_a),
                   downsample_depth(level.depth_a),
                   dynvo::downsample(level.intensity_b),
                   downsample_depth(level.depth_b),
                   level.mask.downsample()};
}

}  // namespace

ResidualSet residuals(const Frame& frame_a, const Frame& frame_b, const PoseSE3& pose,
                      const MotionMask& mask, const Intrinsics& intrinsics,
                      const AlignmentConfig& cfg) {
  if (mask.width != frame_a.width() || mask.height != frame_a.height()) {
    raise(ErrorCode::InvalidArgument, "residuals: mask dimension mismatch");
  }
  Evaluation eval = evaluate_level(make_level(frame_a, frame_b, mask, intrinsics), pose,
                                   cfg.alpha_i, cfg.huber_delta_combined(), false);
  if (eval.entries.size() < static_cast<size_t>(cfg.min_valid_residuals)) {
    raise(ErrorCode::InsufficientOverlap,
          "residuals: " + std::to_string(eval.entries.size()) + " valid residuals");
  }
  return to_residual_set(std::move(eval), cfg.alpha_i);
}

std::vector<JacobianRow> residual_jacobian(const Frame& frame_a, const Frame& frame_b,
                                           const PoseSE3& pose, const MotionMask& mask,
                                           const Intrinsics& intrinsics,
                                           const AlignmentConfig& cfg) {
  Evaluation eval = evaluate_level(make_level(frame_a, frame_b, mask, intrinsics), pose,
                                   cfg.alpha_i, cfg.huber_delta_combined(), true);
  std::vector<JacobianRow> rows(eval.entries.size());
  for (size_t i = 0; i < eval.entries.size(); ++i) {
    rows[i].u = eval.entries[i].u;
    rows[i].v = eval.entries[i].v;
    rows[i].e = cfg.alpha_i * eval.entries[i].r_i + eval.entries[i].r_d;
    rows[i].j = eval.jacobians[i];
  }
  return rows;
}

AlignResult gauss_newton_align(const Frame& frame_a, const Frame& frame_b, const PoseSE3& init,
                               const MotionMask& mask, const Intrinsics& intrinsics,
                               const AlignmentConfig& cfg) {
  if (cfg.pyramid_levels < 1 || cfg.alpha_i <= 0.0 || cfg.update_norm_tol <= 0.0) {
    raise(ErrorCode::InvalidArgument, "gauss_newton_align: bad config");
  }
  if (!init.is_valid()) raise(ErrorCode::InvalidArgument, "gauss_newton_align: invalid init pose");

  std::vector<LevelData> pyramid;
  pyramid.push_back(make_level(frame_a, frame_b, mask, intrinsics));
  for (int l = 1; l < cfg.pyramid_levels; ++l) {
    const LevelData& prev = pyramid.back();
    if (prev.K.width / 2 < 32 || prev.K.height / 2 < 32) break;  // keep levels usable
    pyramid.push_back(downsample(prev));
  }

  const double delta = cfg.huber_delta_combined();
  PoseSE3 pose = init;
  AlignResult result;

  for (int l = static_cast<int>(pyramid.size()) - 1; l >= 0; --l) {
    const LevelData& level = pyramid[static_cast<size_t>(l)];
    Evaluation cur = evaluate_level(level, pose, cfg.alpha_i, delta, true);
    if (cur.entries.size() < static_cast<size_t>(cfg.min_valid_residuals)) {
      raise(ErrorCode::InsufficientOverlap, "level " + std::to_string(l) + ": " +
                                                std::to_string(cur.entries.size()) +
                                                " valid residuals");
    }

    for (int iter = 0; iter < cfg.max_gn_iters; ++iter) {
      Matrix6d h = Matrix6d::Zero();
      Vector6d b = Vector6d::Zero();
      for (size_t i = 0; i < cur.entries.size(); ++i) {
        const double e = cfg.alpha_i * cur.entries[i].r_i + cur.entries[i].r_d;
        const double w = huber_weight(e, delta);
        const RowJ& j = cur.jacobians[i];
        h.noalias() += w * j.transpose() * j;
        b.noalias() += w * j.transpose() * e;
      }

      const Eigen::SelfAdjointEigenSolver<Matrix6d> eig(h);
      const double lambda_min = eig.eigenvalues().minCoeff();
      const double lambda_max = eig.eigenvalues().maxCoeff();
      if (lambda_min <= 0.0 || lambda_max / lambda_min > cfg.max_condition) {
        raise(ErrorCode::DegenerateGeometry,
              "normal matrix condition exceeds " + std::to_string(cfg.max_condition));
      }

      const Vector6d step = h.ldlt().solve(-b);
      const double step_norm = step.norm();
      if (step_norm < cfg.update_norm_tol) {
        result.stats.push_back({l, iter, cur.huber_objective, step_norm, cur.entries.size()});
        break;
      }

      bool accepted = false;
      Vector6d trial = step;
      for (int halving = 0; halving <= 5; ++halving) {
        const PoseSE3 candidate_pose = se3_exp(trial) * pose;
        Evaluation candidate = evaluate_level(level, candidate_pose, cfg.alpha_i, delta, true);
        if (candidate.entries.size() >= static_cast<size_t>(cfg.min_valid_residuals) &&
            candidate.huber_objective <= cur.huber_objective) {
          pose = candidate_pose;
          cur = std::move(candidate);
          accepted = true;
          break;
        }
        trial *= 0.5;
      }
      result.stats.push_back({l, iter, cur.huber_objective, step_norm, cur.entries.size()});
      if (!accepted) break;  // no descent direction left at this level
    }
  }

  result.pose = pose;
  result.residual_set = to_residual_set(
      evaluate_level(pyramid.front(), pose, cfg.alpha_i, delta, false), cfg.alpha_i);
  return result;
}

MotionMask reject_outliers(const ResidualSet& rset, const MotionMask& mask,
                           const ComponentMap& components, const AlignmentConfig& cfg) {
  MotionMask out = mask;
  if (rset.entries.empty()) return out;

  std::vector<double> magnitudes(rset.entries.size());
  for (size_t i = 0; i < rset.entries.size(); ++i) {
    magnitudes[i] = std::abs(rset.combined(rset.entries[i]));
  }
  auto median_of = [](std::vector<double>& v) {
    const size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    return v[mid];
  };
  std::vector<double> tmp = magnitudes;
  const double median = median_of(tmp);
  for (size_t i = 0; i < tmp.size(); ++i) tmp[i] = std::abs(magnitudes[i] - median);
  const double mad = median_of(tmp);
  const double threshold = median + cfg.outlier_kappa * mad;

  // Per-component bookkeeping for the object-level coherence rule.
  std::vector<int> eligible(components.count(), 0);
  std::vector<int> flipped(components.count(), 0);
  for (int v = 0; v < mask.height; ++v) {
    for (int u = 0; u < mask.width; ++u) {
      if (mask.at(u, v) != PixelState::Static) continue;
      const int comp = components.label(u, v);
      if (comp != kInvalidLabel) eligible[comp] += 1;
    }
  }

  for (size_t i = 0; i < rset.entries.size(); ++i) {
    if (magnitudes[i] <= threshold) continue;
    const PixelResidual& r = rset.entries[i];
    if (mask.at(r.u, r.v) != PixelState::Static) continue;
    out.set(r.u, r.v, PixelState::Dynamic);
    const int comp = components.label(r.u, r.v);
    if (comp != kInvalidLabel) flipped[comp] += 1;
  }

  std::vector<char> flip_component(components.count(), 0);
  for (int c = 0; c < components.count(); ++c) {
    if (eligible[c] > 0 && flipped[c] * 2 > eligible[c]) flip_component[c] = 1;
  }
  for (int v = 0; v < mask.height; ++v) {
    for (int u = 0; u < mask.width; ++u) {
      if (mask.at(u, v) != PixelState::Static) continue;
      const int comp = components.label(u, v);
      if (comp != kInvalidLabel && flip_component[comp]) out.set(u, v, PixelState::Dynamic);
    }
  }
  return out;
}

}  // namespace dynvo

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
#include <doctest.h>

#include <cmath>
#include <random>

#include "dynvo/error.hpp"
#include "dynvo/geometry.hpp"

using namespace dynvo;

namespace {

// Independent route for the rotation: truncated Taylor series of exp([w]x).
Eigen::Matrix3d taylor_rotation(const Eigen::Vector3d& w) {
  const Eigen::Matrix3d omega = skew(w);
  Eigen::Matrix3d sum = Eigen::Matrix3d::Identity();
  Eigen::Matrix3d term = Eigen::Matrix3d::Identity();
  for (int k = 1; k <= 40; ++k) {
    term = term * omega / k;
    sum += term;
  }
  return sum;
}

// Independent route for the left Jacobian: Simpson quadrature of
// integral_0^1 exp(s [w]x) ds.
Eigen::Matrix3d quadrature_left_jacobian(const Eigen::Vector3d& w) {
  const int n = 2000;  // even
  Eigen::Matrix3d sum = Eigen::Matrix3d::Zero();
  for (int i = 0; i <= n; ++i) {
    const double s = static_cast<double>(i) / n;
    const double coeff = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    sum += coeff * taylor_rotation(s * w);
  }
  return sum / (3.0 * n);
}

Twist random_twist(std::mt19937& rng, double max_angle) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> angle_dist(0.0, max_angle);
  Eigen::Vector3d axis(unit(rng), unit(rng), unit(rng));
  while (axis.norm() < 1e-6) axis = Eigen::Vector3d(unit(rng), unit(rng), unit(rng));
  axis.normalize();
  Twist xi;
  xi.head<3>() = 2.0 * Eigen::Vector3d(unit(rng), unit(rng), unit(rng));
  xi.tail<3>() = angle_dist(rng) * axis;
  return xi;
}

Intrinsics test_intrinsics() {
  Intrinsics k;
  k.fx = 100.0;
  k.fy = 100.0;
  k.cx = 100.0;
  k.cy = 100.0;
  k.width = 201;
  k.height = 201;
  return k;
}

}  // namespace

TEST_CASE("se3_exp: zero twist gives the identity") {
  const PoseSE3 p = se3_exp(Twist::Zero());
  CHECK((p.rotation() - Eigen::Matrix3d::Identity()).norm() == doctest::Approx(0.0));
  CHECK(p.translation().norm() == doctest::Approx(0.0));
}

TEST_CASE("se3_exp: pure translation keeps rotation at identity") {
  Twist xi = Twist::Zero();
  xi[0] = 0.1;
  const PoseSE3 p = se3_exp(xi);
  CHECK((p.rotation() - Eigen::Matrix3d::Identity()).norm() < 1e-15);
  CHECK(p.translation().isApprox(Eigen::Vector3d(0.1, 0.0, 0.0), 1e-15));
}

TEST_CASE("se3_exp: 90-degree z rotation matches the hand-computed oracle") {
  Twist xi = Twist::Zero();
  xi[5] = M_PI / 2.0;
  const PoseSE3 p = se3_exp(xi);
  Eigen::Matrix3d expected;
  expected << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  CHECK((p.rotation() - expected).norm() < 1e-12);
  CHECK(p.translation().norm() < 1e-12);

  // With translation: t = J_l(pi/2 z) * v; the closed form works out to
  // J_l = [[2/pi, -2/pi, 0], [2/pi, 2/pi, 0], [0, 0, 1]].
  xi[0] = 0.1;
  xi[1] = 0.2;
  xi[2] = 0.3;
  const PoseSE3 q = se3_exp(xi);
  CHECK(q.translation().x() == doctest::Approx(-0.2 / M_PI).epsilon(1e-12));
  CHECK(q.translation().y() == doctest::Approx(0.6 / M_PI).epsilon(1e-12));
  CHECK(q.translation().z() == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("se3_exp agrees with the series/quadrature oracle on random twists") {
  std::mt19937 rng(7);
  for (int i = 0; i < 50; ++i) {
    const Twist xi = random_twist(rng, M_PI - 1e-3);
    const PoseSE3 p = se3_exp(xi);
    const Eigen::Matrix3d r_oracle = taylor_rotation(xi.tail<3>());
    const Eigen::Vector3d t_oracle = quadrature_left_jacobian(xi.tail<3>()) * xi.head<3>();
    CHECK((p.rotation() - r_oracle).norm() < 1e-9);
    CHECK((p.translation() - t_oracle).norm() < 1e-9);
  }
}

TEST_CASE("se3_exp rejects non-finite input") {
  Twist xi = Twist::Zero();
  xi[2] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(se3_exp(xi), Error);
}

TEST_CASE("se3_log: identity and translation-only poses") {
  CHECK(se3_log(PoseSE3::identity()).norm() == doctest::Approx(0.0));

  const PoseSE3 p(Eigen::Matrix3d::Identity(), Eigen::Vector3d(0.0, 0.0, 0.5));
  const Twist xi = se3_log(p);
  CHECK(xi.head<3>().isApprox(Eigen::Vector3d(0.0, 0.0, 0.5), 1e-15));
  CHECK(xi.tail<3>().norm() == doctest::Approx(0.0));
}

TEST_CASE("exp/log roundtrip over 1000 random poses within 1e-9") {
  std::mt19937 rng(11);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const PoseSE3 p = se3_exp(random_twist(rng, M_PI - 1e-3));
    const PoseSE3 q = se3_exp(se3_log(p));
    const double err = (p.rotation() - q.rotation()).norm() +
                       (p.translation() - q.translation()).norm();
    worst = std::max(worst, err);
    const Twist xi = se3_log(p);
    CHECK(xi.tail<3>().norm() <= M_PI + 1e-12);  // angle stays in [0, pi]
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("se3_log handles rotations at and near pi") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    Eigen::Vector3d axis(unit(rng), unit(rng), unit(rng));
    axis.normalize();
    for (double angle : {M_PI, M_PI - 1e-7}) {
      const PoseSE3 p(so3_exp(angle * axis), Eigen::Vector3d(0.2, -0.1, 0.4));
      const Twist xi = se3_log(p);
      CHECK(std::isfinite(xi.norm()));
      const PoseSE3 q = se3_exp(xi);
      CHECK((p.rotation() - q.rotation()).norm() < 1e-7);
      CHECK((p.translation() - q.translation()).norm() < 1e-7);
    }
  }
}

TEST_CASE("rotations stay orthonormal over 10000 composed increments") {
  std::mt19937 rng(17);
  PoseSE3 pose;
  const PoseSE3 step = se3_exp(random_twist(rng, 0.01));
  for (int i = 0; i < 10000; ++i) pose = step * pose;
  CHECK(pose.orthonormality_defect() < 1e-9);
  CHECK(pose.rotation().determinant() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("backproject: principal point and pinhole formula") {
  const Intrinsics k = test_intrinsics();
  CHECK(backproject(k, 100.0, 100.0, 2.0).isApprox(Eigen::Vector3d(0, 0, 2), 1e-15));
  CHECK(backproject(k, 150.0, 100.0, 2.0).isApprox(Eigen::Vector3d(1, 0, 2), 1e-15));
  CHECK_THROWS_AS(backproject(k, 10.0, 10.0, 0.0), Error);
  CHECK_THROWS_AS(backproject(k, 10.0, 10.0, -1.0), Error);
}

TEST_CASE("project: examples and flags") {
  const Intrinsics k = test_intrinsics();
  Projection p = project(k, Eigen::Vector3d(0, 0, 1));
  CHECK(p.u == doctest::Approx(100.0));
  CHECK(p.v == doctest::Approx(100.0));
  CHECK(p.in_frame);

  p = project(k, Eigen::Vector3d(1, 0, 2));
  CHECK(p.u == doctest::Approx(150.0));

  p = project(k, Eigen::Vector3d(1, 0, 1.5));
  CHECK(p.u == doctest::Approx(100.0 + 100.0 / 1.5).epsilon(1e-12));  // 166.667
  CHECK(p.v == doctest::Approx(100.0));

  p = project(k, Eigen::Vector3d(10, 0, 1));  // u = 1100, far out of frame
  CHECK_FALSE(p.in_frame);
  CHECK_FALSE(p.behind_camera);

  p = project(k, Eigen::Vector3d(0, 0, -1));
  CHECK(p.behind_camera);
}

TEST_CASE("project/backproject roundtrip on 100 random in-bounds pixels") {
  const Intrinsics k = test_intrinsics();
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> du(0.0, k.width - 1.0);
  std::uniform_real_distribution<double> dd(0.1, 10.0);
  for (int i = 0; i < 100; ++i) {
    const double u = du(rng);
    const double v = du(rng);
    const double d = dd(rng);
    const Projection p = project(k, backproject(k, u, v, d));
    CHECK(std::abs(p.u - u) < 1e-9);
    CHECK(std::abs(p.v - v) < 1e-9);
  }
}

TEST_CASE("warp_pixel: identity pose is the identity warp") {
  const Intrinsics k = test_intrinsics();
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> du(0.0, k.width - 1.0);
  std::uniform_real_distribution<double> dd(0.1, 10.0);
  for (int i = 0; i < 100; ++i) {
    const double u = du(rng);
    const double v = du(rng);
    const Warp w = warp_pixel(k, PoseSE3::identity(), u, v, dd(rng));
    CHECK(std::abs(w.u - u) < 1e-12);
    CHECK(std::abs(w.v - v) < 1e-12);
  }
}

TEST_CASE("warp_pixel: chained hand-checked example") {
  const Intrinsics k = test_intrinsics();
  // pixel (150,100) at depth 2 backprojects to (1,0,2); moving by (0,0,-0.5)
  // puts it at (1,0,1.5) -> (166.667,100).
  const PoseSE3 pose(Eigen::Matrix3d::Identity(), Eigen::Vector3d(0, 0, -0.5));
  const Warp w = warp_pixel(k, pose, 150.0, 100.0, 2.0);
  CHECK(w.u == doctest::Approx(100.0 + 100.0 / 1.5).epsilon(1e-12));
  CHECK(w.v == doctest::Approx(100.0));
  CHECK(w.transformed_depth == doctest::Approx(1.5));
  CHECK(w.in_frame);
}

TEST_CASE("warp_pixel: pure z-rotation closed form at 90 degrees") {
  const Intrinsics k = test_intrinsics();
  Twist xi = Twist::Zero();
  xi[5] = M_PI / 2.0;
  const PoseSE3 pose = se3_exp(xi);
  const double r = 30.0;
  const Warp w = warp_pixel(k, pose, k.cx + r, k.cy, 2.0);
  // (cx + r cos t, cy + r sin t * fy/fx) with fy = fx
  CHECK(w.u == doctest::Approx(k.cx).epsilon(1e-10));
  CHECK(w.v == doctest::Approx(k.cy + r).epsilon(1e-10));
}

TEST_CASE("warp_pixel flags points moved behind the camera") {
  const Intrinsics k = test_intrinsics();
  const PoseSE3 pose(Eigen::Matrix3d::Identity(), Eigen::Vector3d(0, 0, -3.0));
  const Warp w = warp_pixel(k, pose, 100.0, 100.0, 2.0);
  CHECK(w.behind_camera);
  CHECK_FALSE(w.in_frame);
}

TEST_CASE("intrinsics validity") {
  Intrinsics k = test_intrinsics();
  CHECK(k.valid());
  k.fx = -1.0;
  CHECK_FALSE(k.valid());
  k = test_intrinsics();
  k.cx = k.width;
  CHECK_FALSE(k.valid());
}

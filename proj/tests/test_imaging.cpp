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
#include "dynvo/image.hpp"

using namespace dynvo;

namespace {

DepthImage from_rows(int width, int height, const std::vector<double>& values) {
  DepthImage img(width, height);
  img.data() = values;
  return img;
}

}  // namespace

TEST_CASE("fill_depth_rows: right-neighbor rule on a single row") {
  const DepthImage in = from_rows(4, 1, {2.0, 0.0, 0.0, 3.0});
  const DepthImage out = fill_depth_rows(in);
  CHECK(out.at(0, 0) == doctest::Approx(2.0));
  CHECK(out.at(1, 0) == doctest::Approx(3.0));
  CHECK(out.at(2, 0) == doctest::Approx(3.0));
  CHECK(out.at(3, 0) == doctest::Approx(3.0));
}

TEST_CASE("fill_depth_rows: all-zero tail falls back to the left neighbor") {
  const DepthImage in = from_rows(4, 1, {2.0, 1.5, 0.0, 0.0});
  const DepthImage out = fill_depth_rows(in);
  CHECK(out.at(2, 0) == doctest::Approx(1.5));
  CHECK(out.at(3, 0) == doctest::Approx(1.5));
}

TEST_CASE("fill_depth_rows: a hole-free image is unchanged before closing") {
  DepthImage in(8, 6);
  for (int v = 0; v < 6; ++v) {
    for (int u = 0; u < 8; ++u) in.at(u, v) = 1.0 + 0.1 * u + 0.05 * v;
  }
  const DepthImage out = fill_depth_rows(in);
  CHECK(out.data() == in.data());
}

TEST_CASE("fill_depth_holes: fully-zero rows stay invalid") {
  DepthImage in(5, 3, 2.0);
  for (int u = 0; u < 5; ++u) in.at(u, 1) = 0.0;
  const DepthImage out = fill_depth_holes(in);
  for (int u = 0; u < 5; ++u) CHECK(out.at(u, 1) == 0.0);
  CHECK(out.at(2, 0) == doctest::Approx(2.0));

  const DepthImage zero(4, 4, 0.0);
  const DepthImage zout = fill_depth_holes(zero);
  for (double d : zout.data()) CHECK(d == 0.0);
}

TEST_CASE("fill_depth_holes removes every hole outside fully-zero rows") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> depth(0.5, 4.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  DepthImage in(64, 48);
  for (auto& d : in.data()) d = coin(rng) < 0.05 ? 0.0 : depth(rng);
  // ensure at least one valid pixel per row (no fully-zero rows by construction)
  for (int v = 0; v < 48; ++v) in.at(0, v) = depth(rng);

  const DepthImage out = fill_depth_holes(in);
  int holes = 0;
  for (double d : out.data()) holes += d <= 0.0 ? 1 : 0;
  CHECK(holes == 0);
}

TEST_CASE("fill_depth_holes is idempotent") {
  std::mt19937 rng(37);
  std::uniform_real_distribution<double> depth(0.5, 4.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    DepthImage in(32, 24);
    for (auto& d : in.data()) d = coin(rng) < 0.1 ? 0.0 : depth(rng);
    const DepthImage once = fill_depth_holes(in);
    const DepthImage twice = fill_depth_holes(once);
    for (size_t i = 0; i < once.size(); ++i) {
      CHECK(twice.data()[i] == doctest::Approx(once.data()[i]).epsilon(1e-15));
    }
  }
}

TEST_CASE("close_depth_3x3 fills one-pixel pits") {
  DepthImage in(5, 5, 2.0);
  in.at(2, 2) = 1.0;  // a pit smaller than the structuring element
  const DepthImage out = close_depth_3x3(in);
  CHECK(out.at(2, 2) == doctest::Approx(2.0));
}

TEST_CASE("sample_bilinear: lattice exactness, midpoint, and cell center") {
  IntensityImage img(3, 3, 0.0);
  img.at(1, 1) = 0.7;
  const Sample lattice = sample_bilinear(img, 1.0, 1.0);
  CHECK(lattice.valid);
  CHECK(lattice.value == doctest::Approx(0.7));

  IntensityImage row(2, 2, 0.0);
  row.at(0, 0) = 0.0;
  row.at(1, 0) = 4.0;
  CHECK(sample_bilinear(row, 0.5, 0.0).value == doctest::Approx(2.0));

  IntensityImage block(2, 2);
  block.at(0, 0) = 1.0;
  block.at(1, 0) = 2.0;
  block.at(0, 1) = 3.0;
  block.at(1, 1) = 4.0;
  CHECK(sample_bilinear(block, 0.5, 0.5).value == doctest::Approx(2.5));
}

TEST_CASE("sample_bilinear: bounds, validity, and neighbor envelope") {
  IntensityImage img(4, 4);
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> val(0.0, 1.0);
  for (auto& d : img.data()) d = val(rng);

  CHECK_FALSE(sample_bilinear(img, -0.1, 1.0).valid);
  CHECK_FALSE(sample_bilinear(img, 3.5, 1.0).valid);
  CHECK(sample_bilinear(img, 3.0, 3.0).valid);  // top corner uses the last cell

  std::uniform_real_distribution<double> coord(0.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const double u = coord(rng);
    const double v = coord(rng);
    const Sample s = sample_bilinear(img, u, v);
    REQUIRE(s.valid);
    const int u0 = std::min(static_cast<int>(u), 2);
    const int v0 = std::min(static_cast<int>(v), 2);
    const double lo = std::min({img.at(u0, v0), img.at(u0 + 1, v0), img.at(u0, v0 + 1),
                                img.at(u0 + 1, v0 + 1)});
    const double hi = std::max({img.at(u0, v0), img.at(u0 + 1, v0), img.at(u0, v0 + 1),
                                img.at(u0 + 1, v0 + 1)});
    CHECK(s.value >= lo - 1e-12);
    CHECK(s.value <= hi + 1e-12);
  }
}

TEST_CASE("sample_bilinear_depth: any zero neighbor invalidates") {
  DepthImage img(2, 2, 2.0);
  img.at(1, 1) = 0.0;
  CHECK_FALSE(sample_bilinear_depth(img, 0.5, 0.5).valid);
  img.at(1, 1) = 2.0;
  CHECK(sample_bilinear_depth(img, 0.5, 0.5).valid);
}

TEST_CASE("sample_bilinear_grad matches the derivative of the sampled surface") {
  IntensityImage img(6, 6);
  std::mt19937 rng(43);
  std::uniform_real_distribution<double> val(0.0, 1.0);
  for (auto& d : img.data()) d = val(rng);
  // interior points away from cell boundaries
  std::uniform_real_distribution<double> coord(1.2, 3.8);
  for (int i = 0; i < 100; ++i) {
    const double u = coord(rng);
    const double v = coord(rng);
    const SampleGrad g = sample_bilinear_grad(img, u, v);
    const double eps = 1e-6;
    const double fd_u =
        (sample_bilinear(img, u + eps, v).value - sample_bilinear(img, u - eps, v).value) /
        (2 * eps);
    const double fd_v =
        (sample_bilinear(img, u, v + eps).value - sample_bilinear(img, u, v - eps).value) /
        (2 * eps);
    CHECK(g.du == doctest::Approx(fd_u).epsilon(1e-4));
    CHECK(g.dv == doctest::Approx(fd_v).epsilon(1e-4));
  }
}

TEST_CASE("gradient: constant and ramp images") {
  const IntensityImage flat(5, 5, 0.3);
  const GradientField gf = gradient(flat);
  for (double g : gf.gx.data()) CHECK(g == doctest::Approx(0.0));
  for (double g : gf.gy.data()) CHECK(g == doctest::Approx(0.0));

  IntensityImage ramp(6, 5);
  for (int v = 0; v < 5; ++v) {
    for (int u = 0; u < 6; ++u) ramp.at(u, v) = 0.01 * u;
  }
  const GradientField gr = gradient(ramp);
  for (int v = 0; v < 5; ++v) {
    for (int u = 0; u < 6; ++u) {
      CHECK(gr.gx.at(u, v) == doctest::Approx(0.01).epsilon(1e-12));
      CHECK(gr.gy.at(u, v) == doctest::Approx(0.0));
    }
  }
}

TEST_CASE("gradient: Taylor consistency on a smooth image") {
  IntensityImage img(32, 32);
  for (int v = 0; v < 32; ++v) {
    for (int u = 0; u < 32; ++u) {
      img.at(u, v) = 0.5 + 0.3 * std::sin(0.2 * u) * std::cos(0.15 * v);
    }
  }
  const GradientField g = gradient(img);
  const double delta = 0.5;
  double worst = 0.0;
  for (int v = 2; v < 30; ++v) {
    for (int u = 2; u < 29; ++u) {
      const double predicted = img.at(u, v) + delta * g.gx.at(u, v);
      const double actual = sample_bilinear(img, u + delta, v).value;
      worst = std::max(worst, std::abs(predicted - actual));
    }
  }
  // O(delta^2) remainder at this curvature scale
  CHECK(worst < 0.012 * delta * delta + 0.01);
}

TEST_CASE("gradient rejects images smaller than 3x3") {
  CHECK_THROWS_AS(gradient(IntensityImage(2, 5, 0.0)), Error);
  CHECK_THROWS_AS(gradient(IntensityImage(5, 2, 0.0)), Error);
}

TEST_CASE("downsample: constant image, valid-only depth mean, dimensions") {
  Frame f;
  f.timestamp = 1.25;
  f.intensity = IntensityImage(640, 480, 0.4);
  f.depth = DepthImage(640, 480, 2.0);
  const Frame half = downsample(f);
  CHECK(half.timestamp == 1.25);
  CHECK(half.width() == 320);
  CHECK(half.height() == 240);
  CHECK(half.intensity.at(10, 10) == doctest::Approx(0.4));

  const Frame quarter = downsample(half);
  CHECK(quarter.width() == 160);
  CHECK(quarter.height() == 120);

  DepthImage d(2, 2);
  d.at(0, 0) = 2.0;
  d.at(1, 0) = 2.0;
  d.at(0, 1) = 0.0;
  d.at(1, 1) = 0.0;
  const DepthImage dd = downsample_depth(d);
  CHECK(dd.at(0, 0) == doctest::Approx(2.0));  // mean over valid members only

  DepthImage all_zero(2, 2, 0.0);
  CHECK(downsample_depth(all_zero).at(0, 0) == 0.0);
}

TEST_CASE("downsample preserves mean intensity for even dimensions") {
  IntensityImage img(16, 12);
  std::mt19937 rng(47);
  std::uniform_real_distribution<double> val(0.0, 1.0);
  for (auto& d : img.data()) d = val(rng);
  double mean_full = 0.0;
  for (double d : img.data()) mean_full += d;
  mean_full /= img.size();

  const IntensityImage half = downsample(img);
  double mean_half = 0.0;
  for (double d : half.data()) mean_half += d;
  mean_half /= half.size();
  CHECK(mean_half == doctest::Approx(mean_full).epsilon(1e-12));
}

TEST_CASE("rgb_to_intensity uses the fixed luma weights") {
  const std::vector<uint8_t> rgb = {255, 0, 0, 0, 255, 0, 0, 0, 255, 255, 255, 255};
  const IntensityImage img = rgb_to_intensity(4, 1, rgb);
  CHECK(img.at(0, 0) == doctest::Approx(0.299));
  CHECK(img.at(1, 0) == doctest::Approx(0.587));
  CHECK(img.at(2, 0) == doctest::Approx(0.114));
  CHECK(img.at(3, 0) == doctest::Approx(1.0));
}

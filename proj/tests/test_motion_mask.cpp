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

#include <set>

#include "dynvo/error.hpp"
#include "dynvo/motion_mask.hpp"

using namespace dynvo;

namespace {

// Plateau scene helper: background plus axis-aligned rectangles at fixed depth.
struct RectPatch {
  int u0, v0, u1, v1;  // half-open
  double depth;
};

Frame plateau_frame(int width, int height, double background,
                    const std::vector<RectPatch>& patches) {
  Frame f;
  f.intensity = IntensityImage(width, height, 0.5);
  f.depth = DepthImage(width, height, background);
  for (const RectPatch& p : patches) {
    for (int v = p.v0; v < p.v1; ++v) {
      for (int u = p.u0; u < p.u1; ++u) f.depth.at(u, v) = p.depth;
    }
  }
  return f;
}

size_t count_in_rect(const MotionMask& mask, PixelState s, int u0, int v0, int u1, int v1) {
  size_t n = 0;
  for (int v = v0; v < v1; ++v) {
    for (int u = u0; u < u1; ++u) {
      if (mask.at(u, v) == s) ++n;
    }
  }
  return n;
}

}  // namespace

TEST_CASE("partition_regions: counts and remainder cells") {
  const RegionGrid g1 = partition_regions(640, 480, 40);
  CHECK(g1.count() == 192);  // 16 x 12

  const RegionGrid g2 = partition_regions(100, 100, 40);
  CHECK(g2.count() == 9);  // 3 x 3 with 20-px edge cells
  const RegionGrid::Rect edge = g2.rect(8);
  CHECK(edge.u1 - edge.u0 == 20);
  CHECK(edge.v1 - edge.v0 == 20);

  CHECK_THROWS_AS(partition_regions(100, 100, 7), Error);
}

TEST_CASE("partition_regions: every pixel maps to exactly one covering region") {
  const RegionGrid grid = partition_regions(130, 90, 40);
  std::vector<int> hits(static_cast<size_t>(130) * 90, 0);
  for (int r = 0; r < grid.count(); ++r) {
    const RegionGrid::Rect rect = grid.rect(r);
    for (int v = rect.v0; v < rect.v1; ++v) {
      for (int u = rect.u0; u < rect.u1; ++u) {
        hits[static_cast<size_t>(v) * 130 + u] += 1;
        CHECK(grid.region_of(u, v) == r);
      }
    }
  }
  for (int h : hits) CHECK(h == 1);
}

TEST_CASE("edge_gap_profile: single-cluster regions are skipped") {
  const Frame f = plateau_frame(80, 80, 2.0, {});
  const ClusterMap cmap = kmeans_depth(f.depth, 1, 0);
  const RegionGrid grid = partition_regions(80, 80, 40);
  const EdgeGapProfile prof = edge_gap_profile(f.depth, grid, cmap);
  for (int r = 0; r < grid.count(); ++r) CHECK_FALSE(prof.edge_region(r));
}

TEST_CASE("edge_gap_profile: plateaus at 1.0 and 3.0 give gap 2.0 everywhere") {
  const Frame f = plateau_frame(80, 40, 3.0, {{0, 0, 40, 40, 1.0}});
  const ClusterMap cmap = kmeans_depth(f.depth, 2, 0);
  const RegionGrid grid = partition_regions(80, 40, 40);
  const EdgeGapProfile prof = edge_gap_profile(f.depth, grid, cmap);
  REQUIRE(prof.total_records() > 0);
  for (const auto& region : prof.regions) {
    for (const GapRecord& rec : region) {
      CHECK(rec.gap == doctest::Approx(2.0));
      CHECK(rec.near_depth == doctest::Approx(1.0));
      CHECK(rec.far_depth == doctest::Approx(3.0));
    }
  }
}

TEST_CASE("edge_gap_profile: edge-region count equals blocks crossed by a step") {
  const Frame f = plateau_frame(200, 160, 3.0, {{0, 0, 100, 160, 1.5}});
  const ClusterMap cmap = kmeans_depth(f.depth, 2, 0);
  const RegionGrid grid = partition_regions(200, 160, 40);
  const EdgeGapProfile prof = edge_gap_profile(f.depth, grid, cmap);
  int edge_regions = 0;
  for (int r = 0; r < grid.count(); ++r) edge_regions += prof.edge_region(r) ? 1 : 0;
  // the vertical boundary at u = 99/100 crosses one column of 4 blocks
  CHECK(edge_regions == 4);
  for (int r = 0; r < grid.count(); ++r) {
    CHECK(prof.edge_region(r) == (r % grid.cols == 2));
  }
}

TEST_CASE("dynamic coefficient: identical frames give 0 in every region") {
  const Frame f = plateau_frame(200, 160, 2.5,
                                {{40, 40, 100, 100, 1.5}, {120, 100, 180, 150, 1.8}});
  const ClusterMap cmap = kmeans_depth(f.depth, 3, 0);
  const RegionGrid grid = partition_regions(200, 160, 40);
  const EdgeGapProfile prof = edge_gap_profile(f.depth, grid, cmap);
  const std::vector<double> coeffs = dynamic_coefficients(prof, prof, grid);
  for (double c : coeffs) CHECK(c == doctest::Approx(0.0));
}

TEST_CASE("dynamic coefficient: global gap scaling passes the proportional test") {
  // Two objects at different gaps; frame B scales both gaps by 1.2 (camera
  // rotation surrogate). Every region must stay below the trigger.
  const Frame a = plateau_frame(200, 160, 2.5,
                                {{40, 40, 100, 100, 1.5}, {120, 100, 180, 150, 1.8}});
  const Frame b = plateau_frame(200, 160, 2.5,
                                {{40, 40, 100, 100, 2.5 - 1.2}, {120, 100, 180, 150, 2.5 - 0.84}});
  const ClusterMap cmap_a = kmeans_depth(a.depth, 3, 0);
  const ClusterMap cmap_b = classify_depth(b.depth, cmap_a.centroids);
  const RegionGrid grid = partition_regions(200, 160, 40);
  const EdgeGapProfile prof_a = edge_gap_profile(a.depth, grid, cmap_a);
  const EdgeGapProfile prof_b = edge_gap_profile(b.depth, grid, cmap_b);
  const std::vector<double> coeffs = dynamic_coefficients(prof_a, prof_b, grid);
  for (double c : coeffs) CHECK(c == doctest::Approx(0.0));
}

TEST_CASE("dynamic coefficient: displaced box exceeds 0.5 exactly at its edges") {
  // Box jumps 60 px right and 0.3 m toward the camera; a second, static box
  // anchors the global gap ratio like real background structure does.
  const Frame a = plateau_frame(200, 160, 2.5,
                                {{40, 40, 100, 100, 1.5}, {0, 120, 60, 160, 1.8}});
  const Frame b = plateau_frame(200, 160, 2.5,
                                {{100, 40, 160, 100, 1.2}, {0, 120, 60, 160, 1.8}});
  const ClusterMap cmap_a = kmeans_depth(a.depth, 3, 0);
  const ClusterMap cmap_b = classify_depth(b.depth, cmap_a.centroids);
  const RegionGrid grid = partition_regions(200, 160, 40);
  const EdgeGapProfile prof_a = edge_gap_profile(a.depth, grid, cmap_a);
  const EdgeGapProfile prof_b = edge_gap_profile(b.depth, grid, cmap_b);
  const std::vector<double> coeffs = dynamic_coefficients(prof_a, prof_b, grid);

  // regions holding the box's vertical-edge records in either frame must
  // trigger (a record lives in the region of the pair's left/top pixel)
  const std::set<int> expect_hot = {grid.region_of(39, 50), grid.region_of(99, 50),
                                    grid.region_of(159, 50)};
  for (int r : expect_hot) CHECK(coeffs[static_cast<size_t>(r)] > 0.5);

  // static-box regions stay quiet
  CHECK(coeffs[static_cast<size_t>(grid.region_of(10, 130))] == doctest::Approx(0.0));
  CHECK(coeffs[static_cast<size_t>(grid.region_of(59, 130))] == doctest::Approx(0.0));
}

TEST_CASE("pre_eliminate: static scene under camera translation stays static") {
  // Camera pan surrogate: all content shifts 3 px right, depths unchanged.
  const Frame a = plateau_frame(200, 160, 2.5, {{40, 40, 100, 100, 1.5}});
  const Frame b = plateau_frame(200, 160, 2.5, {{43, 40, 103, 100, 1.5}});
  const ClusterMap cmap_a = kmeans_depth(a.depth, 2, 0);
  const RegionGrid grid = partition_regions(200, 160, 40);
  const MotionMask mask = pre_eliminate(a, b, cmap_a, grid);
  CHECK(mask.count(PixelState::Dynamic) == 0);
}

TEST_CASE("pre_eliminate: forward camera motion (all depths shift) stays static") {
  // Moving toward the scene reduces every depth by the same amount; gaps are
  // unchanged, which is exactly the translation constraint.
  const Frame a = plateau_frame(200, 160, 2.5, {{40, 40, 100, 100, 1.5}});
  Frame b = a;
  for (auto& d : b.depth.data()) d -= 0.1;
  const ClusterMap cmap_a = kmeans_depth(a.depth, 2, 0);
  const RegionGrid grid = partition_regions(200, 160, 40);
  const MotionMask mask = pre_eliminate(a, b, cmap_a, grid);
  CHECK(mask.count(PixelState::Dynamic) == 0);
}

TEST_CASE("pre_eliminate: walking box is marked with high IoU and low background spill") {
  const Frame a = plateau_frame(200, 160, 2.5,
                                {{40, 40, 100, 100, 1.5}, {0, 120, 60, 160, 1.8}});
  const Frame b = plateau_frame(200, 160, 2.5,
                                {{100, 40, 160, 100, 1.2}, {0, 120, 60, 160, 1.8}});
  const ClusterMap cmap_a = kmeans_depth(a.depth, 3, 0);
  const RegionGrid grid = partition_regions(200, 160, 40);
  const MotionMask mask = pre_eliminate(a, b, cmap_a, grid);

  const size_t box_pixels = 60 * 60;
  const size_t hit = count_in_rect(mask, PixelState::Dynamic, 40, 40, 100, 100);
  const size_t marked_total = mask.count(PixelState::Dynamic);
  const size_t false_positives = marked_total - hit;
  const double iou = static_cast<double>(hit) /
                     static_cast<double>(box_pixels + false_positives);
  CHECK(iou >= 0.6);
  const size_t background = 200 * 160 - box_pixels;
  CHECK(static_cast<double>(false_positives) / background <= 0.05);
}

TEST_CASE("pre_eliminate: only the moving blob of a split cluster is removed") {
  // Two same-depth blobs without a connecting path; one moves, one does not.
  const Frame a = plateau_frame(200, 80, 2.5,
                                {{20, 20, 50, 50, 1.5}, {120, 20, 150, 50, 1.5}});
  const Frame b = plateau_frame(200, 80, 2.5,
                                {{70, 20, 100, 50, 1.2}, {120, 20, 150, 50, 1.5}});
  const ClusterMap cmap_a = kmeans_depth(a.depth, 2, 0);
  const RegionGrid grid = partition_regions(200, 80, 40);
  const MotionMask mask = pre_eliminate(a, b, cmap_a, grid);

  const size_t mover_hit = count_in_rect(mask, PixelState::Dynamic, 20, 20, 50, 50);
  const size_t twin_hit = count_in_rect(mask, PixelState::Dynamic, 120, 20, 150, 50);
  CHECK(mover_hit >= static_cast<size_t>(0.6 * 30 * 30));
  CHECK(twin_hit == 0);
}

TEST_CASE("pre_eliminate is deterministic and marks components, not salt-and-pepper") {
  const Frame a = plateau_frame(200, 160, 2.5, {{40, 40, 100, 100, 1.5}});
  const Frame b = plateau_frame(200, 160, 2.5, {{100, 40, 160, 100, 1.2}});
  const ClusterMap cmap_a = kmeans_depth(a.depth, 2, 0);
  const RegionGrid grid = partition_regions(200, 160, 40);
  const MotionMask m1 = pre_eliminate(a, b, cmap_a, grid);
  const MotionMask m2 = pre_eliminate(a, b, cmap_a, grid);
  CHECK(m1.states == m2.states);

  // dynamic pixels are confined to the mover cluster and triggering regions:
  // nothing outside the box's cluster may be marked
  for (int v = 0; v < 160; ++v) {
    for (int u = 0; u < 200; ++u) {
      if (m1.at(u, v) == PixelState::Dynamic) {
        CHECK(cmap_a.label(u, v) == 0);
      }
    }
  }
}

TEST_CASE("MotionMask: all_static mirrors depth validity, change_fraction counts flips") {
  DepthImage depth(4, 2, 2.0);
  depth.at(1, 0) = 0.0;
  const MotionMask mask = MotionMask::all_static(depth);
  CHECK(mask.at(1, 0) == PixelState::Invalid);
  CHECK(mask.at(0, 0) == PixelState::Static);
  CHECK(mask.count(PixelState::Invalid) == 1);

  MotionMask other = mask;
  other.set(0, 0, PixelState::Dynamic);
  other.set(3, 1, PixelState::Dynamic);
  CHECK(mask.change_fraction(other) == doctest::Approx(2.0 / 8.0));
}

TEST_CASE("mask downsample: any dynamic child taints the coarse pixel") {
  MotionMask mask(4, 4, PixelState::Static);
  mask.set(0, 0, PixelState::Dynamic);
  mask.set(2, 2, PixelState::Invalid);
  mask.set(3, 2, PixelState::Invalid);
  mask.set(2, 3, PixelState::Invalid);
  mask.set(3, 3, PixelState::Invalid);
  const MotionMask half = mask.downsample();
  CHECK(half.at(0, 0) == PixelState::Dynamic);
  CHECK(half.at(1, 0) == PixelState::Static);
  CHECK(half.at(1, 1) == PixelState::Invalid);
}

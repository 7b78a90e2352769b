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

#include <cstdint>
#include <string>
#include <vector>

#include "dynvo/clustering.hpp"
#include "dynvo/image.hpp"

namespace dynvo {

enum class PixelState : uint8_t { Static = 0, Dynamic = 1, Invalid = 2 };

struct MotionMask {
  int width = 0;
  int height = 0;
  std::vector<PixelState> states;

  MotionMask() = default;
  MotionMask(int w, int h, PixelState fill = PixelState::Static)
      : width(w), height(h), states(static_cast<size_t>(w) * h, fill) {}

  // STATIC everywhere the depth is valid, INVALID on holes.
  static MotionMask all_static(const DepthImage& depth);

  PixelState at(int u, int v) const { return states[static_cast<size_t>(v) * width + u]; }
  void set(int u, int v, PixelState s) { states[static_cast<size_t>(v) * width + u] = s; }

  size_t count(PixelState s) const;
  // Fraction of pixels whose state differs, over the full pixel grid.
  double change_fraction(const MotionMask& other) const;

  MotionMask downsample() const;
};

void write_mask_png(const std::string& path, const MotionMask& mask);
MotionMask read_mask_png(const std::string& path);

struct MotionMaskParams {
  int block = 40;              // region tiling in pixels
  double tau_abs = 0.05;       // meters; translation-case gap tolerance
  double tau_rel = 0.1;        // proportional-case ratio tolerance
  double trigger = 0.5;        // dynamic-coefficient threshold
  double pair_radius = 20.0;   // pixels; positional gap-pairing search radius
};

// Regular tiling into block x block cells; right/bottom remainders are smaller.
struct RegionGrid {
  int width = 0;
  int height = 0;
  int block = 0;
  int cols = 0;
  int rows = 0;

  int count() const { return cols * rows; }
  int region_of(int u, int v) const { return (v / block) * cols + u / block; }

  struct Rect {
    int u0, v0, u1, v1;  // half-open
  };
  Rect rect(int region) const;
};

RegionGrid partition_regions(int width, int height, int block);

// One depth discontinuity between 4-adjacent pixels of different clusters.
struct GapRecord {
  double u = 0.0, v = 0.0;   // midpoint of the transition pair
  int near_u = 0, near_v = 0;  // pixel on the smaller-depth side
  int far_u = 0, far_v = 0;
  double near_depth = 0.0;
  double far_depth = 0.0;
  double gap = 0.0;          // far - near, >= 0
  bool horizontal = false;   // true for a (u,v)-(u+1,v) pair
};

struct EdgeGapProfile {
  std::vector<std::vector<GapRecord>> regions;

  bool edge_region(int r) const { return !regions[static_cast<size_t>(r)].empty(); }
  size_t total_records() const;
};

// Records every cluster-label transition; a pair straddling two regions is
// assigned to the region of its first (left/top) pixel. Single-cluster
// regions end up with empty profiles.
EdgeGapProfile edge_gap_profile(const DepthImage& depth, const RegionGrid& grid,
                                const ClusterMap& cmap);

// Gap-magnitude-weighted fraction of inconsistent records in one region.
// A record is consistent when a positionally-paired record in the other frame
// matches its gap within tau_abs, or within tau_rel of the frame-wide median
// gap ratio; unpairable records count as inconsistent. Regions empty in both
// frames return 0.
double region_dynamic_coefficient(const EdgeGapProfile& prof_a, const EdgeGapProfile& prof_b,
                                  const RegionGrid& grid, int region,
                                  const MotionMaskParams& params = {});

std::vector<double> dynamic_coefficients(const EdgeGapProfile& prof_a,
                                         const EdgeGapProfile& prof_b, const RegionGrid& grid,
                                         const MotionMaskParams& params = {});

// Pre-elimination over a frame pair: regions whose coefficient exceeds the
// trigger vote for the moved cluster, and that cluster's largest connected
// component overlapping the region (plus the region's own pixels of the
// cluster) is marked DYNAMIC. Only frame A is clustered; frame B is labeled
// with A's centroids.
MotionMask pre_eliminate(const Frame& frame_a, const Frame& frame_b, const ClusterMap& cmap_a,
                         const RegionGrid& grid, const MotionMaskParams& params = {});

}  // namespace dynvo

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

#include "dynvo/image.hpp"

namespace dynvo {

constexpr int kInvalidLabel = -1;

// Per-pixel depth-cluster labels plus per-cluster centroid depths (meters),
// sorted ascending.
struct ClusterMap {
  int width = 0;
  int height = 0;
  std::vector<int> labels;  // kInvalidLabel where depth is invalid
  std::vector<double> centroids;

  int n_cluster() const { return static_cast<int>(centroids.size()); }
  int label(int u, int v) const { return labels[static_cast<size_t>(v) * width + u]; }
};

struct DepthStats {
  double d_max = 0.0;
  double d_min = 0.0;
  double d_sd = 0.0;  // population standard deviation over valid pixels
  int valid_count = 0;
};

DepthStats compute_depth_stats(const DepthImage& depth);

// floor((d_max - d_min) / d_sd), clamped to [1, max_clusters]; 1 when d_sd = 0.
int cluster_count(const DepthStats& stats, int max_clusters = 12);

// 1-D k-means over valid depth values. Quantile seeding (centroid i at the
// (i+0.5)/n quantile), Lloyd iterations until the centroid shift drops below
// 1e-4 m or 50 iterations. Ties assign to the lower centroid. The seed is
// accepted for interface stability; the initializer is deterministic and does
// not consume it.
ClusterMap kmeans_depth(const DepthImage& depth, int n, uint64_t seed = 0);

// Nearest-centroid labeling with a fixed centroid set (no Lloyd iterations);
// used to transfer frame A's clustering onto frame B.
ClusterMap classify_depth(const DepthImage& depth, const std::vector<double>& centroids);

double kmeans_inertia(const DepthImage& depth, const ClusterMap& cmap);

// 4-connected components of same-cluster pixels, labeled in raster-scan order.
struct ComponentMap {
  int width = 0;
  int height = 0;
  std::vector<int> labels;      // kInvalidLabel on invalid pixels
  std::vector<int> sizes;       // pixels per component
  std::vector<int> cluster_of;  // depth cluster of each component

  int count() const { return static_cast<int>(sizes.size()); }
  int label(int u, int v) const { return labels[static_cast<size_t>(v) * width + u]; }
};

ComponentMap connected_components(const ClusterMap& cmap);

// Debug export: cluster id -> gray palette.
void write_cluster_png(const std::string& path, const ClusterMap& cmap);

}  // namespace dynvo

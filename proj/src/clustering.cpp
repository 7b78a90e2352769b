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
#include "dynvo/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "dynvo/error.hpp"
#include "dynvo/png_io.hpp"

namespace dynvo {

DepthStats compute_depth_stats(const DepthImage& depth) {
  DepthStats stats;
  double sum = 0.0;
  double sum_sq = 0.0;
  bool first = true;
  for (double d : depth.data()) {
    if (d <= 0.0) continue;
    if (first) {
      stats.d_min = d;
      stats.d_max = d;
      first = false;
    } else {
      stats.d_min = std::min(stats.d_min, d);
      stats.d_max = std::max(stats.d_max, d);
    }
    sum += d;
    sum_sq += d * d;
    ++stats.valid_count;
  }
  if (stats.valid_count > 0) {
    const double mean = sum / stats.valid_count;
    const double var = std::max(sum_sq / stats.valid_count - mean * mean, 0.0);
    stats.d_sd = std::sqrt(var);
  }
  return stats;
}

int cluster_count(const DepthStats& stats, int max_clusters) {
  if (stats.d_sd <= 0.0) return 1;
  const double raw = std::floor((stats.d_max - stats.d_min) / stats.d_sd);
  if (raw < 1.0) return 1;
  return static_cast<int>(std::min(raw, static_cast<double>(max_clusters)));
}

namespace {

int nearest_centroid(const std::vector<double>& centroids, double d) {
  int best = 0;
  double best_dist = std::abs(d - centroids[0]);
  for (int i = 1; i < static_cast<int>(centroids.size()); ++i) {
    const double dist = std::abs(d - centroids[i]);
    if (dist < best_dist) {  // ties keep the lower centroid
      best_dist = dist;
      best = i;
    }
  }
  return best;
}

}  // namespace

ClusterMap kmeans_depth(const DepthImage& depth, int n, uint64_t /*seed*/) {
  if (n < 1) raise(ErrorCode::InvalidArgument, "kmeans_depth: n must be >= 1");

  std::vector<double> values;
  values.reserve(depth.size());
  for (double d : depth.data()) {
    if (d > 0.0) values.push_back(d);
  }
  if (values.empty()) raise(ErrorCode::EmptyDepth, "kmeans_depth: no valid depth pixels");

  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const int distinct =
      static_cast<int>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
  n = std::min(n, distinct);
  sorted.resize(distinct);

  // Quantile seeding over the distinct values keeps initial centroids spread
  // even when one plateau dominates the histogram.
  std::vector<double> centroids(n);
  for (int i = 0; i < n; ++i) {
    const double q = (i + 0.5) / n;
    const int idx = std::min(static_cast<int>(q * distinct), distinct - 1);
    centroids[i] = sorted[idx];
  }

  std::vector<double> sums(n);
  std::vector<int> counts(n);
  for (int iter = 0; iter < 50; ++iter) {
    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (double d : values) {
      const int k = nearest_centroid(centroids, d);
      sums[k] += d;
      counts[k] += 1;
    }
    double shift = 0.0;
    for (int k = 0; k < n; ++k) {
      if (counts[k] == 0) continue;  // empty cluster keeps its centroid
      const double next = sums[k] / counts[k];
      shift = std::max(shift, std::abs(next - centroids[k]));
      centroids[k] = next;
    }
    if (shift < 1e-4) break;
  }

  // Deduplicate converged centroids and keep them sorted.
  std::sort(centroids.begin(), centroids.end());
  centroids.erase(std::unique(centroids.begin(), centroids.end(),
                              [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                  centroids.end());

  return classify_depth(depth, centroids);
}

ClusterMap classify_depth(const DepthImage& depth, const std::vector<double>& centroids) {
  if (centroids.empty()) raise(ErrorCode::InvalidArgument, "classify_depth: no centroids");
  ClusterMap cmap;
  cmap.width = depth.width();
  cmap.height = depth.height();
  cmap.centroids = centroids;
  cmap.labels.assign(depth.size(), kInvalidLabel);
  for (size_t i = 0; i < depth.size(); ++i) {
    const double d = depth.data()[i];
    if (d > 0.0) cmap.labels[i] = nearest_centroid(centroids, d);
  }
  return cmap;
}

double kmeans_inertia(const DepthImage& depth, const ClusterMap& cmap) {
  double inertia = 0.0;
  for (size_t i = 0; i < depth.size(); ++i) {
    const int label = cmap.labels[i];
    if (label == kInvalidLabel) continue;
    const double r = depth.data()[i] - cmap.centroids[label];
    inertia += r * r;
  }
  return inertia;
}

ComponentMap connected_components(const ClusterMap& cmap) {
  ComponentMap comp;
  comp.width = cmap.width;
  comp.height = cmap.height;
  comp.labels.assign(cmap.labels.size(), kInvalidLabel);

  std::deque<std::pair<int, int>> queue;
  for (int v = 0; v < cmap.height; ++v) {
    for (int u = 0; u < cmap.width; ++u) {
      const size_t idx = static_cast<size_t>(v) * cmap.width + u;
      if (cmap.labels[idx] == kInvalidLabel || comp.labels[idx] != kInvalidLabel) continue;

      const int cluster = cmap.labels[idx];
      const int id = comp.count();
      comp.sizes.push_back(0);
      comp.cluster_of.push_back(cluster);

      queue.emplace_back(u, v);
      comp.labels[idx] = id;
      while (!queue.empty()) {
        const auto [cu, cv] = queue.front();
        queue.pop_front();
        comp.sizes[id] += 1;
        constexpr int du[4] = {1, -1, 0, 0};
        constexpr int dv[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          const int nu = cu + du[k];
          const int nv = cv + dv[k];
          if (nu < 0 || nu >= cmap.width || nv < 0 || nv >= cmap.height) continue;
          const size_t nidx = static_cast<size_t>(nv) * cmap.width + nu;
          if (comp.labels[nidx] != kInvalidLabel || cmap.labels[nidx] != cluster) continue;
          comp.labels[nidx] = id;
          queue.emplace_back(nu, nv);
        }
      }
    }
  }
  return comp;
}

void write_cluster_png(const std::string& path, const ClusterMap& cmap) {
  Gray8Image img;
  img.width = cmap.width;
  img.height = cmap.height;
  img.data.resize(cmap.labels.size());
  const int n = std::max(cmap.n_cluster(), 1);
  for (size_t i = 0; i < cmap.labels.size(); ++i) {
    const int label = cmap.labels[i];
    img.data[i] = label == kInvalidLabel
                      ? 0
                      : static_cast<uint8_t>(32 + (223 * label) / std::max(n - 1, 1));
  }
  write_png_gray8(path, img);
}

}  // namespace dynvo

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
#include "dynvo/motion_mask.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "dynvo/error.hpp"
#include "dynvo/png_io.hpp"

namespace dynvo {

MotionMask MotionMask::all_static(const DepthImage& depth) {
  MotionMask mask(depth.width(), depth.height(), PixelState::Static);
  for (size_t i = 0; i < depth.size(); ++i) {
    if (depth.data()[i] <= 0.0) mask.states[i] = PixelState::Invalid;
  }
  return mask;
}

size_t MotionMask::count(PixelState s) const {
  return static_cast<size_t>(std::count(states.begin(), states.end(), s));
}

double MotionMask::change_fraction(const MotionMask& other) const {
  size_t changed = 0;
  for (size_t i = 0; i < states.size(); ++i) {
    if (states[i] != other.states[i]) ++changed;
  }
  return states.empty() ? 0.0 : static_cast<double>(changed) / states.size();
}

MotionMask MotionMask::downsample() const {
  MotionMask out(width / 2, height / 2);
  for (int v = 0; v < out.height; ++v) {
    for (int u = 0; u < out.width; ++u) {
      int dynamic = 0;
      int stat = 0;
      for (int dv = 0; dv <= 1; ++dv) {
        for (int du = 0; du <= 1; ++du) {
          switch (at(2 * u + du, 2 * v + dv)) {
            case PixelState::Dynamic: ++dynamic; break;
            case PixelState::Static: ++stat; break;
            case PixelState::Invalid: break;
          }
        }
      }
      // Any dynamic child taints the coarse pixel.
      out.set(u, v, dynamic > 0 ? PixelState::Dynamic
                                : (stat > 0 ? PixelState::Static : PixelState::Invalid));
    }
  }
  return out;
}

void write_mask_png(const std::string& path, const MotionMask& mask) {
  Gray8Image img;
  img.width = mask.width;
  img.height = mask.height;
  img.data.resize(mask.states.size());
  for (size_t i = 0; i < mask.states.size(); ++i) {
    switch (mask.states[i]) {
      case PixelState::Static: img.data[i] = 0; break;
      case PixelState::Invalid: img.data[i] = 128; break;
      case PixelState::Dynamic: img.data[i] = 255; break;
    }
  }
  write_png_gray8(path, img);
}

MotionMask read_mask_png(const std::string& path) {
  Gray8Image img = read_png_gray8(path);
  MotionMask mask(img.width, img.height);
  for (size_t i = 0; i < img.data.size(); ++i) {
    mask.states[i] = img.data[i] >= 192 ? PixelState::Dynamic
                                        : (img.data[i] >= 64 ? PixelState::Invalid
                                                             : PixelState::Static);
  }
  return mask;
}

RegionGrid::Rect RegionGrid::rect(int region) const {
  const int col = region % cols;
  const int row = region / cols;
  Rect r;
  r.u0 = col * block;
  r.v0 = row * block;
  r.u1 = std::min(r.u0 + block, width);
  r.v1 = std::min(r.v0 + block, height);
  return r;
}

RegionGrid partition_regions(int width, int height, int block) {
  if (block < 8) raise(ErrorCode::InvalidArgument, "partition_regions: block must be >= 8");
  RegionGrid grid;
  grid.width = width;
  grid.height = height;
  grid.block = block;
  grid.cols = (width + block - 1) / block;
  grid.rows = (height + block - 1) / block;
  return grid;
}

size_t EdgeGapProfile::total_records() const {
  size_t n = 0;
  for (const auto& r : regions) n += r.size();
  return n;
}

EdgeGapProfile edge_gap_profile(const DepthImage& depth, const RegionGrid& grid,
                                const ClusterMap& cmap) {
  if (depth.width() != cmap.width || depth.height() != cmap.height) {
    raise(ErrorCode::InvalidArgument, "edge_gap_profile: dimension mismatch");
  }
  EdgeGapProfile profile;
  profile.regions.resize(grid.count());

  auto add = [&](int u0, int v0, int u1, int v1, bool horizontal) {
    const int la = cmap.label(u0, v0);
    const int lb = cmap.label(u1, v1);
    if (la == kInvalidLabel || lb == kInvalidLabel || la == lb) return;
    const double da = depth.at(u0, v0);
    const double db = depth.at(u1, v1);
    GapRecord rec;
    rec.u = 0.5 * (u0 + u1);
    rec.v = 0.5 * (v0 + v1);
    rec.horizontal = horizontal;
    if (da <= db) {
      rec.near_u = u0; rec.near_v = v0; rec.far_u = u1; rec.far_v = v1;
      rec.near_depth = da; rec.far_depth = db;
    } else {
      rec.near_u = u1; rec.near_v = v1; rec.far_u = u0; rec.far_v = v0;
      rec.near_depth = db; rec.far_depth = da;
    }
    rec.gap = rec.far_depth - rec.near_depth;
    profile.regions[grid.region_of(u0, v0)].push_back(rec);
  };

  for (int v = 0; v < depth.height(); ++v) {
    for (int u = 0; u < depth.width(); ++u) {
      if (u + 1 < depth.width()) add(u, v, u + 1, v, true);
      if (v + 1 < depth.height()) add(u, v, u, v + 1, false);
    }
  }
  return profile;
}

namespace {

constexpr double kGapScoreWeight = 10.0;  // px of pairing score per meter of gap difference
constexpr double kMinGap = 1e-9;

struct Classified {
  double weight = 0.0;
  bool consistent = false;
  bool paired = false;
  const GapRecord* match = nullptr;
};

// Candidate partners come from the region and its 8 neighbors.
template <typename Fn>
void for_each_neighbor_region(const RegionGrid& grid, int region, Fn&& fn) {
  const int col = region % grid.cols;
  const int row = region / grid.cols;
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      const int c = col + dc;
      const int r = row + dr;
      if (c < 0 || c >= grid.cols || r < 0 || r >= grid.rows) continue;
      fn(r * grid.cols + c);
    }
  }
}

const GapRecord* best_partner(const GapRecord& rec, const EdgeGapProfile& other,
                              const RegionGrid& grid, int region, double radius) {
  const GapRecord* best = nullptr;
  double best_score = 0.0;
  for_each_neighbor_region(grid, region, [&](int r) {
    for (const GapRecord& cand : other.regions[static_cast<size_t>(r)]) {
      if (cand.horizontal != rec.horizontal) continue;
      const double dist = std::hypot(cand.u - rec.u, cand.v - rec.v);
      if (dist > radius) continue;
      const double score = dist + kGapScoreWeight * std::abs(cand.gap - rec.gap);
      if (best == nullptr || score < best_score) {
        best = &cand;
        best_score = score;
      }
    }
  });
  return best;
}

Classified classify_record(const GapRecord& rec, const EdgeGapProfile& other,
                           const RegionGrid& grid, int region, double rho,
                           const MotionMaskParams& p) {
  Classified c;
  const GapRecord* partner = best_partner(rec, other, grid, region, p.pair_radius);
  if (partner == nullptr) {
    c.weight = rec.gap;
    c.consistent = false;
    return c;
  }
  c.paired = true;
  c.match = partner;
  c.weight = std::max(rec.gap, partner->gap);
  const bool translation_ok = std::abs(partner->gap - rec.gap) <= p.tau_abs;
  const bool proportional_ok =
      rec.gap > kMinGap && std::abs(partner->gap / rec.gap - rho) <= p.tau_rel;
  c.consistent = translation_ok || proportional_ok;
  return c;
}

// Frame-wide median of gap_b / gap_a over pairable records. Camera rotation
// scales every gap by a common factor; per-object motion does not.
double global_gap_ratio(const EdgeGapProfile& prof_a, const EdgeGapProfile& prof_b,
                        const RegionGrid& grid, const MotionMaskParams& p) {
  std::vector<double> ratios;
  for (int region = 0; region < grid.count(); ++region) {
    for (const GapRecord& rec : prof_a.regions[static_cast<size_t>(region)]) {
      if (rec.gap <= kMinGap) continue;
      const GapRecord* partner = best_partner(rec, prof_b, grid, region, p.pair_radius);
      if (partner != nullptr) ratios.push_back(partner->gap / rec.gap);
    }
  }
  if (ratios.empty()) return 1.0;
  const size_t mid = ratios.size() / 2;
  std::nth_element(ratios.begin(), ratios.begin() + mid, ratios.end());
  return ratios[mid];
}

double region_coefficient_impl(const EdgeGapProfile& prof_a, const EdgeGapProfile& prof_b,
                               const RegionGrid& grid, int region, double rho,
                               const MotionMaskParams& p) {
  double total = 0.0;
  double inconsistent = 0.0;
  const double rho_inv = rho > kMinGap ? 1.0 / rho : 1.0;
  for (const GapRecord& rec : prof_a.regions[static_cast<size_t>(region)]) {
    const Classified c = classify_record(rec, prof_b, grid, region, rho, p);
    total += c.weight;
    if (!c.consistent) inconsistent += c.weight;
  }
  for (const GapRecord& rec : prof_b.regions[static_cast<size_t>(region)]) {
    const Classified c = classify_record(rec, prof_a, grid, region, rho_inv, p);
    total += c.weight;
    if (!c.consistent) inconsistent += c.weight;
  }
  return total > 0.0 ? inconsistent / total : 0.0;
}

}  // namespace

double region_dynamic_coefficient(const EdgeGapProfile& prof_a, const EdgeGapProfile& prof_b,
                                  const RegionGrid& grid, int region,
                                  const MotionMaskParams& params) {
  const double rho = global_gap_ratio(prof_a, prof_b, grid, params);
  return region_coefficient_impl(prof_a, prof_b, grid, region, rho, params);
}

std::vector<double> dynamic_coefficients(const EdgeGapProfile& prof_a,
                                         const EdgeGapProfile& prof_b, const RegionGrid& grid,
                                         const MotionMaskParams& params) {
  const double rho = global_gap_ratio(prof_a, prof_b, grid, params);
  std::vector<double> coeffs(grid.count());
  for (int region = 0; region < grid.count(); ++region) {
    coeffs[region] = region_coefficient_impl(prof_a, prof_b, grid, region, rho, params);
  }
  return coeffs;
}

MotionMask pre_eliminate(const Frame& frame_a, const Frame& frame_b, const ClusterMap& cmap_a,
                         const RegionGrid& grid, const MotionMaskParams& params) {
  const DepthImage& depth_a = frame_a.depth;
  const DepthImage& depth_b = frame_b.depth;
  if (depth_a.width() != depth_b.width() || depth_a.height() != depth_b.height()) {
    raise(ErrorCode::InvalidArgument, "pre_eliminate: frame dimension mismatch");
  }

  const ClusterMap cmap_b = classify_depth(depth_b, cmap_a.centroids);
  const EdgeGapProfile prof_a = edge_gap_profile(depth_a, grid, cmap_a);
  const EdgeGapProfile prof_b = edge_gap_profile(depth_b, grid, cmap_b);
  const double rho = global_gap_ratio(prof_a, prof_b, grid, params);
  const double rho_inv = rho > kMinGap ? 1.0 / rho : 1.0;

  const ComponentMap components = connected_components(cmap_a);
  MotionMask mask = MotionMask::all_static(depth_a);

  // (region, target cluster) for every triggered region with attributable
  // motion evidence, and the component chosen for each.
  std::vector<std::pair<int, int>> region_targets;
  std::vector<char> component_marked(components.count(), 0);

  for (int region = 0; region < grid.count(); ++region) {
    const double coeff = region_coefficient_impl(prof_a, prof_b, grid, region, rho, params);
    if (coeff <= params.trigger) continue;

    // Vote for the cluster that moved. Only the near (object) side of an edge
    // can implicate a cluster, and only where frame A actually shows the
    // object: a depth change at a fixed position means the object left (or
    // shifted), while an edge that merely appeared over A's background must
    // not drag the background cluster in.
    std::map<int, double> votes;
    for (const GapRecord& rec : prof_a.regions[static_cast<size_t>(region)]) {
      const Classified c = classify_record(rec, prof_b, grid, region, rho, params);
      const int cluster = cmap_a.label(rec.near_u, rec.near_v);
      if (cluster == kInvalidLabel) continue;
      if (c.paired && !c.consistent) {
        if (std::abs(c.match->near_depth - rec.near_depth) > params.tau_abs) {
          votes[cluster] += rec.gap;
        }
      } else if (!c.paired) {
        const double db = depth_b.at(rec.near_u, rec.near_v);
        if (db > 0.0 && std::abs(db - rec.near_depth) > params.tau_abs) {
          votes[cluster] += rec.gap;
        }
      }
    }
    for (const GapRecord& rec : prof_b.regions[static_cast<size_t>(region)]) {
      const Classified c = classify_record(rec, prof_a, grid, region, rho_inv, params);
      if (c.paired) continue;  // A-side evidence already covers paired records
      const double da = depth_a.at(rec.near_u, rec.near_v);
      if (da > 0.0 && std::abs(da - rec.near_depth) <= params.tau_abs) {
        const int cluster = cmap_a.label(rec.near_u, rec.near_v);
        if (cluster != kInvalidLabel) votes[cluster] += rec.gap;
      }
    }
    if (votes.empty()) continue;

    int target = votes.begin()->first;
    double best = votes.begin()->second;
    for (const auto& [cluster, weight] : votes) {
      if (weight > best) {
        target = cluster;
        best = weight;
      }
    }
    region_targets.emplace_back(region, target);

    // Largest connected component of the target cluster overlapping the region.
    const RegionGrid::Rect rect = grid.rect(region);
    int chosen = kInvalidLabel;
    for (int v = rect.v0; v < rect.v1; ++v) {
      for (int u = rect.u0; u < rect.u1; ++u) {
        if (cmap_a.label(u, v) != target) continue;
        const int comp = components.label(u, v);
        if (comp == kInvalidLabel) continue;
        if (chosen == kInvalidLabel || components.sizes[comp] > components.sizes[chosen] ||
            (components.sizes[comp] == components.sizes[chosen] && comp < chosen)) {
          chosen = comp;
        }
      }
    }
    if (chosen != kInvalidLabel) component_marked[chosen] = 1;
  }

  for (int v = 0; v < depth_a.height(); ++v) {
    for (int u = 0; u < depth_a.width(); ++u) {
      const int comp = components.label(u, v);
      if (comp != kInvalidLabel && component_marked[comp]) {
        mask.set(u, v, PixelState::Dynamic);
      }
    }
  }
  for (const auto& [region, target] : region_targets) {
    const RegionGrid::Rect rect = grid.rect(region);
    for (int v = rect.v0; v < rect.v1; ++v) {
      for (int u = rect.u0; u < rect.u1; ++u) {
        if (cmap_a.label(u, v) == target) mask.set(u, v, PixelState::Dynamic);
      }
    }
  }
  return mask;
}

}  // namespace dynvo

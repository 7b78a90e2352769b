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
#include "dynvo/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dynvo/error.hpp"
#include "dynvo/png_io.hpp"

namespace dynvo {

namespace fs = std::filesystem;

Intrinsics tum_default_intrinsics() {
  Intrinsics k;
  k.fx = 525.0;
  k.fy = 525.0;
  k.cx = 319.5;
  k.cy = 239.5;
  k.width = 640;
  k.height = 480;
  k.depth_scale = 5000.0;
  return k;
}

namespace {

struct IndexEntry {
  double timestamp;
  std::string filename;
};

std::vector<IndexEntry> read_index(const std::string& path) {
  std::ifstream file(path);
  if (!file) raise(ErrorCode::IoError, "cannot open " + path);
  std::vector<IndexEntry> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    const size_t comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    std::istringstream stream(line);
    IndexEntry entry;
    if (!(stream >> entry.timestamp)) continue;  // blank line
    if (!(stream >> entry.filename)) {
      raise(ErrorCode::FormatError, path + " line " + std::to_string(line_no) + ": missing filename");
    }
    entries.push_back(std::move(entry));
  }
  std::sort(entries.begin(), entries.end(),
            [](const IndexEntry& a, const IndexEntry& b) { return a.timestamp < b.timestamp; });
  return entries;
}

}  // namespace

AssociatedSequence load_tum(const std::string& dir, double max_dt, const Intrinsics& intrinsics) {
  const auto rgb = read_index((fs::path(dir) / "rgb.txt").string());
  const auto depth = read_index((fs::path(dir) / "depth.txt").string());

  // Greedy nearest-timestamp matching, best |dt| first, each entry used once.
  struct Candidate {
    double dt;
    double t_lo, t_hi;  // symmetric tie-break
    size_t r, d;
  };
  std::vector<Candidate> candidates;
  for (size_t r = 0; r < rgb.size(); ++r) {
    // depth entries are sorted; only a window around each rgb timestamp can match
    const auto lower = std::lower_bound(
        depth.begin(), depth.end(), rgb[r].timestamp - max_dt,
        [](const IndexEntry& e, double t) { return e.timestamp < t; });
    for (auto it = lower; it != depth.end() && it->timestamp <= rgb[r].timestamp + max_dt; ++it) {
      const double dt = std::abs(it->timestamp - rgb[r].timestamp);
      candidates.push_back({dt, std::min(rgb[r].timestamp, it->timestamp),
                            std::max(rgb[r].timestamp, it->timestamp), r,
                            static_cast<size_t>(it - depth.begin())});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.dt != b.dt) return a.dt < b.dt;
    if (a.t_lo != b.t_lo) return a.t_lo < b.t_lo;
    return a.t_hi < b.t_hi;
  });

  std::vector<char> rgb_used(rgb.size(), 0);
  std::vector<char> depth_used(depth.size(), 0);
  AssociatedSequence seq;
  seq.intrinsics = intrinsics;
  for (const Candidate& c : candidates) {
    if (rgb_used[c.r] || depth_used[c.d]) continue;
    rgb_used[c.r] = 1;
    depth_used[c.d] = 1;
    AssociatedPair pair;
    pair.timestamp = rgb[c.r].timestamp;
    pair.depth_timestamp = depth[c.d].timestamp;
    pair.rgb_path = (fs::path(dir) / rgb[c.r].filename).string();
    pair.depth_path = (fs::path(dir) / depth[c.d].filename).string();
    seq.pairs.push_back(std::move(pair));
  }
  std::sort(seq.pairs.begin(), seq.pairs.end(),
            [](const AssociatedPair& a, const AssociatedPair& b) { return a.timestamp < b.timestamp; });
  if (seq.pairs.empty()) raise(ErrorCode::EmptyAssociation, "no rgb/depth pairs within tolerance");

  const fs::path gt_path = fs::path(dir) / "groundtruth.txt";
  if (fs::exists(gt_path)) seq.groundtruth = read_trajectory(gt_path.string());
  return seq;
}

Frame load_frame(const AssociatedPair& pair, const Intrinsics& intrinsics) {
  Frame frame;
  frame.timestamp = pair.timestamp;
  frame.intensity = load_intensity_png(pair.rgb_path);
  frame.depth = load_depth_png(pair.depth_path, intrinsics.depth_scale);
  if (frame.intensity.width() != frame.depth.width() ||
      frame.intensity.height() != frame.depth.height()) {
    raise(ErrorCode::FormatError, "rgb/depth dimension mismatch at t=" + std::to_string(pair.timestamp));
  }
  return frame;
}

Trajectory read_trajectory(const std::string& path) {
  std::ifstream file(path);
  if (!file) raise(ErrorCode::IoError, "cannot open " + path);
  Trajectory trajectory;
  std::string line;
  int line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    const size_t comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    std::istringstream stream(line);
    double t, tx, ty, tz, qx, qy, qz, qw;
    if (!(stream >> t)) continue;
    if (!(stream >> tx >> ty >> tz >> qx >> qy >> qz >> qw)) {
      raise(ErrorCode::FormatError, path + " line " + std::to_string(line_no) + ": expected 8 fields");
    }
    Eigen::Quaterniond q(qw, qx, qy, qz);
    const double norm = q.norm();
    if (std::abs(norm - 1.0) > 1e-3) {
      raise(ErrorCode::FormatError,
            path + " line " + std::to_string(line_no) + ": quaternion norm " + std::to_string(norm));
    }
    q.normalize();
    trajectory.push_back({t, PoseSE3(q.toRotationMatrix(), Eigen::Vector3d(tx, ty, tz))});
  }
  return trajectory;
}

void write_trajectory(const std::string& path, const Trajectory& trajectory) {
  std::ofstream file(path);
  if (!file) raise(ErrorCode::IoError, "cannot write " + path);
  file << "# timestamp tx ty tz qx qy qz qw\n";
  char line[256];
  for (const TrajectoryEntry& entry : trajectory) {
    const Eigen::Quaterniond q(entry.pose.rotation());
    const Eigen::Vector3d& t = entry.pose.translation();
    std::snprintf(line, sizeof(line), "%.9f %.9f %.9f %.9f %.9f %.9f %.9f %.9f\n",
                  entry.timestamp, t.x(), t.y(), t.z(), q.x(), q.y(), q.z(), q.w());
    file << line;
  }
  if (!file) raise(ErrorCode::IoError, "write failed for " + path);
}

void export_point_cloud(const std::string& path, const std::vector<Frame>& frames,
                        const std::vector<PoseSE3>& poses, const std::vector<MotionMask>& masks,
                        const Intrinsics& intrinsics, int stride) {
  if (frames.size() != poses.size() || frames.size() != masks.size()) {
    raise(ErrorCode::InvalidArgument, "export_point_cloud: list length mismatch");
  }
  if (stride < 1) raise(ErrorCode::InvalidArgument, "export_point_cloud: stride must be >= 1");

  struct CloudPoint {
    Eigen::Vector3d p;
    uint8_t gray;
  };
  std::vector<CloudPoint> points;
  for (size_t f = 0; f < frames.size(); ++f) {
    const Frame& frame = frames[f];
    for (int v = 0; v < frame.height(); v += stride) {
      for (int u = 0; u < frame.width(); u += stride) {
        if (masks[f].at(u, v) != PixelState::Static) continue;
        const double d = frame.depth.at(u, v);
        if (d <= 0.0) continue;
        const Eigen::Vector3d world = poses[f] * backproject(intrinsics, u, v, d);
        const double intensity = std::clamp(frame.intensity.at(u, v), 0.0, 1.0);
        points.push_back({world, static_cast<uint8_t>(std::lround(intensity * 255.0))});
      }
    }
  }

  std::ofstream file(path);
  if (!file) raise(ErrorCode::IoError, "cannot write " + path);
  file << "ply\nformat ascii 1.0\nelement vertex " << points.size()
       << "\nproperty float x\nproperty float y\nproperty float z\n"
          "property uchar red\nproperty uchar green\nproperty uchar blue\nend_header\n";
  char line[160];
  for (const CloudPoint& pt : points) {
    std::snprintf(line, sizeof(line), "%.6f %.6f %.6f %d %d %d\n", pt.p.x(), pt.p.y(), pt.p.z(),
                  pt.gray, pt.gray, pt.gray);
    file << line;
  }
  if (!file) raise(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace dynvo

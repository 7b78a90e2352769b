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
#include "dynvo/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "dynvo/error.hpp"
#include "dynvo/png_io.hpp"

namespace dynvo {

namespace {

constexpr int kNoHit = -1;

struct Hit {
  double t = std::numeric_limits<double>::infinity();  // camera-frame depth
  int primitive = kNoHit;   // index into the flattened primitive list
  Eigen::Vector3d point = Eigen::Vector3d::Zero();  // world-frame hit point
};

// Primitive indexing: planes first, then static boxes, then movers.
struct FlatScene {
  int plane_count = 0;
  int static_count = 0;
  int mover_count = 0;

  bool is_mover(int primitive) const { return primitive >= plane_count + static_count; }
  int mover_index(int primitive) const { return primitive - plane_count - static_count; }
};

// Ray p = origin + t * dir against n . X = offset.
double intersect_plane(const PlaneSpec& plane, const Eigen::Vector3d& origin,
                       const Eigen::Vector3d& dir) {
  const double denom = plane.normal.dot(dir);
  if (std::abs(denom) < 1e-12) return std::numeric_limits<double>::infinity();
  const double t = (plane.offset - plane.normal.dot(origin)) / denom;
  return t > 1e-9 ? t : std::numeric_limits<double>::infinity();
}

// Slab test; returns the first positive boundary crossing so a camera inside
// the box sees its interior walls.
double intersect_box(const Eigen::Vector3d& center, const Eigen::Vector3d& half,
                     const Eigen::Vector3d& origin, const Eigen::Vector3d& dir) {
  double tmin = -std::numeric_limits<double>::infinity();
  double tmax = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; ++k) {
    const double lo = center[k] - half[k];
    const double hi = center[k] + half[k];
    if (std::abs(dir[k]) < 1e-12) {
      if (origin[k] < lo || origin[k] > hi) return std::numeric_limits<double>::infinity();
      continue;
    }
    double t0 = (lo - origin[k]) / dir[k];
    double t1 = (hi - origin[k]) / dir[k];
    if (t0 > t1) std::swap(t0, t1);
    tmin = std::max(tmin, t0);
    tmax = std::min(tmax, t1);
    if (tmin > tmax) return std::numeric_limits<double>::infinity();
  }
  if (tmin > 1e-9) return tmin;
  if (tmax > 1e-9) return tmax;
  return std::numeric_limits<double>::infinity();
}

double texture_value(const TextureSpec& tex, const Eigen::Vector3d& p, double offset) {
  double value = tex.base + offset;
  switch (tex.kind) {
    case TextureSpec::Kind::Checker: {
      const long parity = (std::lround(std::floor(p.x() / tex.cell)) +
                           std::lround(std::floor(p.y() / tex.cell)) +
                           std::lround(std::floor(p.z() / tex.cell))) & 1L;
      value += parity ? 0.5 * tex.amplitude : -0.5 * tex.amplitude;
      break;
    }
    case TextureSpec::Kind::Gradient:
      value += tex.amplitude * (p.x() + p.y()) / tex.cell * 0.05;
      break;
    case TextureSpec::Kind::Sine: {
      const double w = 2.0 * M_PI / tex.cell;
      value += 0.5 * tex.amplitude *
               (std::sin(w * p.x()) * std::sin(w * p.y()) + 0.5 * std::sin(w * (p.x() + p.z())));
      break;
    }
  }
  return std::clamp(value, 0.02, 0.98);
}

}  // namespace

PoseSE3 camera_pose_at(const SceneSpec& spec, int frame_index) {
  if (!spec.camera_poses.empty()) {
    return spec.camera_poses[static_cast<size_t>(frame_index)];
  }
  return se3_exp(Twist(frame_index * spec.camera_velocity));
}

RenderedSequence render_sequence(const SceneSpec& spec, uint64_t seed) {
  if (spec.frame_count < 2) raise(ErrorCode::InvalidArgument, "render_sequence: need >= 2 frames");
  if (!spec.intrinsics.valid()) raise(ErrorCode::InvalidArgument, "render_sequence: bad intrinsics");
  if (spec.planes.empty() && spec.static_boxes.empty()) {
    raise(ErrorCode::InvalidArgument, "render_sequence: scene has no background geometry");
  }
  if (!spec.camera_poses.empty() &&
      static_cast<int>(spec.camera_poses.size()) != spec.frame_count) {
    raise(ErrorCode::InvalidArgument, "render_sequence: camera pose script length mismatch");
  }

  const Intrinsics& K = spec.intrinsics;
  FlatScene flat;
  flat.plane_count = static_cast<int>(spec.planes.size());
  flat.static_count = static_cast<int>(spec.static_boxes.size());
  flat.mover_count = static_cast<int>(spec.movers.size());

  RenderedSequence seq;
  seq.frames.reserve(spec.frame_count);
  seq.gt_masks.reserve(spec.frame_count);

  for (int f = 0; f < spec.frame_count; ++f) {
    const PoseSE3 cam = camera_pose_at(spec, f);
    const Eigen::Vector3d origin = cam.translation();
    const Eigen::Matrix3d rot = cam.rotation();

    Frame frame;
    frame.timestamp = f / spec.fps;
    frame.intensity = IntensityImage(K.width, K.height);
    frame.depth = DepthImage(K.width, K.height);
    MotionMask gt_mask(K.width, K.height, PixelState::Static);

    // Per-frame noise stream so frames are reproducible independently.
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + static_cast<uint64_t>(f) + 1);
    std::normal_distribution<double> noise(0.0, spec.depth_noise_sigma);

    std::vector<Eigen::Vector3d> mover_offsets(spec.movers.size());
    std::vector<bool> mover_moved(spec.movers.size(), false);
    for (size_t m = 0; m < spec.movers.size(); ++m) {
      mover_offsets[m] = f * spec.movers[m].velocity;
      mover_moved[m] = f > 0 && spec.movers[m].velocity.norm() > 0.0;
    }

    auto inside = [&origin](const Eigen::Vector3d& center, const Eigen::Vector3d& half) {
      return ((origin - center).cwiseAbs().array() < half.array() + 1e-9).all();
    };
    for (const BoxSpec& box : spec.static_boxes) {
      if (inside(box.center, box.half_extent)) {
        raise(ErrorCode::DegenerateScene, "camera inside scene geometry");
      }
    }
    for (size_t m = 0; m < spec.movers.size(); ++m) {
      if (inside(spec.movers[m].box.center + mover_offsets[m], spec.movers[m].box.half_extent)) {
        raise(ErrorCode::DegenerateScene, "camera inside a mover");
      }
    }

    for (int v = 0; v < K.height; ++v) {
      for (int u = 0; u < K.width; ++u) {
        // Camera-frame direction with unit z, so the ray parameter t is the
        // camera-frame depth directly.
        const Eigen::Vector3d dir_cam((u - K.cx) / K.fx, (v - K.cy) / K.fy, 1.0);
        const Eigen::Vector3d dir = rot * dir_cam;

        Hit hit;
        int prim = 0;
        for (const PlaneSpec& plane : spec.planes) {
          const double t = intersect_plane(plane, origin, dir);
          if (t < hit.t) {
            hit.t = t;
            hit.primitive = prim;
          }
          ++prim;
        }
        for (const BoxSpec& box : spec.static_boxes) {
          const double t = intersect_box(box.center, box.half_extent, origin, dir);
          if (t < hit.t) {
            hit.t = t;
            hit.primitive = prim;
          }
          ++prim;
        }
        for (size_t m = 0; m < spec.movers.size(); ++m) {
          const double t = intersect_box(spec.movers[m].box.center + mover_offsets[m],
                                         spec.movers[m].box.half_extent, origin, dir);
          if (t < hit.t) {
            hit.t = t;
            hit.primitive = prim;
          }
          ++prim;
        }

        if (hit.primitive == kNoHit) {
          frame.depth.at(u, v) = 0.0;
          frame.intensity.at(u, v) = 0.0;
          gt_mask.set(u, v, PixelState::Invalid);
          continue;
        }
        if (hit.t < 1e-6) raise(ErrorCode::DegenerateScene, "camera inside scene geometry");

        hit.point = origin + hit.t * dir;

        // Texture is attached to the primitive: movers carry theirs along.
        double offset = 0.0;
        Eigen::Vector3d tex_point = hit.point;
        if (flat.is_mover(hit.primitive)) {
          const int m = flat.mover_index(hit.primitive);
          tex_point -= mover_offsets[m];
          offset = spec.movers[m].intensity_offset;
          if (mover_moved[m]) gt_mask.set(u, v, PixelState::Dynamic);
        }
        frame.intensity.at(u, v) = texture_value(spec.texture, tex_point, offset);

        double depth = hit.t;
        if (spec.depth_noise_sigma > 0.0) depth = std::max(depth + noise(rng), 1e-3);
        frame.depth.at(u, v) = depth;
      }
    }

    seq.frames.push_back(std::move(frame));
    seq.gt_masks.push_back(std::move(gt_mask));
    seq.trajectory.push_back({f / spec.fps, cam});
  }
  return seq;
}

void emit_tum_dataset(const RenderedSequence& seq, const Intrinsics& intrinsics,
                      const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(dir) / "rgb");
  fs::create_directories(fs::path(dir) / "depth");
  fs::create_directories(fs::path(dir) / "mask");

  std::ofstream rgb_index(fs::path(dir) / "rgb.txt");
  std::ofstream depth_index(fs::path(dir) / "depth.txt");
  if (!rgb_index || !depth_index) raise(ErrorCode::IoError, "cannot write index files in " + dir);
  rgb_index << "# color images\n# timestamp filename\n";
  depth_index << "# depth images\n# timestamp filename\n";

  char name[64];
  for (size_t f = 0; f < seq.frames.size(); ++f) {
    const double t = seq.frames[f].timestamp;
    std::snprintf(name, sizeof(name), "%.6f.png", t);
    const std::string rgb_rel = std::string("rgb/") + name;
    const std::string depth_rel = std::string("depth/") + name;
    const std::string mask_rel = std::string("mask/") + name;
    save_intensity_png((fs::path(dir) / rgb_rel).string(), seq.frames[f].intensity);
    save_depth_png((fs::path(dir) / depth_rel).string(), seq.frames[f].depth,
                   intrinsics.depth_scale);
    write_mask_png((fs::path(dir) / mask_rel).string(), seq.gt_masks[f]);

    char line[128];
    std::snprintf(line, sizeof(line), "%.6f %s\n", t, rgb_rel.c_str());
    rgb_index << line;
    std::snprintf(line, sizeof(line), "%.6f %s\n", t, depth_rel.c_str());
    depth_index << line;
  }

  write_trajectory((fs::path(dir) / "groundtruth.txt").string(), seq.trajectory);
}

namespace {

std::vector<double> parse_numbers(const std::string& text, size_t expected, int line_no) {
  std::istringstream stream(text);
  std::vector<double> out;
  double value = 0.0;
  while (stream >> value) out.push_back(value);
  if (out.size() != expected) {
    raise(ErrorCode::FormatError, "scene spec line " + std::to_string(line_no) + ": expected " +
                                      std::to_string(expected) + " numbers");
  }
  return out;
}

}  // namespace

SceneSpec parse_scene_spec(const std::string& path) {
  std::ifstream file(path);
  if (!file) raise(ErrorCode::IoError, "cannot open scene spec " + path);

  SceneSpec spec;
  spec.intrinsics.fx = 300.0;
  spec.intrinsics.fy = 300.0;
  spec.intrinsics.cx = 159.5;
  spec.intrinsics.cy = 119.5;
  spec.intrinsics.width = 320;
  spec.intrinsics.height = 240;

  std::string line;
  int line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    const size_t comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      std::istringstream check(line);
      std::string token;
      if (check >> token) {
        raise(ErrorCode::FormatError,
              "scene spec line " + std::to_string(line_no) + ": expected key = value");
      }
      continue;
    }
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    auto trim = [](std::string& s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    trim(key);
    trim(value);

    if (key == "width") spec.intrinsics.width = std::stoi(value);
    else if (key == "height") spec.intrinsics.height = std::stoi(value);
    else if (key == "fx") spec.intrinsics.fx = std::stod(value);
    else if (key == "fy") spec.intrinsics.fy = std::stod(value);
    else if (key == "cx") spec.intrinsics.cx = std::stod(value);
    else if (key == "cy") spec.intrinsics.cy = std::stod(value);
    else if (key == "depth_scale") spec.intrinsics.depth_scale = std::stod(value);
    else if (key == "frames") spec.frame_count = std::stoi(value);
    else if (key == "fps") spec.fps = std::stod(value);
    else if (key == "depth_noise") spec.depth_noise_sigma = std::stod(value);
    else if (key == "texture") {
      if (value == "checker") spec.texture.kind = TextureSpec::Kind::Checker;
      else if (value == "gradient") spec.texture.kind = TextureSpec::Kind::Gradient;
      else if (value == "sine") spec.texture.kind = TextureSpec::Kind::Sine;
      else raise(ErrorCode::FormatError, "scene spec line " + std::to_string(line_no) +
                                             ": unknown texture " + value);
    } else if (key == "texture_cell") spec.texture.cell = std::stod(value);
    else if (key == "texture_amplitude") spec.texture.amplitude = std::stod(value);
    else if (key == "texture_base") spec.texture.base = std::stod(value);
    else if (key == "plane") {
      const auto n = parse_numbers(value, 4, line_no);
      PlaneSpec plane;
      plane.normal = Eigen::Vector3d(n[0], n[1], n[2]).normalized();
      plane.offset = n[3];
      spec.planes.push_back(plane);
    } else if (key == "box") {
      const auto n = parse_numbers(value, 6, line_no);
      spec.static_boxes.push_back(
          {Eigen::Vector3d(n[0], n[1], n[2]), Eigen::Vector3d(n[3], n[4], n[5])});
    } else if (key == "mover") {
      const auto n = parse_numbers(value, 9, line_no);
      MoverSpec mover;
      mover.box = {Eigen::Vector3d(n[0], n[1], n[2]), Eigen::Vector3d(n[3], n[4], n[5])};
      mover.velocity = Eigen::Vector3d(n[6], n[7], n[8]);
      spec.movers.push_back(mover);
    } else if (key == "camera_velocity") {
      const auto n = parse_numbers(value, 6, line_no);
      for (int i = 0; i < 6; ++i) spec.camera_velocity[i] = n[i];
    } else {
      raise(ErrorCode::FormatError,
            "scene spec line " + std::to_string(line_no) + ": unknown key " + key);
    }
  }
  return spec;
}

}  // namespace dynvo

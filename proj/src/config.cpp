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
#include "dynvo/config.hpp"

#include <fstream>
#include <sstream>

#include "dynvo/error.hpp"

namespace dynvo {

namespace {

bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  raise(ErrorCode::FormatError, "config key " + key + ": expected a boolean, got " + value);
}

}  // namespace

void apply_config_key(RunConfig& config, const std::string& key, const std::string& value) {
  try {
    if (key == "fx") config.intrinsics.fx = std::stod(value);
    else if (key == "fy") config.intrinsics.fy = std::stod(value);
    else if (key == "cx") config.intrinsics.cx = std::stod(value);
    else if (key == "cy") config.intrinsics.cy = std::stod(value);
    else if (key == "width") config.intrinsics.width = std::stoi(value);
    else if (key == "height") config.intrinsics.height = std::stoi(value);
    else if (key == "depth_scale") config.intrinsics.depth_scale = std::stod(value);
    else if (key == "alpha_i") config.refine.align.alpha_i = std::stod(value);
    else if (key == "pyramid_levels") config.refine.align.pyramid_levels = std::stoi(value);
    else if (key == "max_gn_iters") config.refine.align.max_gn_iters = std::stoi(value);
    else if (key == "update_norm_tol") config.refine.align.update_norm_tol = std::stod(value);
    else if (key == "huber_delta") config.refine.align.huber_delta = std::stod(value);
    else if (key == "outlier_kappa") config.refine.align.outlier_kappa = std::stod(value);
    else if (key == "min_valid_residuals") config.refine.align.min_valid_residuals = std::stoi(value);
    else if (key == "block_size") config.refine.mask_params.block = std::stoi(value);
    else if (key == "tau_abs") config.refine.mask_params.tau_abs = std::stod(value);
    else if (key == "tau_rel") config.refine.mask_params.tau_rel = std::stod(value);
    else if (key == "trigger") config.refine.mask_params.trigger = std::stod(value);
    else if (key == "pair_radius") config.refine.mask_params.pair_radius = std::stod(value);
    else if (key == "max_refine_iters") config.refine.max_iterations = std::stoi(value);
    else if (key == "mask_change_tol") config.refine.mask_change_tol = std::stod(value);
    else if (key == "max_clusters") config.refine.max_clusters = std::stoi(value);
    else if (key == "seed") config.refine.seed = std::stoull(value);
    else if (key == "warm_start") config.refine.warm_start = parse_bool(value, key);
    else if (key == "assoc_max_dt") config.assoc_max_dt = std::stod(value);
    else if (key == "rpe_delta") config.rpe_delta = std::stod(value);
    else if (key == "debug_masks") config.debug_masks = parse_bool(value, key);
    else if (key == "out_dir") config.out_dir = value;
    else raise(ErrorCode::FormatError, "unknown config key: " + key);
  } catch (const std::invalid_argument&) {
    raise(ErrorCode::FormatError, "config key " + key + ": cannot parse value " + value);
  } catch (const std::out_of_range&) {
    raise(ErrorCode::FormatError, "config key " + key + ": value out of range " + value);
  }
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) raise(ErrorCode::IoError, "cannot open config " + path);

  RunConfig config;
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
              path + " line " + std::to_string(line_no) + ": expected key = value");
      }
      continue;
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    apply_config_key(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return config;
}

}  // namespace dynvo

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

#include <string>

#include "dynvo/dataset.hpp"
#include "dynvo/refine.hpp"

namespace dynvo {

struct RunConfig {
  Intrinsics intrinsics = tum_default_intrinsics();
  RefineConfig refine;
  double assoc_max_dt = 0.02;
  double rpe_delta = 1.0;
  bool debug_masks = false;
  std::string out_dir = "out";
};

// Applies one key = value setting; unknown keys raise format-error.
void apply_config_key(RunConfig& config, const std::string& key, const std::string& value);

// Flat key = value file with '#' comments.
RunConfig parse_config_file(const std::string& path);

}  // namespace dynvo

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

#include <ostream>
#include <string>

#include "dynvo/config.hpp"

namespace dynvo {

// Exit codes: 0 success, 2 partial failures (fallback pairs), 1 fatal.
int cmd_run(const std::string& dataset_dir, const RunConfig& config);

int cmd_segment(const std::string& rgb_a, const std::string& depth_a, const std::string& rgb_b,
                const std::string& depth_b, const RunConfig& config);

int cmd_eval(const std::string& gt_file, const std::string& est_file, const std::string& mode,
             double delta, std::ostream& out);

int cmd_synth(const std::string& spec_file, const std::string& out_dir, uint64_t seed);

}  // namespace dynvo

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

struct Rgb8Image {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> data;  // interleaved RGB
};

struct Gray16Image {
  int width = 0;
  int height = 0;
  std::vector<uint16_t> data;
};

struct Gray8Image {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> data;
};

Rgb8Image read_png_rgb8(const std::string& path);
Gray16Image read_png_gray16(const std::string& path);
Gray8Image read_png_gray8(const std::string& path);

void write_png_rgb8(const std::string& path, const Rgb8Image& img);
void write_png_gray16(const std::string& path, const Gray16Image& img);
void write_png_gray8(const std::string& path, const Gray8Image& img);

// 8-bit RGB (or palette/gray, expanded) -> luma intensity in [0, 1].
IntensityImage load_intensity_png(const std::string& path);
// 16-bit grayscale raw units -> meters via depth_scale.
DepthImage load_depth_png(const std::string& path, double depth_scale);

void save_intensity_png(const std::string& path, const IntensityImage& img);
void save_depth_png(const std::string& path, const DepthImage& img, double depth_scale);

}  // namespace dynvo

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
#include <vector>

namespace dynvo {

// Row-major scalar grid shared by the intensity and depth containers.
class ScalarImage {
 public:
  ScalarImage() = default;
  ScalarImage(int width, int height, double fill = 0.0)
      : width_(width), height_(height), data_(static_cast<size_t>(width) * height, fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return data_.empty(); }
  size_t size() const { return data_.size(); }

  double at(int u, int v) const { return data_[static_cast<size_t>(v) * width_ + u]; }
  double& at(int u, int v) { return data_[static_cast<size_t>(v) * width_ + u]; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  bool in_bounds(int u, int v) const { return u >= 0 && u < width_ && v >= 0 && v < height_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

// Grayscale values in [0, 1], converted from RGB by the fixed luma weights
// (0.299, 0.587, 0.114).
using IntensityImage = ScalarImage;

// Depth in meters; 0 encodes an invalid pixel (hole), matching the TUM
// convention of 0 = missing.
using DepthImage = ScalarImage;

struct Frame {
  double timestamp = 0.0;
  IntensityImage intensity;
  DepthImage depth;

  int width() const { return intensity.width(); }
  int height() const { return intensity.height(); }
};

// Luma conversion from interleaved 8-bit RGB.
IntensityImage rgb_to_intensity(int width, int height, const std::vector<uint8_t>& rgb);

// Grayscale 3x3 morphological closing restricted to the valid (> 0) support;
// invalid pixels stay invalid.
DepthImage close_depth_3x3(const DepthImage& depth);

// Row-fill stage: each zero pixel takes the nearest nonzero value to its
// right in the same row; a row whose tail is all zero falls back to the
// nearest nonzero on the left; fully-zero rows stay zero.
DepthImage fill_depth_rows(const DepthImage& depth);

// Full hole filling: row fill followed by the 3x3 closing.
DepthImage fill_depth_holes(const DepthImage& depth);

struct Sample {
  double value = 0.0;
  bool valid = false;
};

// Bilinear sample plus the exact derivative of the bilinear surface at (u,v).
struct SampleGrad {
  double value = 0.0;
  double du = 0.0;
  double dv = 0.0;
  bool valid = false;
};

Sample sample_bilinear(const IntensityImage& img, double u, double v);
// Depth variant: invalid if any of the four neighbors is zero.
Sample sample_bilinear_depth(const DepthImage& img, double u, double v);

SampleGrad sample_bilinear_grad(const IntensityImage& img, double u, double v);
SampleGrad sample_bilinear_grad_depth(const DepthImage& img, double u, double v);

struct GradientField {
  ScalarImage gx;
  ScalarImage gy;
};

// Central differences in the interior, one-sided at the borders.
// Requires width, height >= 3.
GradientField gradient(const IntensityImage& img);

IntensityImage downsample(const IntensityImage& img);
DepthImage downsample_depth(const DepthImage& img);
Frame downsample(const Frame& frame);

}  // namespace dynvo

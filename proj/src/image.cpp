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
#include "dynvo/image.hpp"

#include <algorithm>
#include <cmath>

#include "dynvo/error.hpp"

namespace dynvo {

IntensityImage rgb_to_intensity(int width, int height, const std::vector<uint8_t>& rgb) {
  IntensityImage out(width, height);
  const size_t n = static_cast<size_t>(width) * height;
  for (size_t i = 0; i < n; ++i) {
    const double r = rgb[3 * i + 0] / 255.0;
    const double g = rgb[3 * i + 1] / 255.0;
    const double b = rgb[3 * i + 2] / 255.0;
    out.data()[i] = 0.299 * r + 0.587 * g + 0.114 * b;
  }
  return out;
}

namespace {

// Window extremum over positive pixels only; zero when the window holds none.
template <typename Cmp>
DepthImage morph_3x3(const DepthImage& in, Cmp better, double worst) {
  const int w = in.width();
  const int h = in.height();
  DepthImage out(w, h, 0.0);
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      if (in.at(u, v) <= 0.0) continue;  // invalid pixels stay invalid
      double best = worst;
      bool any = false;
      for (int dv = -1; dv <= 1; ++dv) {
        for (int du = -1; du <= 1; ++du) {
          const int uu = u + du;
          const int vv = v + dv;
          if (!in.in_bounds(uu, vv)) continue;
          const double d = in.at(uu, vv);
          if (d <= 0.0) continue;
          if (!any || better(d, best)) best = d;
          any = true;
        }
      }
      out.at(u, v) = any ? best : 0.0;
    }
  }
  return out;
}

}  // namespace

DepthImage close_depth_3x3(const DepthImage& depth) {
  DepthImage dilated = morph_3x3(depth, std::greater<double>(), 0.0);
  return morph_3x3(dilated, std::less<double>(), 1e30);
}

DepthImage fill_depth_rows(const DepthImage& depth) {
  const int w = depth.width();
  const int h = depth.height();
  if (w == 0 || h == 0) return depth;

  DepthImage filled = depth;
  for (int v = 0; v < h; ++v) {
    // Right-neighbor propagation: scan right to left carrying the next
    // valid value.
    double next_valid = 0.0;
    for (int u = w - 1; u >= 0; --u) {
      const double d = filled.at(u, v);
      if (d > 0.0) {
        next_valid = d;
      } else if (next_valid > 0.0) {
        filled.at(u, v) = next_valid;
      }
    }
    // All-zero tail: fall back to the nearest valid value on the left.
    double prev_valid = 0.0;
    for (int u = 0; u < w; ++u) {
      const double d = filled.at(u, v);
      if (d > 0.0) {
        prev_valid = d;
      } else if (prev_valid > 0.0) {
        filled.at(u, v) = prev_valid;
      }
    }
    // A fully-zero row stays zero.
  }
  return filled;
}

DepthImage fill_depth_holes(const DepthImage& depth) {
  return close_depth_3x3(fill_depth_rows(depth));
}

namespace {

struct BilinearCell {
  int u0, v0;
  double fu, fv;
  bool in_bounds;
};

BilinearCell cell_of(const ScalarImage& img, double u, double v) {
  BilinearCell c;
  c.u0 = static_cast<int>(std::floor(u));
  c.v0 = static_cast<int>(std::floor(v));
  // Points exactly on the right/bottom edge use the last interior cell.
  if (c.u0 == img.width() - 1 && u == static_cast<double>(c.u0)) c.u0 -= 1;
  if (c.v0 == img.height() - 1 && v == static_cast<double>(c.v0)) c.v0 -= 1;
  c.fu = u - c.u0;
  c.fv = v - c.v0;
  c.in_bounds = c.u0 >= 0 && c.v0 >= 0 && c.u0 + 1 < img.width() && c.v0 + 1 < img.height();
  return c;
}

}  // namespace

Sample sample_bilinear(const IntensityImage& img, double u, double v) {
  const BilinearCell c = cell_of(img, u, v);
  if (!c.in_bounds) return {};
  const double i00 = img.at(c.u0, c.v0);
  const double i10 = img.at(c.u0 + 1, c.v0);
  const double i01 = img.at(c.u0, c.v0 + 1);
  const double i11 = img.at(c.u0 + 1, c.v0 + 1);
  const double top = i00 + c.fu * (i10 - i00);
  const double bot = i01 + c.fu * (i11 - i01);
  return {top + c.fv * (bot - top), true};
}

Sample sample_bilinear_depth(const DepthImage& img, double u, double v) {
  const BilinearCell c = cell_of(img, u, v);
  if (!c.in_bounds) return {};
  const double i00 = img.at(c.u0, c.v0);
  const double i10 = img.at(c.u0 + 1, c.v0);
  const double i01 = img.at(c.u0, c.v0 + 1);
  const double i11 = img.at(c.u0 + 1, c.v0 + 1);
  if (i00 <= 0.0 || i10 <= 0.0 || i01 <= 0.0 || i11 <= 0.0) return {};
  const double top = i00 + c.fu * (i10 - i00);
  const double bot = i01 + c.fu * (i11 - i01);
  return {top + c.fv * (bot - top), true};
}

namespace {

SampleGrad grad_from_cell(const ScalarImage& img, const BilinearCell& c) {
  const double i00 = img.at(c.u0, c.v0);
  const double i10 = img.at(c.u0 + 1, c.v0);
  const double i01 = img.at(c.u0, c.v0 + 1);
  const double i11 = img.at(c.u0 + 1, c.v0 + 1);
  SampleGrad g;
  const double top = i00 + c.fu * (i10 - i00);
  const double bot = i01 + c.fu * (i11 - i01);
  g.value = top + c.fv * (bot - top);
  g.du = (1.0 - c.fv) * (i10 - i00) + c.fv * (i11 - i01);
  g.dv = (1.0 - c.fu) * (i01 - i00) + c.fu * (i11 - i10);
  g.valid = true;
  return g;
}

}  // namespace

SampleGrad sample_bilinear_grad(const IntensityImage& img, double u, double v) {
  const BilinearCell c = cell_of(img, u, v);
  if (!c.in_bounds) return {};
  return grad_from_cell(img, c);
}

SampleGrad sample_bilinear_grad_depth(const DepthImage& img, double u, double v) {
  const BilinearCell c = cell_of(img, u, v);
  if (!c.in_bounds) return {};
  if (img.at(c.u0, c.v0) <= 0.0 || img.at(c.u0 + 1, c.v0) <= 0.0 ||
      img.at(c.u0, c.v0 + 1) <= 0.0 || img.at(c.u0 + 1, c.v0 + 1) <= 0.0) {
    return {};
  }
  return grad_from_cell(img, c);
}

GradientField gradient(const IntensityImage& img) {
  const int w = img.width();
  const int h = img.height();
  if (w < 3 || h < 3) raise(ErrorCode::InvalidArgument, "gradient: image smaller than 3x3");
  GradientField g{ScalarImage(w, h), ScalarImage(w, h)};
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      const int ul = std::max(u - 1, 0);
      const int ur = std::min(u + 1, w - 1);
      const int vt = std::max(v - 1, 0);
      const int vb = std::min(v + 1, h - 1);
      g.gx.at(u, v) = (img.at(ur, v) - img.at(ul, v)) / (ur - ul);
      g.gy.at(u, v) = (img.at(u, vb) - img.at(u, vt)) / (vb - vt);
    }
  }
  return g;
}

IntensityImage downsample(const IntensityImage& img) {
  const int w = img.width() / 2;
  const int h = img.height() / 2;
  IntensityImage out(w, h);
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      out.at(u, v) = 0.25 * (img.at(2 * u, 2 * v) + img.at(2 * u + 1, 2 * v) +
                             img.at(2 * u, 2 * v + 1) + img.at(2 * u + 1, 2 * v + 1));
    }
  }
  return out;
}

DepthImage downsample_depth(const DepthImage& img) {
  const int w = img.width() / 2;
  const int h = img.height() / 2;
  DepthImage out(w, h);
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      double sum = 0.0;
      int count = 0;
      for (int dv = 0; dv <= 1; ++dv) {
        for (int du = 0; du <= 1; ++du) {
          const double d = img.at(2 * u + du, 2 * v + dv);
          if (d > 0.0) {
            sum += d;
            ++count;
          }
        }
      }
      out.at(u, v) = count > 0 ? sum / count : 0.0;
    }
  }
  return out;
}

Frame downsample(const Frame& frame) {
  return Frame{frame.timestamp, downsample(frame.intensity), downsample_depth(frame.depth)};
}

}  // namespace dynvo

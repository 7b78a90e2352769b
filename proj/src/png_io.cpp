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
#include "dynvo/png_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <memory>

#include "dynvo/error.hpp"

namespace dynvo {

namespace {

struct FileCloser {
  void operator()(FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

struct PngDecoded {
  int width = 0;
  int height = 0;
  int channels = 0;
  int bit_depth = 0;               // 8 or 16 after transforms
  std::vector<uint8_t> bytes;      // row-major, 16-bit stored big-endian
};

PngDecoded read_png(const std::string& path, bool want_gray16) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) raise(ErrorCode::IoError, "cannot open " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) raise(ErrorCode::IoError, "png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    raise(ErrorCode::IoError, "png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    raise(ErrorCode::FormatError, "libpng failed to decode " + path);
  }

  png_init_io(png, file.get());
  png_read_info(png, info);

  const png_byte color_type = png_get_color_type(png, info);
  const png_byte depth = png_get_bit_depth(png, info);

  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (!want_gray16 && depth == 16) png_set_strip_16(png);

  png_read_update_info(png, info);

  PngDecoded out;
  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.channels = static_cast<int>(png_get_channels(png, info));
  out.bit_depth = static_cast<int>(png_get_bit_depth(png, info));

  const size_t row_bytes = png_get_rowbytes(png, info);
  out.bytes.resize(row_bytes * out.height);
  std::vector<png_bytep> rows(out.height);
  for (int v = 0; v < out.height; ++v) rows[v] = out.bytes.data() + row_bytes * v;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

void write_png(const std::string& path, int width, int height, int color_type, int bit_depth,
               const std::vector<png_bytep>& rows) {
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) raise(ErrorCode::IoError, "cannot write " + path);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) raise(ErrorCode::IoError, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    raise(ErrorCode::IoError, "png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    raise(ErrorCode::IoError, "libpng failed to encode " + path);
  }

  png_init_io(png, file.get());
  png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, const_cast<png_bytepp>(rows.data()));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

Rgb8Image read_png_rgb8(const std::string& path) {
  PngDecoded d = read_png(path, /*want_gray16=*/false);
  Rgb8Image img;
  img.width = d.width;
  img.height = d.height;
  img.data.resize(static_cast<size_t>(d.width) * d.height * 3);
  const size_t n = static_cast<size_t>(d.width) * d.height;
  if (d.channels == 3) {
    img.data = std::move(d.bytes);
  } else if (d.channels == 1) {
    for (size_t i = 0; i < n; ++i) {
      img.data[3 * i + 0] = d.bytes[i];
      img.data[3 * i + 1] = d.bytes[i];
      img.data[3 * i + 2] = d.bytes[i];
    }
  } else {
    raise(ErrorCode::FormatError, path + ": unsupported channel count");
  }
  return img;
}

Gray16Image read_png_gray16(const std::string& path) {
  PngDecoded d = read_png(path, /*want_gray16=*/true);
  if (d.channels != 1) raise(ErrorCode::FormatError, path + ": expected grayscale depth png");
  Gray16Image img;
  img.width = d.width;
  img.height = d.height;
  const size_t n = static_cast<size_t>(d.width) * d.height;
  img.data.resize(n);
  if (d.bit_depth == 16) {
    for (size_t i = 0; i < n; ++i) {
      img.data[i] = static_cast<uint16_t>((d.bytes[2 * i] << 8) | d.bytes[2 * i + 1]);
    }
  } else {
    for (size_t i = 0; i < n; ++i) img.data[i] = d.bytes[i];
  }
  return img;
}

Gray8Image read_png_gray8(const std::string& path) {
  PngDecoded d = read_png(path, /*want_gray16=*/false);
  Gray8Image img;
  img.width = d.width;
  img.height = d.height;
  const size_t n = static_cast<size_t>(d.width) * d.height;
  img.data.resize(n);
  if (d.channels == 1) {
    img.data = std::move(d.bytes);
  } else if (d.channels == 3) {
    for (size_t i = 0; i < n; ++i) {
      img.data[i] = static_cast<uint8_t>(
          std::lround(0.299 * d.bytes[3 * i] + 0.587 * d.bytes[3 * i + 1] + 0.114 * d.bytes[3 * i + 2]));
    }
  } else {
    raise(ErrorCode::FormatError, path + ": unsupported channel count");
  }
  return img;
}

void write_png_rgb8(const std::string& path, const Rgb8Image& img) {
  std::vector<png_bytep> rows(img.height);
  for (int v = 0; v < img.height; ++v) {
    rows[v] = const_cast<png_bytep>(img.data.data() + static_cast<size_t>(v) * img.width * 3);
  }
  write_png(path, img.width, img.height, PNG_COLOR_TYPE_RGB, 8, rows);
}

void write_png_gray16(const std::string& path, const Gray16Image& img) {
  // PNG stores 16-bit samples big-endian.
  std::vector<uint8_t> bytes(static_cast<size_t>(img.width) * img.height * 2);
  for (size_t i = 0; i < img.data.size(); ++i) {
    bytes[2 * i] = static_cast<uint8_t>(img.data[i] >> 8);
    bytes[2 * i + 1] = static_cast<uint8_t>(img.data[i] & 0xff);
  }
  std::vector<png_bytep> rows(img.height);
  for (int v = 0; v < img.height; ++v) {
    rows[v] = bytes.data() + static_cast<size_t>(v) * img.width * 2;
  }
  write_png(path, img.width, img.height, PNG_COLOR_TYPE_GRAY, 16, rows);
}

void write_png_gray8(const std::string& path, const Gray8Image& img) {
  std::vector<png_bytep> rows(img.height);
  for (int v = 0; v < img.height; ++v) {
    rows[v] = const_cast<png_bytep>(img.data.data() + static_cast<size_t>(v) * img.width);
  }
  write_png(path, img.width, img.height, PNG_COLOR_TYPE_GRAY, 8, rows);
}

IntensityImage load_intensity_png(const std::string& path) {
  Rgb8Image rgb = read_png_rgb8(path);
  return rgb_to_intensity(rgb.width, rgb.height, rgb.data);
}

DepthImage load_depth_png(const std::string& path, double depth_scale) {
  Gray16Image raw = read_png_gray16(path);
  DepthImage depth(raw.width, raw.height);
  for (size_t i = 0; i < raw.data.size(); ++i) {
    depth.data()[i] = raw.data[i] / depth_scale;
  }
  return depth;
}

void save_intensity_png(const std::string& path, const IntensityImage& img) {
  Rgb8Image rgb;
  rgb.width = img.width();
  rgb.height = img.height();
  rgb.data.resize(img.size() * 3);
  for (size_t i = 0; i < img.size(); ++i) {
    const double clamped = std::min(std::max(img.data()[i], 0.0), 1.0);
    const uint8_t g = static_cast<uint8_t>(std::lround(clamped * 255.0));
    rgb.data[3 * i + 0] = g;
    rgb.data[3 * i + 1] = g;
    rgb.data[3 * i + 2] = g;
  }
  write_png_rgb8(path, rgb);
}

void save_depth_png(const std::string& path, const DepthImage& img, double depth_scale) {
  Gray16Image raw;
  raw.width = img.width();
  raw.height = img.height();
  raw.data.resize(img.size());
  for (size_t i = 0; i < img.size(); ++i) {
    const double units = std::round(img.data()[i] * depth_scale);
    raw.data[i] = static_cast<uint16_t>(std::min(std::max(units, 0.0), 65535.0));
  }
  write_png_gray16(path, raw);
}

}  // namespace dynvo

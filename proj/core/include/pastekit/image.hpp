// Copyright (c) 2026, The pastekit Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "pastekit/rle.hpp"

namespace pastekit {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// 8-bit RGB raster, row-major, interleaved.
class Image {
 public:
  Image() = default;
  Image(std::int32_t width, std::int32_t height, Rgb fill = {});

  std::int32_t width() const noexcept { return width_; }
  std::int32_t height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  Rgb at(std::int32_t x, std::int32_t y) const noexcept {
    const std::size_t i = index(x, y);
    return {data_[i], data_[i + 1], data_[i + 2]};
  }
  void set(std::int32_t x, std::int32_t y, Rgb c) noexcept {
    const std::size_t i = index(x, y);
    data_[i] = c.r;
    data_[i + 1] = c.g;
    data_[i + 2] = c.b;
  }

  std::span<const std::uint8_t> data() const noexcept { return data_; }
  std::span<std::uint8_t> data() noexcept { return data_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(std::int32_t x, std::int32_t y) const noexcept {
    return 3 * (static_cast<std::size_t>(y) * width_ + x);
  }

  std::int32_t width_ = 0;
  std::int32_t height_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Decodes PNG or JPEG bytes; throws IoError if the data is not an image.
Image decode_image(std::span<const std::uint8_t> bytes);
Image load_image(const std::filesystem::path& path);

/// Lossless PNG encoding; output bytes are a pure function of the pixels.
std::vector<std::uint8_t> encode_png(const Image& image);
void save_png(const std::filesystem::path& path, const Image& image);

/// Bilinear resampling with half-pixel centers and edge clamping.
Image resize_bilinear(const Image& src, std::int32_t width, std::int32_t height);
/// Bilinear resampling of a binary mask, re-binarized at 0.5.
Bitmap resize_mask(const Bitmap& src, std::int32_t width, std::int32_t height);

/// Where instance and background rasters come from. Implementations must be
/// safe to call concurrently.
class ImageSource {
 public:
  virtual ~ImageSource() = default;
  virtual bool exists(const std::string& path) const = 0;
  virtual Image load(const std::string& path) const = 0;
};

/// Resolves relative paths against a root directory on disk.
class FileImageSource final : public ImageSource {
 public:
  explicit FileImageSource(std::filesystem::path root = {}) : root_(std::move(root)) {}

  bool exists(const std::string& path) const override;
  Image load(const std::string& path) const override;

  std::filesystem::path resolve(const std::string& path) const;

 private:
  std::filesystem::path root_;
};

}  // namespace pastekit

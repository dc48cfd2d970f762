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
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pastekit {

/// Axis-aligned integer box in pixels: top-left corner plus extent.
struct BBox {
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::int64_t w = 0;
  std::int64_t h = 0;

  friend bool operator==(const BBox&, const BBox&) = default;
};

/// Dense binary grid, row-major, one byte per pixel (0 or 1).
class Bitmap {
 public:
  Bitmap() = default;
  Bitmap(std::int32_t height, std::int32_t width);

  std::int32_t height() const noexcept { return height_; }
  std::int32_t width() const noexcept { return width_; }

  std::uint8_t at(std::int32_t x, std::int32_t y) const noexcept {
    return bits_[static_cast<std::size_t>(y) * width_ + x];
  }
  void set(std::int32_t x, std::int32_t y, bool value) noexcept {
    bits_[static_cast<std::size_t>(y) * width_ + x] = value ? 1 : 0;
  }

  std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  std::span<std::uint8_t> bits() noexcept { return bits_; }

  std::uint64_t popcount() const noexcept;

  friend bool operator==(const Bitmap&, const Bitmap&) = default;

 private:
  std::int32_t height_ = 0;
  std::int32_t width_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// COCO-compatible run-length encoded binary mask.
///
/// Runs are column-major and alternate between background and foreground,
/// starting with background. Only the first run may be zero (mask starts with
/// a set pixel). The sum of all runs equals `height * width`; both properties
/// are enforced on construction.
class RleMask {
 public:
  RleMask() = default;

  /// Validates the run sum and canonicalizes interior zero-length runs.
  /// Throws FormatError if the runs do not cover the grid exactly.
  static RleMask from_counts(std::int32_t height, std::int32_t width,
                             std::vector<std::uint32_t> counts);
  static RleMask empty(std::int32_t height, std::int32_t width);
  static RleMask full(std::int32_t height, std::int32_t width);

  std::int32_t height() const noexcept { return height_; }
  std::int32_t width() const noexcept { return width_; }
  std::span<const std::uint32_t> counts() const noexcept { return counts_; }

  /// Number of set pixels.
  std::uint64_t area() const noexcept;

  friend bool operator==(const RleMask&, const RleMask&) = default;

 private:
  std::int32_t height_ = 0;
  std::int32_t width_ = 0;
  std::vector<std::uint32_t> counts_;
};

RleMask rle_encode(const Bitmap& bitmap);
Bitmap rle_decode(const RleMask& mask);

/// COCO reference "compressed counts" string (LEB128-like 5-bit chunks,
/// ASCII offset 48, runs delta-coded against the run two places earlier).
std::string rle_compress_string(const RleMask& mask);
/// Inverse of rle_compress_string. Throws FormatError on truncated or
/// out-of-alphabet input, or when the runs do not cover `height * width`.
RleMask rle_decompress_string(std::string_view compressed, std::int32_t height,
                              std::int32_t width);

struct BoxArea {
  BBox bbox;
  std::uint64_t area = 0;

  friend bool operator==(const BoxArea&, const BoxArea&) = default;
};

/// Tight bounding box and popcount; an empty mask yields ((0,0,0,0), 0).
BoxArea bbox_and_area(const RleMask& mask);

enum class MaskOp { Union, Intersect, Subtract };

/// Pixelwise set operation on two masks of equal size, computed run-wise.
RleMask rle_merge(const RleMask& a, const RleMask& b, MaskOp op);

/// True if no interior run is zero and the runs sum to height * width.
bool rle_is_canonical(std::int32_t height, std::int32_t width,
                      std::span<const std::uint32_t> counts) noexcept;

}  // namespace pastekit

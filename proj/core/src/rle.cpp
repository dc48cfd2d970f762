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

#include "pastekit/rle.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "pastekit/error.hpp"

namespace pastekit {
namespace {

std::uint64_t grid_size(std::int32_t height, std::int32_t width) {
  if (height < 0 || width < 0) throw FormatError("negative mask dimensions");
  const auto n = static_cast<std::uint64_t>(height) * static_cast<std::uint64_t>(width);
  if (n > std::numeric_limits<std::uint32_t>::max()) {
    throw FormatError("mask too large for 32-bit run lengths");
  }
  return n;
}

// Collapses zero-length runs after the first; the neighbours of such a run
// carry the same value and are merged. Trailing zero runs are dropped.
std::vector<std::uint32_t> canonicalize(std::vector<std::uint32_t> counts) {
  std::vector<std::uint32_t> out;
  out.reserve(counts.size());
  bool merge_next = false;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const std::uint32_t c = counts[i];
    if (i > 0 && c == 0) {
      merge_next = !merge_next;
      continue;
    }
    if (merge_next) {
      out.back() += c;
      merge_next = false;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace

Bitmap::Bitmap(std::int32_t height, std::int32_t width)
    : height_(height), width_(width),
      bits_(static_cast<std::size_t>(std::max(height, 0)) * std::max(width, 0), 0) {}

std::uint64_t Bitmap::popcount() const noexcept {
  return static_cast<std::uint64_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

RleMask RleMask::from_counts(std::int32_t height, std::int32_t width,
                             std::vector<std::uint32_t> counts) {
  const std::uint64_t n = grid_size(height, width);
  const std::uint64_t sum =
      std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  if (sum != n) {
    throw FormatError("RLE counts sum to " + std::to_string(sum) + ", expected " +
                      std::to_string(n) + " for " + std::to_string(height) + "x" +
                      std::to_string(width));
  }
  RleMask m;
  m.height_ = height;
  m.width_ = width;
  m.counts_ = canonicalize(std::move(counts));
  return m;
}

RleMask RleMask::empty(std::int32_t height, std::int32_t width) {
  const auto n = static_cast<std::uint32_t>(grid_size(height, width));
  return from_counts(height, width, {n});
}

RleMask RleMask::full(std::int32_t height, std::int32_t width) {
  const auto n = static_cast<std::uint32_t>(grid_size(height, width));
  return from_counts(height, width, {0, n});
}

std::uint64_t RleMask::area() const noexcept {
  std::uint64_t a = 0;
  for (std::size_t i = 1; i < counts_.size(); i += 2) a += counts_[i];
  return a;
}

bool rle_is_canonical(std::int32_t height, std::int32_t width,
                      std::span<const std::uint32_t> counts) noexcept {
  if (height < 0 || width < 0) return false;
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (i > 0 && counts[i] == 0) return false;
    sum += counts[i];
  }
  return sum == static_cast<std::uint64_t>(height) * static_cast<std::uint64_t>(width);
}

RleMask rle_encode(const Bitmap& bitmap) {
  const std::int32_t h = bitmap.height();
  const std::int32_t w = bitmap.width();
  std::vector<std::uint32_t> counts;
  std::uint8_t current = 0;
  std::uint32_t run = 0;
  for (std::int32_t x = 0; x < w; ++x) {
    for (std::int32_t y = 0; y < h; ++y) {
      const std::uint8_t v = bitmap.at(x, y) ? 1 : 0;
      if (v != current) {
        counts.push_back(run);
        run = 0;
        current = v;
      }
      ++run;
    }
  }
  counts.push_back(run);
  return RleMask::from_counts(h, w, std::move(counts));
}

Bitmap rle_decode(const RleMask& mask) {
  Bitmap out(mask.height(), mask.width());
  const std::int64_t h = mask.height();
  if (h == 0) return out;
  std::int64_t idx = 0;
  bool value = false;
  for (const std::uint32_t c : mask.counts()) {
    if (value) {
      for (std::int64_t k = idx; k < idx + c; ++k) {
        out.set(static_cast<std::int32_t>(k / h), static_cast<std::int32_t>(k % h), true);
      }
    }
    idx += c;
    value = !value;
  }
  return out;
}

std::string rle_compress_string(const RleMask& mask) {
  const auto counts = mask.counts();
  std::string s;
  s.reserve(counts.size() * 2);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    std::int64_t x = counts[i];
    // The reference encoder deltas from index 3 onward, not 2.
    if (i > 2) x -= static_cast<std::int64_t>(counts[i - 2]);
    bool more = true;
    while (more) {
      auto c = static_cast<char>(x & 0x1f);
      x >>= 5;
      more = (c & 0x10) ? x != -1 : x != 0;
      if (more) c |= 0x20;
      s.push_back(static_cast<char>(c + 48));
    }
  }
  return s;
}

RleMask rle_decompress_string(std::string_view compressed, std::int32_t height,
                              std::int32_t width) {
  std::vector<std::uint32_t> counts;
  std::size_t p = 0;
  while (p < compressed.size()) {
    std::int64_t x = 0;
    int k = 0;
    bool more = true;
    while (more) {
      if (p >= compressed.size()) {
        throw FormatError("truncated RLE string at offset " + std::to_string(p));
      }
      const int c = static_cast<unsigned char>(compressed[p]) - 48;
      if (c < 0 || c > 63) {
        throw FormatError("invalid RLE character at offset " + std::to_string(p));
      }
      if (k >= 12) throw FormatError("RLE run overflows at offset " + std::to_string(p));
      x |= static_cast<std::int64_t>(c & 0x1f) << (5 * k);
      more = (c & 0x20) != 0;
      ++p;
      ++k;
      if (!more && (c & 0x10)) x |= static_cast<std::int64_t>(-1) << (5 * k);
    }
    if (counts.size() > 2) x += counts[counts.size() - 2];
    if (x < 0 || x > std::numeric_limits<std::uint32_t>::max()) {
      throw FormatError("RLE run out of range at offset " + std::to_string(p));
    }
    counts.push_back(static_cast<std::uint32_t>(x));
  }
  return RleMask::from_counts(height, width, std::move(counts));
}

BoxArea bbox_and_area(const RleMask& mask) {
  const std::int64_t h = mask.height();
  std::int64_t min_x = std::numeric_limits<std::int64_t>::max();
  std::int64_t min_y = min_x;
  std::int64_t max_x = -1;
  std::int64_t max_y = -1;
  std::uint64_t area = 0;
  std::int64_t idx = 0;
  const auto counts = mask.counts();
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const std::int64_t c = counts[i];
    if (i % 2 == 1 && c > 0) {
      const std::int64_t first = idx;
      const std::int64_t last = idx + c - 1;
      const std::int64_t x0 = first / h;
      const std::int64_t x1 = last / h;
      min_x = std::min(min_x, x0);
      max_x = std::max(max_x, x1);
      if (x0 == x1) {
        min_y = std::min(min_y, first % h);
        max_y = std::max(max_y, last % h);
      } else {
        // Run wraps a column boundary: it touches both the bottom and top rows.
        min_y = 0;
        max_y = h - 1;
      }
      area += static_cast<std::uint64_t>(c);
    }
    idx += c;
  }
  if (area == 0) return {};
  return {BBox{min_x, min_y, max_x - min_x + 1, max_y - min_y + 1}, area};
}

RleMask rle_merge(const RleMask& a, const RleMask& b, MaskOp op) {
  if (a.height() != b.height() || a.width() != b.width()) {
    throw FormatError("rle_merge: mask size mismatch");
  }
  const auto ca = a.counts();
  const auto cb = b.counts();
  std::uint64_t remaining =
      static_cast<std::uint64_t>(a.height()) * static_cast<std::uint64_t>(a.width());

  std::vector<std::uint32_t> out;
  out.reserve(std::max(ca.size(), cb.size()));
  std::size_t ia = 0;
  std::size_t ib = 0;
  std::uint64_t ra = ca.empty() ? 0 : ca[0];
  std::uint64_t rb = cb.empty() ? 0 : cb[0];
  bool va = false;
  bool vb = false;
  bool current = false;
  std::uint64_t run = 0;

  while (remaining > 0) {
    while (ra == 0) {
      ra = ca[++ia];
      va = !va;
    }
    while (rb == 0) {
      rb = cb[++ib];
      vb = !vb;
    }
    const std::uint64_t step = std::min(ra, rb);
    bool v = false;
    switch (op) {
      case MaskOp::Union: v = va || vb; break;
      case MaskOp::Intersect: v = va && vb; break;
      case MaskOp::Subtract: v = va && !vb; break;
    }
    if (v != current) {
      out.push_back(static_cast<std::uint32_t>(run));
      run = 0;
      current = v;
    }
    run += step;
    ra -= step;
    rb -= step;
    remaining -= step;
  }
  out.push_back(static_cast<std::uint32_t>(run));
  return RleMask::from_counts(a.height(), a.width(), std::move(out));
}

}  // namespace pastekit

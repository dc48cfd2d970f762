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

#include "pastekit/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "pastekit/error.hpp"

namespace pastekit {
namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct Tap {
  std::int32_t i0;
  std::int32_t i1;
  double frac;
};

// Source taps for each destination coordinate along one axis.
std::vector<Tap> bilinear_taps(std::int32_t src, std::int32_t dst) {
  std::vector<Tap> taps(static_cast<std::size_t>(dst));
  const double scale = static_cast<double>(src) / dst;
  for (std::int32_t d = 0; d < dst; ++d) {
    double s = (d + 0.5) * scale - 0.5;
    s = std::clamp(s, 0.0, static_cast<double>(src - 1));
    const auto i0 = static_cast<std::int32_t>(std::floor(s));
    const std::int32_t i1 = std::min(i0 + 1, src - 1);
    taps[static_cast<std::size_t>(d)] = {i0, i1, s - i0};
  }
  return taps;
}

}  // namespace

Image::Image(std::int32_t width, std::int32_t height, Rgb fill)
    : width_(width), height_(height),
      data_(3 * static_cast<std::size_t>(std::max(width, 0)) * std::max(height, 0)) {
  for (std::size_t i = 0; i < data_.size(); i += 3) {
    data_[i] = fill.r;
    data_[i + 1] = fill.g;
    data_[i + 2] = fill.b;
  }
}

Image decode_image(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) throw IoError("empty image data");
  const cv::Mat raw(1, static_cast<int>(bytes.size()), CV_8UC1,
                    const_cast<std::uint8_t*>(bytes.data()));
  const cv::Mat bgr = cv::imdecode(raw, cv::IMREAD_COLOR);
  if (bgr.empty()) throw IoError("undecodable image data");
  Image out(bgr.cols, bgr.rows);
  for (int y = 0; y < bgr.rows; ++y) {
    const auto* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < bgr.cols; ++x) out.set(x, y, {row[x][2], row[x][1], row[x][0]});
  }
  return out;
}

Image load_image(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  try {
    return decode_image(bytes);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> encode_png(const Image& image) {
  cv::Mat bgr(image.height(), image.width(), CV_8UC3);
  for (int y = 0; y < image.height(); ++y) {
    auto* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < image.width(); ++x) {
      const Rgb c = image.at(x, y);
      row[x] = cv::Vec3b(c.b, c.g, c.r);
    }
  }
  std::vector<std::uint8_t> out;
  const std::vector<int> params{cv::IMWRITE_PNG_COMPRESSION, 3};
  if (!cv::imencode(".png", bgr, out, params)) throw IoError("PNG encoding failed");
  return out;
}

void save_png(const std::filesystem::path& path, const Image& image) {
  const auto bytes = encode_png(image);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to " + path.string());
}

Image resize_bilinear(const Image& src, std::int32_t width, std::int32_t height) {
  Image out(width, height);
  if (src.width() == 0 || src.height() == 0) return out;
  const auto tx = bilinear_taps(src.width(), width);
  const auto ty = bilinear_taps(src.height(), height);
  const auto sd = src.data();
  auto od = out.data();
  const std::size_t sstride = 3 * static_cast<std::size_t>(src.width());
  for (std::int32_t y = 0; y < height; ++y) {
    const Tap& vy = ty[static_cast<std::size_t>(y)];
    const std::uint8_t* r0 = sd.data() + vy.i0 * sstride;
    const std::uint8_t* r1 = sd.data() + vy.i1 * sstride;
    std::uint8_t* dst = od.data() + 3 * static_cast<std::size_t>(y) * width;
    for (std::int32_t x = 0; x < width; ++x) {
      const Tap& vx = tx[static_cast<std::size_t>(x)];
      for (int c = 0; c < 3; ++c) {
        const double top = r0[3 * vx.i0 + c] * (1.0 - vx.frac) + r0[3 * vx.i1 + c] * vx.frac;
        const double bot = r1[3 * vx.i0 + c] * (1.0 - vx.frac) + r1[3 * vx.i1 + c] * vx.frac;
        const double v = top * (1.0 - vy.frac) + bot * vy.frac;
        dst[3 * x + c] = static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
      }
    }
  }
  return out;
}

Bitmap resize_mask(const Bitmap& src, std::int32_t width, std::int32_t height) {
  Bitmap out(height, width);
  if (src.width() == 0 || src.height() == 0) return out;
  const auto tx = bilinear_taps(src.width(), width);
  const auto ty = bilinear_taps(src.height(), height);
  for (std::int32_t y = 0; y < height; ++y) {
    const Tap& vy = ty[static_cast<std::size_t>(y)];
    for (std::int32_t x = 0; x < width; ++x) {
      const Tap& vx = tx[static_cast<std::size_t>(x)];
      const double top = src.at(vx.i0, vy.i0) * (1.0 - vx.frac) + src.at(vx.i1, vy.i0) * vx.frac;
      const double bot = src.at(vx.i0, vy.i1) * (1.0 - vx.frac) + src.at(vx.i1, vy.i1) * vx.frac;
      out.set(x, y, top * (1.0 - vy.frac) + bot * vy.frac >= 0.5);
    }
  }
  return out;
}

std::filesystem::path FileImageSource::resolve(const std::string& path) const {
  const std::filesystem::path p(path);
  return p.is_absolute() || root_.empty() ? p : root_ / p;
}

bool FileImageSource::exists(const std::string& path) const {
  std::error_code ec;
  return std::filesystem::is_regular_file(resolve(path), ec);
}

Image FileImageSource::load(const std::string& path) const { return load_image(resolve(path)); }

}  // namespace pastekit

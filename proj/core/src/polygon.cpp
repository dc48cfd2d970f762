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

#include "pastekit/polygon.hpp"

#include <algorithm>
#include <cmath>

namespace pastekit {

Bitmap rasterize_polygons(std::span<const Polygon> polygons, std::int32_t height,
                          std::int32_t width) {
  Bitmap out(height, width);
  std::vector<double> crossings;
  for (const Polygon& poly : polygons) {
    const std::size_t n = poly.size() / 2;
    if (n < 3) continue;
    for (std::int32_t y = 0; y < height; ++y) {
      const double yc = y + 0.5;
      crossings.clear();
      for (std::size_t i = 0; i < n; ++i) {
        const double x1 = poly[2 * i];
        const double y1 = poly[2 * i + 1];
        const double x2 = poly[2 * ((i + 1) % n)];
        const double y2 = poly[2 * ((i + 1) % n) + 1];
        // Half-open in y so shared vertices are counted once.
        if ((y1 <= yc && yc < y2) || (y2 <= yc && yc < y1)) {
          crossings.push_back(x1 + (yc - y1) * (x2 - x1) / (y2 - y1));
        }
      }
      std::sort(crossings.begin(), crossings.end());
      for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) {
        // Pixel x is inside when crossings[k] <= x + 0.5 < crossings[k + 1].
        const double lo = std::ceil(crossings[k] - 0.5);
        const double hi = std::ceil(crossings[k + 1] - 0.5);
        const auto x_begin = static_cast<std::int32_t>(std::clamp(lo, 0.0, double(width)));
        const auto x_end = static_cast<std::int32_t>(std::clamp(hi, 0.0, double(width)));
        for (std::int32_t x = x_begin; x < x_end; ++x) out.set(x, y, true);
      }
    }
  }
  return out;
}

}  // namespace pastekit

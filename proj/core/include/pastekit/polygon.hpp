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

#include <span>
#include <vector>

#include "pastekit/rle.hpp"

namespace pastekit {

/// Flat COCO polygon: x0, y0, x1, y1, ... in pixel coordinates.
using Polygon = std::vector<double>;

/// Rasterizes polygons with the even-odd rule, sampling at pixel centers
/// (x + 0.5, y + 0.5). Multiple polygons are unioned; polygons with fewer
/// than three vertices contribute nothing.
Bitmap rasterize_polygons(std::span<const Polygon> polygons, std::int32_t height,
                          std::int32_t width);

}  // namespace pastekit

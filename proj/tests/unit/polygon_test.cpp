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

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pastekit/polygon.hpp"

namespace pastekit {
namespace {

TEST(Polygon, FullImageRectangle) {
  const std::vector<Polygon> polys{{0, 0, 4, 0, 4, 4, 0, 4}};
  const Bitmap b = rasterize_polygons(polys, 4, 4);
  EXPECT_EQ(b.popcount(), 16u);
  EXPECT_EQ(testing::naive_bbox_area(b).bbox, (BBox{0, 0, 4, 4}));
}

TEST(Polygon, DegenerateContributesNothing) {
  const std::vector<Polygon> polys{{0, 0, 4, 4}, {}};
  EXPECT_EQ(rasterize_polygons(polys, 4, 4).popcount(), 0u);
}

TEST(Polygon, PentagramCenterIsOutsideUnderEvenOdd) {
  // Five-point star drawn by connecting every second vertex of a pentagon.
  Polygon star;
  const double cx = 20, cy = 20, r = 18;
  for (int k = 0; k < 5; ++k) {
    const double a = -std::numbers::pi / 2 + 2 * (2 * std::numbers::pi / 5) * k;
    star.push_back(cx + r * std::cos(a));
    star.push_back(cy + r * std::sin(a));
  }
  const std::vector<Polygon> polys{star};
  const Bitmap b = rasterize_polygons(polys, 40, 40);
  EXPECT_FALSE(b.at(19, 19));
  EXPECT_GT(b.popcount(), 0u);
}

TEST(Polygon, UnionOfTwoPolygons) {
  const std::vector<Polygon> polys{{0, 0, 2, 0, 2, 2, 0, 2}, {1, 1, 3, 1, 3, 3, 1, 3}};
  EXPECT_EQ(rasterize_polygons(polys, 4, 4).popcount(), 7u);
}

TEST(Polygon, MatchesRayCastingOracle) {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const int h = static_cast<int>(rng.uniform_int(4, 40));
    const int w = static_cast<int>(rng.uniform_int(4, 40));
    const int n = static_cast<int>(rng.uniform_int(3, 9));
    Polygon p;
    for (int k = 0; k < n; ++k) {
      // Quarter-pixel offsets keep vertices off pixel centers.
      p.push_back(std::floor(rng.uniform(-2, w + 2)) + 0.25);
      p.push_back(std::floor(rng.uniform(-2, h + 2)) + 0.25);
    }
    const std::vector<Polygon> polys{p};
    const Bitmap got = rasterize_polygons(polys, h, w);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        ASSERT_EQ(got.at(x, y) != 0, testing::point_in_polygon(p, x + 0.5, y + 0.5))
            << "poly " << i << " pixel " << x << "," << y;
  }
}

}  // namespace
}  // namespace pastekit

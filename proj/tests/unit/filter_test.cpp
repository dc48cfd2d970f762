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

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pastekit/error.hpp"
#include "pastekit/filter.hpp"

namespace pastekit {
namespace {

using testing::MemoryImageSource;
using testing::make_record;
using testing::prefix_mask;

Image shuffled(const Image& img, std::uint64_t seed) {
  std::vector<std::size_t> order(img.pixel_count());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  Image out(img.width(), img.height());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto src = order[i];
    const auto sx = static_cast<std::int32_t>(src % img.width());
    const auto sy = static_cast<std::int32_t>(src / img.width());
    out.set(static_cast<std::int32_t>(i % img.width()), static_cast<std::int32_t>(i / img.width()),
            img.at(sx, sy));
  }
  return out;
}

// `share` of the pixels are one flat color, the rest uniform RGB noise.
Image flat_plus_noise(std::int32_t w, std::int32_t h, double share, std::uint64_t seed) {
  Rng rng(seed);
  Image img(w, h);
  const auto flat = static_cast<std::size_t>(share * static_cast<double>(img.pixel_count()));
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    const Rgb c = i < flat ? Rgb{120, 130, 140}
                           : Rgb{static_cast<std::uint8_t>(rng.uniform_below(256)),
                                 static_cast<std::uint8_t>(rng.uniform_below(256)),
                                 static_cast<std::uint8_t>(rng.uniform_below(256))};
    img.set(static_cast<std::int32_t>(i % w), static_cast<std::int32_t>(i / w), c);
  }
  return img;
}

std::size_t pixels_near(const Image& img, Rgb c, int tol) {
  std::size_t n = 0;
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      const Rgb p = img.at(x, y);
      if (std::abs(p.r - c.r) <= tol && std::abs(p.g - c.g) <= tol && std::abs(p.b - c.b) <= tol) ++n;
    }
  return n;
}

TEST(Background, Uniform) {
  const FilterConfig cfg;
  EXPECT_TRUE(background_simplicity(Image(32, 32, Rgb{255, 255, 255}), cfg));
  EXPECT_DOUBLE_EQ(analyze_background(Image(8, 8, Rgb{3, 4, 5}), 5).fraction, 1.0);
}

TEST(Background, TwoColorCheckerboard) {
  Image img(40, 40);
  for (int y = 0; y < 40; ++y)
    for (int x = 0; x < 40; ++x)
      img.set(x, y, (x + y) % 2 ? Rgb{20, 20, 20} : Rgb{220, 220, 220});
  const auto a = analyze_background(img, 5);
  EXPECT_DOUBLE_EQ(a.fraction, 0.5);
  EXPECT_TRUE(background_simplicity(img, FilterConfig{}));
}

TEST(Background, ThirtyNinePercentRejected) {
  const Image img = flat_plus_noise(100, 100, 0.39, 17);
  // Brute-force count: the flat region plus whatever noise lands near it.
  const double share = static_cast<double>(pixels_near(img, Rgb{120, 130, 140}, 5)) / 10000.0;
  ASSERT_GE(share, 0.39);
  ASSERT_LT(share, 0.40);
  EXPECT_NEAR(analyze_background(img, 5).fraction, share, 1e-12);
  EXPECT_FALSE(background_simplicity(img, FilterConfig{}));
  EXPECT_TRUE(background_simplicity(flat_plus_noise(100, 100, 0.41, 17), FilterConfig{}));
}

TEST(Background, ShuffleInvariant) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Image img = flat_plus_noise(37, 23, 0.2 + 0.03 * static_cast<double>(s), s);
    const auto a = analyze_background(img, 5);
    const auto b = analyze_background(shuffled(img, s + 100), 5);
    EXPECT_EQ(a.fraction, b.fraction);
    EXPECT_EQ(a.dominant, b.dominant);
  }
}

PoolManifest pool_of(std::vector<std::pair<std::int64_t, double>> cat_scores) {
  PoolManifest p;
  int i = 0;
  for (auto [c, s] : cat_scores)
    p.records.push_back(make_record("r" + std::to_string(i++), c, s, prefix_mask(10, 10, 50)));
  return p;
}

TEST(Threshold, MinBranch) {
  EXPECT_DOUBLE_EQ(category_thresholds(pool_of({{1, 0.30}, {1, 0.1}}), FilterConfig{}).at(1), 0.21);
}

TEST(Threshold, MaxMinusDBranch) {
  EXPECT_DOUBLE_EQ(category_thresholds(pool_of({{1, 0.205}}), FilterConfig{}).at(1), 0.205 - 0.01);
}

TEST(Threshold, NegativeSubtractiveRejected) {
  FilterConfig cfg;
  cfg.subtractive = -0.1;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.area_min = 0.9;
  cfg.area_max = 0.1;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

MemoryImageSource images_for(const PoolManifest& p, Rgb fill = {255, 255, 255}) {
  MemoryImageSource src;
  for (const auto& r : p.records) src.put(r.image_path, Image(r.width, r.height, fill));
  return src;
}

std::vector<std::string> ids(const PoolManifest& p) {
  std::vector<std::string> out;
  for (const auto& r : p.records) out.push_back(r.id);
  return out;
}

TEST(Filter, SingleRecordCategorySurvives) {
  const auto p = pool_of({{1, 0.05}});
  const auto src = images_for(p);
  EXPECT_EQ(filter_pool(p, FilterConfig{}, src).kept.records.size(), 1u);
}

TEST(Filter, ScoreExactlyAtThresholdKept) {
  const auto p = pool_of({{1, 0.30}, {1, 0.21}, {1, 0.2099}});
  const auto src = images_for(p);
  EXPECT_EQ(ids(filter_pool(p, FilterConfig{}, src).kept), (std::vector<std::string>{"r0", "r1"}));
}

TEST(Filter, RandomPoolsMatchBruteForce) {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::pair<std::int64_t, double>> cs;
    const int n = static_cast<int>(rng.uniform_int(1, 30));
    for (int i = 0; i < n; ++i) cs.emplace_back(rng.uniform_int(1, 4), rng.uniform(0.1, 0.35));
    const auto p = pool_of(cs);
    const auto src = images_for(p);
    FilterConfig cfg;
    cfg.clip_threshold = rng.uniform(0.1, 0.35);
    cfg.subtractive = rng.uniform(0.0, 0.05);
    const auto result = filter_pool(p, cfg, src);
    ASSERT_EQ(ids(result.kept), testing::brute_force_threshold(p, cfg.clip_threshold, cfg.subtractive));
  }
}

TEST(Filter, AreaBoundsInclusive) {
  // 100x100 instances: fractions 0.04, 0.0499, 0.05, 0.95, 0.9501, 0.96.
  PoolManifest p;
  const std::uint32_t areas[] = {400, 499, 500, 9500, 9501, 9600};
  for (const auto a : areas)
    p.records.push_back(make_record("a" + std::to_string(a), 1, 0.3, prefix_mask(100, 100, a)));
  const auto src = images_for(p);
  const auto result = filter_pool(p, FilterConfig{}, src);
  EXPECT_EQ(ids(result.kept), (std::vector<std::string>{"a500", "a9500"}));
  EXPECT_EQ(result.report.rejected(FilterRule::Area), 4u);
}

TEST(Filter, MissingImageIsIoRejection) {
  const auto p = pool_of({{1, 0.3}, {1, 0.3}});
  MemoryImageSource src;
  src.put("r0.png", Image(10, 10));
  const auto result = filter_pool(p, FilterConfig{}, src);
  EXPECT_EQ(ids(result.kept), std::vector<std::string>{"r0"});
  ASSERT_EQ(result.report.rejections.size(), 1u);
  EXPECT_EQ(result.report.rejections[0].rule, FilterRule::Io);
}

TEST(Filter, BackgroundOnlyForRetrieved) {
  PoolManifest p;
  p.records.push_back(make_record("g", 1, 0.3, prefix_mask(10, 10, 50), InstanceSource::Generated));
  p.records.push_back(make_record("r", 1, 0.3, prefix_mask(10, 10, 50), InstanceSource::Retrieved));
  MemoryImageSource src;
  src.put("g.png", flat_plus_noise(10, 10, 0.1, 1));
  src.put("r.png", flat_plus_noise(10, 10, 0.1, 2));
  const auto result = filter_pool(p, FilterConfig{}, src);
  EXPECT_EQ(ids(result.kept), std::vector<std::string>{"g"});
  EXPECT_EQ(result.report.rejected(FilterRule::Background), 1u);
}

TEST(Filter, TalliesSumToInput) {
  Rng rng(4);
  PoolManifest p;
  for (int i = 0; i < 60; ++i) {
    const auto area = static_cast<std::uint32_t>(rng.uniform_int(0, 100));
    p.records.push_back(make_record("x" + std::to_string(i), rng.uniform_int(1, 3), rng.uniform(0.1, 0.3),
                                    prefix_mask(10, 10, area),
                                    rng.uniform01() < 0.5 ? InstanceSource::Generated
                                                          : InstanceSource::Retrieved));
  }
  MemoryImageSource src;
  for (std::size_t i = 0; i < p.records.size(); ++i)
    if (i % 7 != 0) src.put(p.records[i].image_path, flat_plus_noise(10, 10, i % 2 ? 0.9 : 0.1, i));
  const auto result = filter_pool(p, FilterConfig{}, src);
  const auto& r = result.report;
  std::size_t rejected = 0;
  for (std::size_t k = 0; k < kFilterRuleCount; ++k) rejected += r.rejected(static_cast<FilterRule>(k));
  EXPECT_EQ(r.input_count, 60u);
  EXPECT_EQ(r.kept_count + rejected, 60u);
  EXPECT_EQ(r.rejections.size(), rejected);
  std::size_t per_cat = 0;
  for (const auto& [c, t] : r.per_category) {
    std::size_t rej = 0;
    for (const auto v : t.rejected) rej += v;
    EXPECT_EQ(t.kept + rej, t.input);
    per_cat += t.input;
  }
  EXPECT_EQ(per_cat, 60u);
  for (const auto& [c, t] : r.thresholds) EXPECT_LE(t, 0.21);

  const auto parallel = filter_pool(p, FilterConfig{}, src, 4);
  EXPECT_EQ(parallel.kept, result.kept);
  EXPECT_EQ(parallel.report.to_json(), r.to_json());
}

}  // namespace
}  // namespace pastekit

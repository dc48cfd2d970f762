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
#include <map>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pastekit/error.hpp"
#include "pastekit/filter.hpp"
#include "pastekit/scale_stats.hpp"
#include "pastekit/synth.hpp"

namespace pastekit {
namespace {

TEST(Synth, SingleRecord) {
  SynthSpec spec;
  spec.category_count = 1;
  spec.per_category = 1;
  const auto p = generate_pool(spec);
  ASSERT_EQ(p.manifest.records.size(), 1u);
  const auto sel = select_mask_by_clip(p.manifest.records[0]);
  EXPECT_EQ(*sel.chosen, p.truth[0]);
  EXPECT_EQ(sel.candidates[*sel.chosen].mask, p.truth_masks[0]);
}

TEST(Synth, SelectionRecoversTruth) {
  for (const auto shape : {ShapeFamily::Ellipse, ShapeFamily::Rectangle, ShapeFamily::Polygon}) {
    SynthSpec spec;
    spec.shape = shape;
    spec.category_count = 4;
    spec.per_category = 25;
    spec.seed = 3;
    const auto p = generate_pool(spec);
    ASSERT_EQ(p.manifest.records.size(), 100u);
    int recovered = 0;
    for (std::size_t i = 0; i < p.manifest.records.size(); ++i) {
      const auto sel = select_mask_by_clip(p.manifest.records[i]);
      recovered += sel.candidates[*sel.chosen].mask == p.truth_masks[i];
      EXPECT_EQ(sel.candidates.size(), 4u);
    }
    EXPECT_EQ(recovered, 100) << to_string(shape);
  }
}

TEST(Synth, Deterministic) {
  SynthSpec spec;
  spec.seed = 9;
  EXPECT_EQ(generate_pool(spec).manifest, generate_pool(spec).manifest);
  EXPECT_EQ(generate_annotated_dataset(spec), generate_annotated_dataset(spec));
  spec.seed = 10;
  SynthSpec other;
  other.seed = 9;
  EXPECT_NE(generate_pool(spec).manifest, generate_pool(other).manifest);
}

TEST(Synth, LowScoresOnlyCategoryMaxSurvives) {
  SynthSpec spec;
  spec.category_count = 3;
  spec.per_category = 12;
  spec.score_min = 0.05;
  spec.score_max = 0.15;
  spec.retrieved_fraction = 0.0;
  const auto p = generate_pool(spec);
  testing::MemoryImageSource images;
  for (const auto& r : p.manifest.records) images.put(r.image_path, Image(r.width, r.height));
  FilterConfig cfg;
  cfg.subtractive = 0.0;
  const auto result = filter_pool(p.manifest, cfg, images);
  std::map<std::int64_t, double> best;
  for (const auto& r : select_all(p.manifest).records)
    best[r.category_id] = std::max(best[r.category_id], r.selected_score());
  ASSERT_EQ(result.kept.records.size(), 3u);
  for (const auto& r : result.kept.records) EXPECT_EQ(*r.clip_score, best[r.category_id]);
  EXPECT_EQ(result.report.rejected(FilterRule::ClipThreshold), 33u);
}

TEST(Synth, FixedScaleGivesExactMoments) {
  SynthSpec spec;
  spec.shape = ShapeFamily::Rectangle;
  spec.scales = {0.25};
  const auto stats = compute_scale_stats(generate_annotated_dataset(spec));
  for (const auto& [c, m] : stats.categories) {
    EXPECT_EQ(m.mu, 0.25) << c;
    EXPECT_EQ(m.sigma, 0.0) << c;
  }
}

TEST(Synth, TwoScalesHandArithmetic) {
  SynthSpec spec;
  spec.shape = ShapeFamily::Rectangle;
  spec.scales = {0.25, 0.5};
  const auto stats = compute_scale_stats(generate_annotated_dataset(spec));
  ASSERT_EQ(stats.categories.size(), 3u);
  for (const auto& [c, m] : stats.categories) {
    EXPECT_EQ(m.n, 10u);
    EXPECT_DOUBLE_EQ(m.mu, 0.375);
    EXPECT_DOUBLE_EQ(m.sigma, 0.125);
  }
}

TEST(Synth, RandomSpecStatsMatchOracle) {
  SynthSpec spec;
  spec.seed = 44;
  spec.category_count = 5;
  spec.background_count = 30;
  const Dataset d = generate_annotated_dataset(spec);
  std::map<std::int64_t, std::vector<double>> v;
  for (const auto& a : d.annotations) v[a.category_id].push_back(std::sqrt(static_cast<double>(rle_decode(a.mask).popcount()) / (128.0 * 128.0)));
  const auto stats = compute_scale_stats(d);
  for (const auto& [c, xs] : v) {
    const auto o = testing::two_pass(xs);
    EXPECT_NEAR(stats.categories.at(c).mu, o.mean, 1e-12);
    EXPECT_NEAR(stats.categories.at(c).sigma, o.stddev, 1e-12);
  }
}

TEST(Synth, EllipseIsPixelExact) {
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const double rx = rng.uniform(3, 30), ry = rng.uniform(3, 30);
    const double cx = rng.uniform(rx, 64 - rx), cy = rng.uniform(ry, 64 - ry);
    const Bitmap b = rasterize_ellipse(64, 64, cx, cy, rx, ry);
    std::uint64_t brute = 0;
    for (int y = 0; y < 64; ++y)
      for (int x = 0; x < 64; ++x) {
        const double u = (x + 0.5 - cx) / rx, v = (y + 0.5 - cy) / ry;
        brute += u * u + v * v <= 1.0;
      }
    EXPECT_EQ(b.popcount(), brute);
    // Boundary pixels bound the discretization error by roughly the perimeter.
    const double analytic = std::numbers::pi * rx * ry;
    const double perimeter = 2 * std::numbers::pi * std::sqrt((rx * rx + ry * ry) / 2);
    EXPECT_NEAR(static_cast<double>(brute), analytic, perimeter);
  }
  EXPECT_EQ(rasterize_rect(10, 10, 8, 8, 5, 5).popcount(), 4u);
}

TEST(Synth, AnnotationsAreConsistent) {
  SynthSpec spec;
  spec.shape = ShapeFamily::Polygon;
  const Dataset d = generate_annotated_dataset(spec);
  EXPECT_EQ(d.categories[0].band, FrequencyBand::Rare);
  EXPECT_EQ(d.categories[2].band, FrequencyBand::Frequent);
  for (const auto& a : d.annotations) {
    EXPECT_EQ(a.bbox, testing::naive_bbox_area(rle_decode(a.mask)).bbox);
    EXPECT_GT(a.area, 0u);
  }
}

TEST(Synth, SpecParsing) {
  const auto spec = parse_synth_spec(R"({"shape":"rectangle","category_count":2,"palette":[[1,2,3]],"scales":[0.3]})");
  EXPECT_EQ(spec.shape, ShapeFamily::Rectangle);
  EXPECT_EQ(spec.palette.at(0), (Rgb{1, 2, 3}));
  EXPECT_THROW(parse_synth_spec(R"({"bogus":1})"), ConfigError);
  EXPECT_THROW(parse_synth_spec(R"({"per_category":0})"), ConfigError);
}

}  // namespace
}  // namespace pastekit

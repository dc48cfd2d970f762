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

#include <map>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pastekit/retention.hpp"

namespace pastekit {
namespace {

using testing::make_record;

struct Fixture {
  PoolManifest pool;
  std::unordered_map<std::int64_t, FrequencyBand> bands{
      {1, FrequencyBand::Rare}, {2, FrequencyBand::Common}, {3, FrequencyBand::Frequent},
      {4, FrequencyBand::Frequent}};
};

Fixture random_fixture(std::uint64_t seed, int n) {
  Fixture f;
  Rng rng(seed);
  for (int i = 0; i < n; ++i)
    f.pool.records.push_back(make_record("x" + std::to_string(i), rng.uniform_int(1, 4),
                                         rng.uniform(0.15, 0.35), RleMask::full(2, 2)));
  return f;
}

TEST(Retention, BelowMinimumKeepsAll) {
  const auto f = random_fixture(1, 50);
  const double ts[] = {0.0, 0.1};
  for (const auto& row : retention_curve(f.pool, ts, 0.01, f.bands)) {
    EXPECT_EQ(row.retention, 1.0);
    EXPECT_EQ(row.category_min, 1.0);
  }
}

TEST(Retention, UniformPoolAboveMaximum) {
  Fixture f;
  for (int i = 0; i < 6; ++i)
    f.pool.records.push_back(make_record("u" + std::to_string(i), 1 + i % 3, 0.2, RleMask::full(2, 2)));
  const double ts[] = {0.3};
  for (const auto& row : retention_curve(f.pool, ts, 0.0, f.bands, RetentionRule::Global))
    EXPECT_EQ(row.retention, 0.0);
  // Under the per-category rule the threshold collapses to max_c - d = 0.2.
  for (const auto& row : retention_curve(f.pool, ts, 0.0, f.bands)) EXPECT_EQ(row.retention, 1.0);
}

TEST(Retention, MatchesCountingOracle) {
  const auto f = random_fixture(8, 400);
  std::vector<double> ts;
  for (int k = 0; k <= 40; ++k) ts.push_back(0.01 * k);
  const double d = 0.01;
  const auto rows = retention_curve(f.pool, ts, d, f.bands);
  ASSERT_EQ(rows.size(), 3 * ts.size());

  std::map<std::int64_t, double> best;
  for (const auto& r : f.pool.records) best[r.category_id] = std::max(best[r.category_id], r.selected_score());

  for (const auto& row : rows) {
    std::size_t records = 0, kept = 0;
    std::map<std::int64_t, std::pair<int, int>> per_cat;
    for (const auto& r : f.pool.records) {
      if (f.bands.at(r.category_id) != row.band) continue;
      ++records;
      const bool pass = r.selected_score() >= std::min(row.threshold, best[r.category_id] - d);
      kept += pass;
      per_cat[r.category_id].first += 1;
      per_cat[r.category_id].second += pass;
    }
    ASSERT_EQ(row.records, records);
    ASSERT_EQ(row.retained, kept);
    ASSERT_DOUBLE_EQ(row.retention, static_cast<double>(kept) / static_cast<double>(records));
    ASSERT_EQ(row.categories, per_cat.size());
    double lo = 1.0, hi = 0.0;
    for (const auto& [c, nk] : per_cat) {
      const double r = static_cast<double>(nk.second) / nk.first;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    ASSERT_DOUBLE_EQ(row.category_min, lo);
    ASSERT_DOUBLE_EQ(row.category_max, hi);
  }
}

TEST(Retention, CsvShape) {
  const auto f = random_fixture(2, 20);
  const double ts[] = {0.2};
  const auto rows = retention_curve(f.pool, ts, 0.01, f.bands);
  const std::string csv = retention_csv(rows);
  EXPECT_EQ(csv.rfind("band,threshold,records,retained,retention,category_min,category_max,categories\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), static_cast<long>(rows.size() + 1));
  EXPECT_NE(csv.find("\nrare,0.2,"), std::string::npos);
}

TEST(Retention, FormatReal) {
  EXPECT_EQ(format_real(0.21), "0.21");
  EXPECT_EQ(format_real(1.0), "1");
  EXPECT_EQ(format_real(0.1 + 0.2), "0.30000000000000004");
}

}  // namespace
}  // namespace pastekit

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

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pastekit/image.hpp"
#include "pastekit/pool.hpp"

namespace pastekit {

struct FilterConfig {
  double clip_threshold = 0.21;       // t
  double subtractive = 0.01;          // d
  double area_min = 0.05;             // inclusive, fraction of the image
  double area_max = 0.95;             // inclusive
  double background_dominance = 0.40;
  int color_tolerance = 5;            // per-channel, 8-bit units
  std::set<InstanceSource> require_background_check_for{InstanceSource::Retrieved};

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

struct BackgroundAnalysis {
  std::array<double, 3> dominant{};  // mean RGB of the modal histogram bin
  double fraction = 0.0;             // pixels within tolerance of `dominant`
};

/// Builds a histogram with per-channel bin width color_tolerance + 1, takes
/// the fullest bin (ties: lowest bin index) and reports the share of pixels
/// whose Chebyshev distance to that bin's mean color is <= color_tolerance.
BackgroundAnalysis analyze_background(const Image& image, int color_tolerance);

/// True iff the dominant-color share reaches cfg.background_dominance.
bool background_simplicity(const Image& image, const FilterConfig& cfg);

/// thres_c = min(t, max_c - d) for every category with at least one record,
/// where max_c is the highest selected score in the category.
std::map<std::int64_t, double> category_thresholds(const PoolManifest& pool,
                                                   const FilterConfig& cfg);

/// Rules in evaluation order; a rejected record is tagged with the first
/// rule it fails.
enum class FilterRule : std::uint8_t { Area, ClipThreshold, Io, Background };
inline constexpr std::size_t kFilterRuleCount = 4;

std::string_view to_string(FilterRule rule) noexcept;

struct Rejection {
  std::string record_id;
  std::int64_t category_id = 0;
  FilterRule rule = FilterRule::Area;
  std::string reason;
};

struct CategoryTally {
  std::size_t input = 0;
  std::size_t kept = 0;
  std::array<std::size_t, kFilterRuleCount> rejected{};
};

struct FilterReport {
  std::size_t input_count = 0;
  std::size_t kept_count = 0;
  std::map<std::int64_t, double> thresholds;
  std::map<std::int64_t, CategoryTally> per_category;
  std::vector<Rejection> rejections;  // in manifest order

  std::size_t rejected(FilterRule rule) const noexcept;
  /// Stable JSON summary: totals, per-rule counts, per-category tallies and
  /// thresholds, then the rejection list.
  std::string to_json() const;
};

struct FilterResult {
  PoolManifest kept;  // records with selection applied, in manifest order
  FilterReport report;
};

/// Applies mask selection (where not already done), then the area, clip
/// threshold, image availability and background rules. Thresholds are
/// computed over the whole input pool. Missing or unreadable images reject
/// the record with the Io rule instead of failing the run. The result is
/// independent of `jobs`.
FilterResult filter_pool(const PoolManifest& pool, const FilterConfig& cfg,
                         const ImageSource& images, unsigned jobs = 1);

}  // namespace pastekit

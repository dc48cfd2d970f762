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
#include <unordered_map>
#include <vector>

#include "pastekit/dataset.hpp"
#include "pastekit/pool.hpp"

namespace pastekit {

enum class RetentionRule {
  /// score >= min(t, max_c - d): the per-category rule used by filter_pool.
  CategorySpecific,
  /// score >= t: the raw global threshold.
  Global,
};

/// One point of a retention curve for a frequency band.
struct RetentionRow {
  FrequencyBand band = FrequencyBand::Unknown;
  double threshold = 0.0;
  std::size_t records = 0;
  std::size_t retained = 0;
  double retention = 0.0;  // retained / records
  /// Envelope over the band's categories: lowest and highest per-category
  /// retention at this threshold.
  double category_min = 0.0;
  double category_max = 0.0;
  std::size_t categories = 0;
};

/// Retention of scored records per band (rare, common, frequent) and per
/// threshold, in that nesting order. Records whose category has no known
/// band are ignored; bands without records produce no rows.
std::vector<RetentionRow> retention_curve(
    const PoolManifest& pool, std::span<const double> thresholds, double subtractive,
    const std::unordered_map<std::int64_t, FrequencyBand>& bands,
    RetentionRule rule = RetentionRule::CategorySpecific);

/// CSV with header
/// `band,threshold,records,retained,retention,category_min,category_max,categories`.
/// Reals use the shortest round-trip representation.
std::string retention_csv(std::span<const RetentionRow> rows);

/// Shortest decimal that round-trips to the same double.
std::string format_real(double value);

}  // namespace pastekit

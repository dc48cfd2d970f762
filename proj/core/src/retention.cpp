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

#include "pastekit/retention.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <map>

namespace pastekit {

std::string format_real(double value) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

std::vector<RetentionRow> retention_curve(
    const PoolManifest& pool, std::span<const double> thresholds, double subtractive,
    const std::unordered_map<std::int64_t, FrequencyBand>& bands, RetentionRule rule) {
  // Scores grouped by band, then by category (ordered for stable output).
  std::array<std::map<std::int64_t, std::vector<double>>, 3> grouped;
  for (const auto& r : pool.records) {
    const auto it = bands.find(r.category_id);
    if (it == bands.end() || it->second == FrequencyBand::Unknown) continue;
    grouped[static_cast<std::size_t>(it->second)][r.category_id].push_back(r.selected_score());
  }

  std::vector<RetentionRow> rows;
  for (std::size_t b = 0; b < grouped.size(); ++b) {
    const auto& cats = grouped[b];
    if (cats.empty()) continue;
    for (const double t : thresholds) {
      RetentionRow row;
      row.band = static_cast<FrequencyBand>(b);
      row.threshold = t;
      row.categories = cats.size();
      row.category_min = 1.0;
      row.category_max = 0.0;
      for (const auto& [cat, scores] : cats) {
        const double best = *std::max_element(scores.begin(), scores.end());
        const double thres =
            rule == RetentionRule::Global ? t : std::min(t, best - subtractive);
        const auto kept = static_cast<std::size_t>(
            std::count_if(scores.begin(), scores.end(), [&](double s) { return s >= thres; }));
        row.records += scores.size();
        row.retained += kept;
        const double frac = static_cast<double>(kept) / static_cast<double>(scores.size());
        row.category_min = std::min(row.category_min, frac);
        row.category_max = std::max(row.category_max, frac);
      }
      row.retention = static_cast<double>(row.retained) / static_cast<double>(row.records);
      rows.push_back(row);
    }
  }
  return rows;
}

std::string retention_csv(std::span<const RetentionRow> rows) {
  std::string out = "band,threshold,records,retained,retention,category_min,category_max,categories\n";
  for (const auto& r : rows) {
    out += to_string(r.band);
    out += ',' + format_real(r.threshold);
    out += ',' + std::to_string(r.records);
    out += ',' + std::to_string(r.retained);
    out += ',' + format_real(r.retention);
    out += ',' + format_real(r.category_min);
    out += ',' + format_real(r.category_max);
    out += ',' + std::to_string(r.categories);
    out += '\n';
  }
  return out;
}

}  // namespace pastekit

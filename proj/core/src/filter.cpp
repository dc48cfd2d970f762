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

#include "pastekit/filter.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "json_util.hpp"
#include "pastekit/parallel.hpp"

namespace pastekit {

void FilterConfig::validate() const {
  if (!std::isfinite(clip_threshold)) throw ConfigError("filter.clip_threshold", "must be finite");
  if (!std::isfinite(subtractive) || subtractive < 0.0) {
    throw ConfigError("filter.subtractive", "must be a finite value >= 0");
  }
  if (!(area_min >= 0.0)) throw ConfigError("filter.area_min", "must be >= 0");
  if (!(area_max <= 1.0)) throw ConfigError("filter.area_max", "must be <= 1");
  if (!(area_min < area_max)) throw ConfigError("filter.area_min", "must be < area_max");
  if (!(background_dominance >= 0.0 && background_dominance <= 1.0)) {
    throw ConfigError("filter.background_dominance", "must lie in [0, 1]");
  }
  if (color_tolerance < 0 || color_tolerance > 255) {
    throw ConfigError("filter.color_tolerance", "must lie in [0, 255]");
  }
}

BackgroundAnalysis analyze_background(const Image& image, int color_tolerance) {
  BackgroundAnalysis out;
  const std::size_t n = image.pixel_count();
  if (n == 0) return out;
  const int step = color_tolerance + 1;
  const std::uint32_t bins = (256 + step - 1) / step;
  const auto data = image.data();

  auto key_of = [&](std::size_t i) {
    return (data[3 * i] / step * bins + data[3 * i + 1] / step) * bins + data[3 * i + 2] / step;
  };
  std::vector<std::uint32_t> keys(n);
  for (std::size_t i = 0; i < n; ++i) keys[i] = key_of(i);
  std::sort(keys.begin(), keys.end());

  std::uint32_t mode = keys[0];
  std::size_t best = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && keys[j] == keys[i]) ++j;
    if (j - i > best) {
      best = j - i;
      mode = keys[i];
    }
    i = j;
  }

  std::array<double, 3> sum{};
  for (std::size_t i = 0; i < n; ++i) {
    if (key_of(i) != mode) continue;
    for (int c = 0; c < 3; ++c) sum[c] += data[3 * i + c];
  }
  for (int c = 0; c < 3; ++c) out.dominant[c] = sum[c] / static_cast<double>(best);

  std::size_t close = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double dist = 0.0;
    for (int c = 0; c < 3; ++c) dist = std::max(dist, std::abs(data[3 * i + c] - out.dominant[c]));
    if (dist <= color_tolerance) ++close;
  }
  out.fraction = static_cast<double>(close) / static_cast<double>(n);
  return out;
}

bool background_simplicity(const Image& image, const FilterConfig& cfg) {
  return analyze_background(image, cfg.color_tolerance).fraction >= cfg.background_dominance;
}

std::map<std::int64_t, double> category_thresholds(const PoolManifest& pool,
                                                   const FilterConfig& cfg) {
  std::map<std::int64_t, double> max_score;
  for (const auto& r : pool.records) {
    const double s = r.selected_score();
    auto [it, fresh] = max_score.emplace(r.category_id, s);
    if (!fresh) it->second = std::max(it->second, s);
  }
  std::map<std::int64_t, double> out;
  for (const auto& [cat, m] : max_score) {
    out.emplace(cat, std::min(cfg.clip_threshold, m - cfg.subtractive));
  }
  return out;
}

std::string_view to_string(FilterRule rule) noexcept {
  switch (rule) {
    case FilterRule::Area: return "area";
    case FilterRule::ClipThreshold: return "clip_threshold";
    case FilterRule::Io: return "io";
    case FilterRule::Background: return "background";
  }
  return "unknown";
}

std::size_t FilterReport::rejected(FilterRule rule) const noexcept {
  std::size_t total = 0;
  for (const auto& [cat, tally] : per_category) total += tally.rejected[static_cast<std::size_t>(rule)];
  return total;
}

std::string FilterReport::to_json() const {
  using detail::ordered_json;
  ordered_json root = ordered_json::object();
  root["input"] = input_count;
  root["kept"] = kept_count;
  ordered_json by_rule = ordered_json::object();
  for (std::size_t k = 0; k < kFilterRuleCount; ++k) {
    const auto rule = static_cast<FilterRule>(k);
    by_rule[std::string(to_string(rule))] = rejected(rule);
  }
  root["rejected"] = std::move(by_rule);
  ordered_json cats = ordered_json::array();
  for (const auto& [cat, tally] : per_category) {
    ordered_json c = ordered_json::object();
    c["category_id"] = cat;
    if (const auto t = thresholds.find(cat); t != thresholds.end()) c["threshold"] = t->second;
    c["input"] = tally.input;
    c["kept"] = tally.kept;
    ordered_json rej = ordered_json::object();
    for (std::size_t k = 0; k < kFilterRuleCount; ++k) {
      rej[std::string(to_string(static_cast<FilterRule>(k)))] = tally.rejected[k];
    }
    c["rejected"] = std::move(rej);
    cats.push_back(std::move(c));
  }
  root["categories"] = std::move(cats);
  ordered_json list = ordered_json::array();
  for (const auto& r : rejections) {
    ordered_json j = ordered_json::object();
    j["id"] = r.record_id;
    j["category_id"] = r.category_id;
    j["rule"] = std::string(to_string(r.rule));
    j["reason"] = r.reason;
    list.push_back(std::move(j));
  }
  root["rejections"] = std::move(list);
  return root.dump(2) + "\n";
}

namespace {

struct Verdict {
  std::optional<FilterRule> rule;
  std::string reason;
};

Verdict judge(const InstanceRecord& r, double threshold, const FilterConfig& cfg,
              const ImageSource& images) {
  const double pixels = static_cast<double>(r.width) * static_cast<double>(r.height);
  const double fraction = static_cast<double>(r.selected().mask.area()) / pixels;
  if (fraction < cfg.area_min || fraction > cfg.area_max) {
    return {FilterRule::Area, "mask area fraction " + std::to_string(fraction)};
  }
  if (!(*r.clip_score >= threshold)) {
    return {FilterRule::ClipThreshold, "clip score " + std::to_string(*r.clip_score) +
                                           " below threshold " + std::to_string(threshold)};
  }
  if (!cfg.require_background_check_for.contains(r.source)) {
    if (!images.exists(r.image_path)) return {FilterRule::Io, "missing image " + r.image_path};
    return {};
  }
  Image img;
  try {
    img = images.load(r.image_path);
  } catch (const Error& e) {
    return {FilterRule::Io, e.what()};
  }
  if (img.width() != r.width || img.height() != r.height) {
    return {FilterRule::Io, "image is " + std::to_string(img.width()) + "x" +
                                std::to_string(img.height()) + ", record declares " +
                                std::to_string(r.width) + "x" + std::to_string(r.height)};
  }
  const BackgroundAnalysis bg = analyze_background(img, cfg.color_tolerance);
  if (bg.fraction < cfg.background_dominance) {
    return {FilterRule::Background, "dominant color covers " + std::to_string(bg.fraction)};
  }
  return {};
}

}  // namespace

FilterResult filter_pool(const PoolManifest& pool, const FilterConfig& cfg,
                         const ImageSource& images, unsigned jobs) {
  cfg.validate();
  const PoolManifest selected = [&] {
    PoolManifest p = pool;
    for (auto& r : p.records) {
      if (!r.chosen) r = select_mask_by_clip(std::move(r));
    }
    return p;
  }();

  FilterResult result;
  result.kept.categories = selected.categories;
  FilterReport& report = result.report;
  report.thresholds = category_thresholds(selected, cfg);
  report.input_count = selected.records.size();

  std::vector<Verdict> verdicts(selected.records.size());
  parallel_for(selected.records.size(), jobs, [&](std::size_t i) {
    const auto& r = selected.records[i];
    verdicts[i] = judge(r, report.thresholds.at(r.category_id), cfg, images);
  });

  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    const auto& r = selected.records[i];
    CategoryTally& tally = report.per_category[r.category_id];
    ++tally.input;
    if (verdicts[i].rule) {
      ++tally.rejected[static_cast<std::size_t>(*verdicts[i].rule)];
      report.rejections.push_back({r.id, r.category_id, *verdicts[i].rule,
                                   std::move(verdicts[i].reason)});
    } else {
      ++tally.kept;
      result.kept.records.push_back(r);
    }
  }
  report.kept_count = result.kept.records.size();
  return result;
}

}  // namespace pastekit

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

#include "pastekit/scale_stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <unordered_map>
#include <vector>

#include "json_util.hpp"

namespace pastekit {
namespace {

// Welford's single-pass update over sorted values.
ScaleMoments moments_of(std::vector<double>& values) {
  std::sort(values.begin(), values.end());
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t n = 0;
  for (const double v : values) {
    ++n;
    const double delta = v - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (v - mean);
  }
  return {mean, n > 0 ? std::sqrt(std::max(m2, 0.0) / static_cast<double>(n)) : 0.0, n};
}

}  // namespace

const ScaleMoments& ScaleStats::for_category(std::int64_t category_id) const {
  const auto it = categories.find(category_id);
  return it == categories.end() ? global : it->second;
}

ScaleStats compute_scale_stats(const Dataset& dataset) {
  if (dataset.annotations.empty()) {
    throw Error("stats", "cannot derive scale statistics from a dataset without annotations");
  }
  std::unordered_map<std::int64_t, const ImageInfo*> images;
  for (const auto& img : dataset.images) images.emplace(img.id, &img);

  std::map<std::int64_t, std::vector<double>> per_category;
  std::vector<double> all;
  all.reserve(dataset.annotations.size());
  for (const auto& ann : dataset.annotations) {
    const auto it = images.find(ann.image_id);
    if (it == images.end()) {
      throw IntegrityError("annotation references a missing image", {ann.id});
    }
    const double pixels =
        static_cast<double>(it->second->width) * static_cast<double>(it->second->height);
    const double s = std::sqrt(static_cast<double>(ann.area) / pixels);
    per_category[ann.category_id].push_back(s);
    all.push_back(s);
  }

  ScaleStats stats;
  for (auto& [cat, values] : per_category) stats.categories.emplace(cat, moments_of(values));
  stats.global = moments_of(all);
  return stats;
}

double scale_for(const ScaleStats& stats, std::int64_t category_id, Rng& rng, ScaleClamp clamp) {
  const ScaleMoments& m = stats.for_category(category_id);
  const double draw = rng.normal(m.mu, m.sigma);
  return std::clamp(draw, clamp.min, clamp.max);
}

std::string serialize_scale_stats(const ScaleStats& stats) {
  detail::ordered_json root = detail::ordered_json::object();
  auto moments = [](const ScaleMoments& m) {
    detail::ordered_json j = detail::ordered_json::object();
    j["mu"] = m.mu;
    j["sigma"] = m.sigma;
    j["n"] = m.n;
    return j;
  };
  for (const auto& [cat, m] : stats.categories) root[std::to_string(cat)] = moments(m);
  root["global"] = moments(stats.global);
  return root.dump(2) + "\n";
}

ScaleStats parse_scale_stats(std::string_view text) {
  detail::json root;
  try {
    root = detail::json::parse(text.begin(), text.end());
  } catch (const detail::json::parse_error& e) {
    throw ParseError(e.what(), e.byte);
  }
  if (!root.is_object()) throw SchemaError("$", "expected a JSON object");
  auto moments = [](const detail::json& j, const std::string& path) {
    ScaleMoments m;
    m.mu = detail::as_double(detail::require(j, "mu", path), path + ".mu");
    m.sigma = detail::as_double(detail::require(j, "sigma", path), path + ".sigma");
    const std::int64_t n = detail::as_int(detail::require(j, "n", path), path + ".n");
    if (m.sigma < 0.0) throw SchemaError(path + ".sigma", "must be >= 0");
    if (n < 1) throw SchemaError(path + ".n", "must be >= 1");
    m.n = static_cast<std::size_t>(n);
    return m;
  };
  ScaleStats stats;
  stats.global = moments(detail::require(root, "global", "$"), "$.global");
  for (const auto& [key, value] : root.items()) {
    if (key == "global") continue;
    std::int64_t id = 0;
    const auto res = std::from_chars(key.data(), key.data() + key.size(), id);
    if (res.ec != std::errc{} || res.ptr != key.data() + key.size()) {
      throw SchemaError("$." + key, "expected a category id key");
    }
    stats.categories.emplace(id, moments(value, "$." + key));
  }
  return stats;
}

ScaleStats load_scale_stats(const std::filesystem::path& path) {
  return parse_scale_stats(read_text_file(path));
}

void save_scale_stats(const std::filesystem::path& path, const ScaleStats& stats) {
  write_text_file(path, serialize_scale_stats(stats));
}

}  // namespace pastekit

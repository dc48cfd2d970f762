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
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "pastekit/dataset.hpp"
#include "pastekit/rng.hpp"

namespace pastekit {

/// Relative object scale of one category: s = sqrt(mask area / image area).
struct ScaleMoments {
  double mu = 0.0;
  double sigma = 0.0;  // population standard deviation
  std::size_t n = 0;

  friend bool operator==(const ScaleMoments&, const ScaleMoments&) = default;
};

struct ScaleStats {
  std::map<std::int64_t, ScaleMoments> categories;
  ScaleMoments global;  // over all annotations; used for unseen categories

  const ScaleMoments& for_category(std::int64_t category_id) const;

  friend bool operator==(const ScaleStats&, const ScaleStats&) = default;
};

struct ScaleClamp {
  double min = 0.02;
  double max = 0.95;
};

/// Per-category and global moments of relative scale. Values are sorted
/// before accumulation, so the result is bitwise independent of annotation
/// order. Throws Error if the dataset has no annotations.
ScaleStats compute_scale_stats(const Dataset& dataset);

/// Draws from N(mu_c, sigma_c^2), falling back to the global moments for an
/// unseen category, then clamps to [clamp.min, clamp.max].
double scale_for(const ScaleStats& stats, std::int64_t category_id, Rng& rng,
                 ScaleClamp clamp = {});

/// JSON sidecar: {"<category_id>": {"mu", "sigma", "n"}, ..., "global": {...}}
/// with categories in ascending id order.
std::string serialize_scale_stats(const ScaleStats& stats);
ScaleStats parse_scale_stats(std::string_view json);
ScaleStats load_scale_stats(const std::filesystem::path& path);
void save_scale_stats(const std::filesystem::path& path, const ScaleStats& stats);

}  // namespace pastekit

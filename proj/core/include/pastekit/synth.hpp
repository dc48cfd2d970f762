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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pastekit/dataset.hpp"
#include "pastekit/image.hpp"
#include "pastekit/pool.hpp"

namespace pastekit {

enum class ShapeFamily { Ellipse, Rectangle, Polygon };

std::string_view to_string(ShapeFamily shape) noexcept;
std::optional<ShapeFamily> parse_shape_family(std::string_view text) noexcept;

/// Recipe for procedurally generated pools and datasets. Everything is a
/// pure function of the spec, including `seed`.
struct SynthSpec {
  // Instance pool.
  std::int32_t instance_width = 96;
  std::int32_t instance_height = 96;
  ShapeFamily shape = ShapeFamily::Ellipse;
  std::vector<Rgb> palette;  // category c is drawn in palette[(c - 1) % size]
  int category_count = 3;
  int per_category = 10;
  double score_min = 0.15;  // pseudo-score range
  double score_max = 0.35;
  double retrieved_fraction = 0.5;
  std::uint64_t seed = 0;

  // Annotated dataset.
  int background_count = 10;
  std::int32_t background_width = 128;
  std::int32_t background_height = 128;
  int objects_per_background = 3;
  /// When non-empty, the k-th object of each category uses scales[k % size];
  /// otherwise scales are drawn uniformly from [scale_min, scale_max].
  std::vector<double> scales;
  double scale_min = 0.1;
  double scale_max = 0.4;

  /// Throws ConfigError naming the offending field.
  void validate() const;
  /// Palette in use: `palette`, or a built-in one when empty.
  std::vector<Rgb> effective_palette() const;
};

/// Reads a spec from JSON; keys mirror the field names, `shape` is one of
/// "ellipse", "rectangle", "polygon" and palette entries are [r, g, b].
/// Unknown keys are rejected.
SynthSpec parse_synth_spec(std::string_view json);

/// Names of the candidate segmenters attached to every synthetic record.
inline constexpr std::string_view kSynthSegmenters[] = {"SRF", "CLIPseg", "UFO", "U2Net"};

/// Synthetic stand-in for an image-text score: a hash of (record id,
/// segmenter) mapped into [lo, hi]. Not a model output.
double pseudo_score(std::string_view record_id, std::string_view segmenter, double lo, double hi);

struct SynthPool {
  PoolManifest manifest;
  /// Per record, the index of the candidate that equals the ground truth.
  std::vector<std::size_t> truth;
  std::vector<RleMask> truth_masks;
};

/// One record per (category, index). Each record gets four candidates: the
/// exact ground-truth mask and three perturbed decoys (dilated, eroded,
/// shifted), with the truth holding the strictly highest pseudo-score.
/// Images go to `out_dir/instances/<id>.png` unless `out_dir` is empty.
SynthPool generate_pool(const SynthSpec& spec, const std::filesystem::path& out_dir = {});

/// Backgrounds with `objects_per_background` shapes each, annotated with
/// exact masks. Categories cycle through the rare/common/frequent bands.
/// Images go to `out_dir/backgrounds/<id>.png` unless `out_dir` is empty.
Dataset generate_annotated_dataset(const SynthSpec& spec,
                                   const std::filesystem::path& out_dir = {});

/// Pixel-center rasterization of one shape; exposed for tests.
Bitmap rasterize_ellipse(std::int32_t height, std::int32_t width, double cx, double cy, double rx,
                         double ry);
Bitmap rasterize_rect(std::int32_t height, std::int32_t width, std::int32_t x, std::int32_t y,
                      std::int32_t w, std::int32_t h);

}  // namespace pastekit

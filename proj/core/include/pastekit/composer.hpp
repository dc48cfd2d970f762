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
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pastekit/dataset.hpp"
#include "pastekit/image.hpp"
#include "pastekit/pool.hpp"
#include "pastekit/rng.hpp"
#include "pastekit/scale_stats.hpp"

namespace pastekit {

enum class Placement { Random, Reference };
enum class Blending { Binary };

std::string_view to_string(Placement p) noexcept;
std::optional<Placement> parse_placement(std::string_view text) noexcept;

struct ComposeConfig {
  int n_max = 20;
  Placement placement = Placement::Random;
  std::uint64_t seed = 0;
  Blending blending = Blending::Binary;
  /// Drop an annotation whose visible share of its own mask falls below this;
  /// 0 drops only fully occluded objects.
  double occlusion_drop_fraction = 0.0;
  /// Composed samples per background image.
  int repeat = 1;
  ScaleClamp scale_clamp;

  void validate() const;
};

struct PasteAction {
  std::string instance_id;
  std::int64_t category_id = 0;
  double scale = 0.0;  // S_r: sqrt(target mask area / canvas area)
  double cx = 0.0;     // center of the pasted bounding box, canvas pixels
  double cy = 0.0;
  int z = 0;           // paste order; later z occludes earlier z
};

struct CompositionPlan {
  std::int64_t background_image_id = 0;
  std::uint64_t sample_seed = 0;
  std::vector<PasteAction> actions;  // ordered by z = 0, 1, ...
};

/// Read-only view of a filtered pool grouped by category for sampling.
/// Categories and their records keep ascending-id / manifest order.
class PoolIndex {
 public:
  explicit PoolIndex(const PoolManifest& pool);

  bool empty() const noexcept { return categories_.empty(); }
  std::span<const std::int64_t> categories() const noexcept { return categories_; }
  std::span<const std::size_t> records_of(std::int64_t category_id) const;
  const InstanceRecord* find(std::string_view instance_id) const;
  const PoolManifest& pool() const noexcept { return *pool_; }

 private:
  const PoolManifest* pool_;
  std::vector<std::int64_t> categories_;
  std::unordered_map<std::int64_t, std::vector<std::size_t>> by_category_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

/// Per-sample stream seed derived from (seed, background image id, repeat
/// index), independent of scheduling.
std::uint64_t sample_seed(std::uint64_t seed, std::int64_t image_id, std::uint64_t repeat_index);

/// Draws, in this order: the instance count N ~ U{1..n_max}; then for each
/// action the category (uniform over pooled categories, with replacement),
/// the instance (uniform within the category), the scale (scale_for), and
/// the center (uniform over the canvas, or the center of a uniformly chosen
/// background box under Placement::Reference when one exists).
/// Throws PlanningError for an empty pool.
CompositionPlan plan_sample(Rng& rng, const PoolIndex& pool, const ScaleStats& stats,
                            const ImageInfo& background,
                            std::span<const Annotation> background_annotations,
                            const ComposeConfig& cfg);

/// A pasted instance's footprint on the canvas, in z order.
struct PastedMask {
  std::int64_t category_id = 0;
  RleMask mask;
};

/// Occlusion update. Each annotation's visible mask is its mask minus the
/// union of every strictly later paste; the background sits below all
/// pastes and its annotations never occlude one another. Annotations whose
/// visible area is zero, or whose visible share is below
/// `occlusion_drop_fraction` when that is positive, are dropped. Output is
/// the surviving background annotations in input order followed by the
/// surviving pastes in z order; pasted annotations get id 0 and
/// `image_id`, for the caller to renumber.
std::vector<Annotation> update_annotations(std::span<const Annotation> background,
                                           std::span<const PastedMask> pasted,
                                           double occlusion_drop_fraction,
                                           std::int64_t image_id);

struct SkippedAction {
  int z = 0;
  std::string reason;
};

struct ComposedSample {
  Image image;
  std::vector<Annotation> annotations;
  CompositionPlan plan;
  std::vector<SkippedAction> skipped;
};

/// Executes a plan: each instance is cropped to its mask's bounding box,
/// scaled by sqrt(S_r^2 * H * W / mask area) (bilinear for pixels, bilinear
/// then >= 0.5 for the mask), centered at (cx, cy), clipped to the canvas,
/// and written over it where the mask is set. Pastes whose clipped mask is
/// empty are skipped and listed in `skipped`. Throws on unreadable instance
/// images.
ComposedSample render(const CompositionPlan& plan, const PoolIndex& pool,
                      const ImageSource& instance_images, const Image& background,
                      std::span<const Annotation> background_annotations,
                      const ComposeConfig& cfg);

struct SampleLog {
  std::int64_t source_image_id = 0;
  std::int64_t image_id = 0;
  int repeat_index = 0;
  std::size_t planned = 0;
  std::size_t skipped = 0;
  bool passthrough = false;
  std::string message;
};

struct ComposeResult {
  Dataset dataset;
  std::vector<SampleLog> samples;
};

/// Composes `cfg.repeat` samples per source image and returns the source
/// dataset followed by the composed images and annotations. Composed PNGs
/// are written to `out_dir/composed/<source id>_<repeat>.png` and referenced
/// by that relative path. Composed image and annotation ids continue after
/// the largest source ids, in source order. A sample that fails is emitted
/// as the unmodified background with its annotations and logged as
/// passthrough. Output bytes do not depend on `jobs`.
ComposeResult compose_dataset(const PoolManifest& pool, const ScaleStats& stats,
                              const Dataset& source, const ComposeConfig& cfg,
                              const ImageSource& instance_images,
                              const ImageSource& background_images,
                              const std::filesystem::path& out_dir, unsigned jobs = 1);

}  // namespace pastekit

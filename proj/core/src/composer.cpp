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

#include "pastekit/composer.hpp"

#include <algorithm>
#include <cmath>

#include "pastekit/parallel.hpp"

namespace pastekit {

std::string_view to_string(Placement p) noexcept {
  return p == Placement::Reference ? "reference" : "random";
}

std::optional<Placement> parse_placement(std::string_view text) noexcept {
  if (text == "random") return Placement::Random;
  if (text == "reference") return Placement::Reference;
  return std::nullopt;
}

void ComposeConfig::validate() const {
  if (n_max < 1) throw ConfigError("compose.n_max", "must be >= 1");
  if (!(occlusion_drop_fraction >= 0.0 && occlusion_drop_fraction < 1.0)) {
    throw ConfigError("compose.occlusion_drop_fraction", "must lie in [0, 1)");
  }
  if (repeat < 0) throw ConfigError("compose.repeat", "must be >= 0");
  if (!(scale_clamp.min > 0.0)) throw ConfigError("compose.scale_min", "must be > 0");
  if (!(scale_clamp.max <= 1.0)) throw ConfigError("compose.scale_max", "must be <= 1");
  if (!(scale_clamp.min <= scale_clamp.max)) {
    throw ConfigError("compose.scale_min", "must be <= compose.scale_max");
  }
}

PoolIndex::PoolIndex(const PoolManifest& pool) : pool_(&pool) {
  for (std::size_t i = 0; i < pool.records.size(); ++i) {
    const auto& r = pool.records[i];
    by_category_[r.category_id].push_back(i);
    by_id_.emplace(r.id, i);
  }
  for (const auto& [cat, recs] : by_category_) categories_.push_back(cat);
  std::sort(categories_.begin(), categories_.end());
}

std::span<const std::size_t> PoolIndex::records_of(std::int64_t category_id) const {
  const auto it = by_category_.find(category_id);
  if (it == by_category_.end()) return {};
  return it->second;
}

const InstanceRecord* PoolIndex::find(std::string_view instance_id) const {
  const auto it = by_id_.find(std::string(instance_id));
  return it == by_id_.end() ? nullptr : &pool_->records[it->second];
}

std::uint64_t sample_seed(std::uint64_t seed, std::int64_t image_id, std::uint64_t repeat_index) {
  return hash_combine(hash_combine(seed, static_cast<std::uint64_t>(image_id)), repeat_index);
}

CompositionPlan plan_sample(Rng& rng, const PoolIndex& pool, const ScaleStats& stats,
                            const ImageInfo& background,
                            std::span<const Annotation> background_annotations,
                            const ComposeConfig& cfg) {
  if (pool.empty()) throw PlanningError("instance pool is empty");
  CompositionPlan plan;
  plan.background_image_id = background.id;

  const auto count = static_cast<int>(rng.uniform_int(1, cfg.n_max));
  const auto cats = pool.categories();
  plan.actions.reserve(static_cast<std::size_t>(count));
  for (int z = 0; z < count; ++z) {
    PasteAction a;
    a.z = z;
    a.category_id = cats[rng.uniform_below(cats.size())];
    const auto recs = pool.records_of(a.category_id);
    a.instance_id = pool.pool().records[recs[rng.uniform_below(recs.size())]].id;
    a.scale = scale_for(stats, a.category_id, rng, cfg.scale_clamp);
    if (cfg.placement == Placement::Reference && !background_annotations.empty()) {
      const BBox& box =
          background_annotations[rng.uniform_below(background_annotations.size())].bbox;
      a.cx = static_cast<double>(box.x) + static_cast<double>(box.w) / 2.0;
      a.cy = static_cast<double>(box.y) + static_cast<double>(box.h) / 2.0;
    } else {
      a.cx = rng.uniform(0.0, background.width);
      a.cy = rng.uniform(0.0, background.height);
    }
    plan.actions.push_back(std::move(a));
  }
  return plan;
}

std::vector<Annotation> update_annotations(std::span<const Annotation> background,
                                           std::span<const PastedMask> pasted,
                                           double occlusion_drop_fraction,
                                           std::int64_t image_id) {
  auto survives = [&](std::uint64_t visible, std::uint64_t full) {
    if (visible == 0) return false;
    if (occlusion_drop_fraction > 0.0) {
      return static_cast<double>(visible) >= occlusion_drop_fraction * static_cast<double>(full);
    }
    return true;
  };

  std::vector<Annotation> pasted_out;
  std::optional<RleMask> covered;
  for (std::size_t k = pasted.size(); k-- > 0;) {
    const PastedMask& p = pasted[k];
    RleMask visible = covered ? rle_merge(p.mask, *covered, MaskOp::Subtract) : p.mask;
    covered = covered ? rle_merge(*covered, p.mask, MaskOp::Union) : p.mask;
    Annotation ann = Annotation::from_mask(0, image_id, p.category_id, std::move(visible),
                                           Provenance::Pasted);
    if (survives(ann.area, p.mask.area())) pasted_out.push_back(std::move(ann));
  }
  std::reverse(pasted_out.begin(), pasted_out.end());

  std::vector<Annotation> out;
  out.reserve(background.size() + pasted_out.size());
  for (const Annotation& bg : background) {
    if (!covered) {
      out.push_back(bg);
      continue;
    }
    Annotation ann = Annotation::from_mask(bg.id, bg.image_id, bg.category_id,
                                           rle_merge(bg.mask, *covered, MaskOp::Subtract),
                                           bg.provenance);
    if (survives(ann.area, bg.area)) out.push_back(std::move(ann));
  }
  for (auto& ann : pasted_out) out.push_back(std::move(ann));
  return out;
}

namespace {

Image crop(const Image& src, const BBox& box) {
  Image out(static_cast<std::int32_t>(box.w), static_cast<std::int32_t>(box.h));
  for (std::int64_t y = 0; y < box.h; ++y) {
    for (std::int64_t x = 0; x < box.w; ++x) {
      out.set(static_cast<std::int32_t>(x), static_cast<std::int32_t>(y),
              src.at(static_cast<std::int32_t>(box.x + x), static_cast<std::int32_t>(box.y + y)));
    }
  }
  return out;
}

Bitmap crop(const Bitmap& src, const BBox& box) {
  Bitmap out(static_cast<std::int32_t>(box.h), static_cast<std::int32_t>(box.w));
  for (std::int64_t y = 0; y < box.h; ++y) {
    for (std::int64_t x = 0; x < box.w; ++x) {
      out.set(static_cast<std::int32_t>(x), static_cast<std::int32_t>(y),
              src.at(static_cast<std::int32_t>(box.x + x), static_cast<std::int32_t>(box.y + y)));
    }
  }
  return out;
}

// Footprint of `patch` placed with its top-left at (x0, y0) on an H x W
// canvas, clipped, built directly as column-major runs.
RleMask place_patch(const Bitmap& patch, std::int64_t x0, std::int64_t y0, std::int32_t height,
                    std::int32_t width) {
  const std::int64_t h = height;
  const std::int64_t col_begin = std::clamp<std::int64_t>(x0, 0, width);
  const std::int64_t col_end = std::clamp<std::int64_t>(x0 + patch.width(), col_begin, width);
  const std::int64_t row_begin = std::clamp<std::int64_t>(y0, 0, h);
  const std::int64_t row_end = std::clamp<std::int64_t>(y0 + patch.height(), row_begin, h);

  std::vector<std::uint32_t> counts;
  bool current = false;
  std::uint64_t run = 0;
  auto emit = [&](bool v, std::uint64_t len) {
    if (len == 0) return;
    if (v != current) {
      counts.push_back(static_cast<std::uint32_t>(run));
      run = 0;
      current = v;
    }
    run += len;
  };
  emit(false, static_cast<std::uint64_t>(col_begin * h));
  for (std::int64_t x = col_begin; x < col_end; ++x) {
    emit(false, static_cast<std::uint64_t>(row_begin));
    for (std::int64_t y = row_begin; y < row_end; ++y) {
      emit(patch.at(static_cast<std::int32_t>(x - x0), static_cast<std::int32_t>(y - y0)) != 0, 1);
    }
    emit(false, static_cast<std::uint64_t>(h - row_end));
  }
  emit(false, static_cast<std::uint64_t>((width - col_end) * h));
  counts.push_back(static_cast<std::uint32_t>(run));
  return RleMask::from_counts(height, width, std::move(counts));
}

std::int64_t round_half_up(double v) { return static_cast<std::int64_t>(std::floor(v + 0.5)); }

}  // namespace

ComposedSample render(const CompositionPlan& plan, const PoolIndex& pool,
                      const ImageSource& instance_images, const Image& background,
                      std::span<const Annotation> background_annotations,
                      const ComposeConfig& cfg) {
  ComposedSample sample;
  sample.plan = plan;
  sample.image = background;
  const std::int32_t H = background.height();
  const std::int32_t W = background.width();
  const double canvas_area = static_cast<double>(H) * static_cast<double>(W);

  std::vector<PastedMask> pasted;
  pasted.reserve(plan.actions.size());
  for (const PasteAction& a : plan.actions) {
    const InstanceRecord* rec = pool.find(a.instance_id);
    if (!rec) throw PlanningError("plan references unknown instance " + a.instance_id);
    const Image img = instance_images.load(rec->image_path);
    if (img.width() != rec->width || img.height() != rec->height) {
      throw IoError(rec->image_path + ": size differs from the manifest record");
    }
    const RleMask& mask = rec->selected().mask;
    const BoxArea ba = bbox_and_area(mask);
    if (ba.area == 0) {
      sample.skipped.push_back({a.z, "instance mask is empty"});
      continue;
    }
    const double factor = std::sqrt(a.scale * a.scale * canvas_area / static_cast<double>(ba.area));
    const auto new_w = static_cast<std::int32_t>(
        std::max<std::int64_t>(1, round_half_up(static_cast<double>(ba.bbox.w) * factor)));
    const auto new_h = static_cast<std::int32_t>(
        std::max<std::int64_t>(1, round_half_up(static_cast<double>(ba.bbox.h) * factor)));

    const Image pixels = resize_bilinear(crop(img, ba.bbox), new_w, new_h);
    const Bitmap shape = resize_mask(crop(rle_decode(mask), ba.bbox), new_w, new_h);
    const std::int64_t x0 = round_half_up(a.cx - new_w / 2.0);
    const std::int64_t y0 = round_half_up(a.cy - new_h / 2.0);

    RleMask footprint = place_patch(shape, x0, y0, H, W);
    if (footprint.area() == 0) {
      sample.skipped.push_back({a.z, "pasted mask is empty after scaling and clipping"});
      continue;
    }
    const std::int64_t ys = std::max<std::int64_t>(0, y0);
    const std::int64_t ye = std::min<std::int64_t>(H, y0 + new_h);
    const std::int64_t xs = std::max<std::int64_t>(0, x0);
    const std::int64_t xe = std::min<std::int64_t>(W, x0 + new_w);
    for (std::int64_t y = ys; y < ye; ++y) {
      for (std::int64_t x = xs; x < xe; ++x) {
        const auto px = static_cast<std::int32_t>(x - x0);
        const auto py = static_cast<std::int32_t>(y - y0);
        if (shape.at(px, py)) {
          sample.image.set(static_cast<std::int32_t>(x), static_cast<std::int32_t>(y),
                           pixels.at(px, py));
        }
      }
    }
    pasted.push_back({a.category_id, std::move(footprint)});
  }
  sample.annotations = update_annotations(background_annotations, pasted,
                                          cfg.occlusion_drop_fraction, plan.background_image_id);
  return sample;
}

ComposeResult compose_dataset(const PoolManifest& pool, const ScaleStats& stats,
                              const Dataset& source, const ComposeConfig& cfg,
                              const ImageSource& instance_images,
                              const ImageSource& background_images,
                              const std::filesystem::path& out_dir, unsigned jobs) {
  cfg.validate();
  ComposeResult result;
  result.dataset = source;
  if (cfg.repeat == 0 || source.images.empty()) return result;

  const PoolIndex index(pool);
  if (index.empty()) throw PlanningError("instance pool is empty");

  std::int64_t next_image_id = 0;
  for (const auto& img : source.images) next_image_id = std::max(next_image_id, img.id);
  std::int64_t next_annotation_id = 0;
  for (const auto& ann : source.annotations) next_annotation_id = std::max(next_annotation_id, ann.id);
  ++next_image_id;
  ++next_annotation_id;

  const auto by_image = source.annotations_by_image();
  const auto repeat = static_cast<std::size_t>(cfg.repeat);
  const std::size_t total = source.images.size() * repeat;
  const std::filesystem::path composed_dir = out_dir / "composed";
  std::filesystem::create_directories(composed_dir);

  struct Slot {
    ImageInfo info;
    std::vector<Annotation> annotations;
    SampleLog log;
  };
  std::vector<Slot> slots(total);

  parallel_for(total, jobs, [&](std::size_t k) {
    const ImageInfo& bg_info = source.images[k / repeat];
    const auto rep = static_cast<int>(k % repeat);
    Slot& slot = slots[k];
    slot.info.id = next_image_id + static_cast<std::int64_t>(k);
    slot.info.width = bg_info.width;
    slot.info.height = bg_info.height;
    slot.info.file_name =
        "composed/" + std::to_string(bg_info.id) + "_" + std::to_string(rep) + ".png";
    slot.log.source_image_id = bg_info.id;
    slot.log.image_id = slot.info.id;
    slot.log.repeat_index = rep;

    std::vector<Annotation> bg_anns;
    if (const auto it = by_image.find(bg_info.id); it != by_image.end()) {
      for (const std::size_t i : it->second) bg_anns.push_back(source.annotations[i]);
    }
    const Image background = background_images.load(bg_info.file_name);
    if (background.width() != bg_info.width || background.height() != bg_info.height) {
      throw IoError(bg_info.file_name + ": size differs from the dataset record");
    }

    const std::uint64_t seed = sample_seed(cfg.seed, bg_info.id, static_cast<std::uint64_t>(rep));
    Image out_image;
    try {
      Rng rng(seed);
      CompositionPlan plan = plan_sample(rng, index, stats, bg_info, bg_anns, cfg);
      plan.sample_seed = seed;
      ComposedSample sample = render(plan, index, instance_images, background, bg_anns, cfg);
      slot.log.planned = plan.actions.size();
      slot.log.skipped = sample.skipped.size();
      out_image = std::move(sample.image);
      slot.annotations = std::move(sample.annotations);
    } catch (const std::exception& e) {
      slot.log.passthrough = true;
      slot.log.message = e.what();
      out_image = background;
      slot.annotations = bg_anns;
    }
    for (auto& ann : slot.annotations) ann.image_id = slot.info.id;
    save_png(out_dir / slot.info.file_name, out_image);
  });

  for (auto& slot : slots) {
    for (auto& ann : slot.annotations) {
      ann.id = next_annotation_id++;
      result.dataset.annotations.push_back(std::move(ann));
    }
    result.dataset.images.push_back(std::move(slot.info));
    result.samples.push_back(std::move(slot.log));
  }
  return result;
}

}  // namespace pastekit

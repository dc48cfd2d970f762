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

#include "pastekit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "json_util.hpp"
#include "pastekit/polygon.hpp"
#include "pastekit/rng.hpp"

namespace pastekit {

std::string_view to_string(ShapeFamily shape) noexcept {
  switch (shape) {
    case ShapeFamily::Ellipse: return "ellipse";
    case ShapeFamily::Rectangle: return "rectangle";
    case ShapeFamily::Polygon: return "polygon";
  }
  return "ellipse";
}

std::optional<ShapeFamily> parse_shape_family(std::string_view text) noexcept {
  if (text == "ellipse") return ShapeFamily::Ellipse;
  if (text == "rectangle") return ShapeFamily::Rectangle;
  if (text == "polygon") return ShapeFamily::Polygon;
  return std::nullopt;
}

void SynthSpec::validate() const {
  if (instance_width < 8 || instance_height < 8) {
    throw ConfigError("synth.instance_width", "instance canvas must be at least 8x8");
  }
  if (background_width < 8 || background_height < 8) {
    throw ConfigError("synth.background_width", "background canvas must be at least 8x8");
  }
  if (category_count < 1) throw ConfigError("synth.category_count", "must be >= 1");
  if (per_category < 1) throw ConfigError("synth.per_category", "must be >= 1");
  if (background_count < 1) throw ConfigError("synth.background_count", "must be >= 1");
  if (objects_per_background < 1) {
    throw ConfigError("synth.objects_per_background", "must be >= 1");
  }
  if (!(score_min >= -1.0 && score_min <= score_max && score_max <= 1.0)) {
    throw ConfigError("synth.score_min", "need -1 <= score_min <= score_max <= 1");
  }
  if (!(retrieved_fraction >= 0.0 && retrieved_fraction <= 1.0)) {
    throw ConfigError("synth.retrieved_fraction", "must lie in [0, 1]");
  }
  if (!(scale_min > 0.0 && scale_min <= scale_max && scale_max <= 1.0)) {
    throw ConfigError("synth.scale_min", "need 0 < scale_min <= scale_max <= 1");
  }
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] > 0.0 && scales[i] <= 1.0)) {
      throw ConfigError("synth.scales[" + std::to_string(i) + "]", "must lie in (0, 1]");
    }
  }
}

std::vector<Rgb> SynthSpec::effective_palette() const {
  if (!palette.empty()) return palette;
  return {{200, 40, 40}, {40, 150, 60}, {40, 70, 200}, {220, 160, 20},
          {140, 50, 170}, {20, 160, 170}, {120, 80, 30}, {230, 90, 150}};
}

SynthSpec parse_synth_spec(std::string_view text) {
  detail::json root;
  try {
    root = detail::json::parse(text.begin(), text.end());
  } catch (const detail::json::parse_error& e) {
    throw ParseError(e.what(), e.byte);
  }
  if (!root.is_object()) throw ConfigError("synth", "expected a JSON object");
  SynthSpec s;
  auto as_int = [](const detail::json& v, const std::string& key) {
    if (!v.is_number_integer()) throw ConfigError("synth." + key, "expected an integer");
    return v.get<std::int64_t>();
  };
  auto as_real = [](const detail::json& v, const std::string& key) {
    if (!v.is_number()) throw ConfigError("synth." + key, "expected a number");
    return v.get<double>();
  };
  for (const auto& [key, v] : root.items()) {
    if (key == "instance_width") s.instance_width = static_cast<std::int32_t>(as_int(v, key));
    else if (key == "instance_height") s.instance_height = static_cast<std::int32_t>(as_int(v, key));
    else if (key == "shape") {
      const auto shape = v.is_string() ? parse_shape_family(v.get<std::string>()) : std::nullopt;
      if (!shape) throw ConfigError("synth.shape", "expected ellipse, rectangle or polygon");
      s.shape = *shape;
    } else if (key == "palette") {
      if (!v.is_array()) throw ConfigError("synth.palette", "expected an array of [r, g, b]");
      for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string path = "palette[" + std::to_string(i) + "]";
        const auto& c = v[i];
        if (!c.is_array() || c.size() != 3) throw ConfigError("synth." + path, "expected [r, g, b]");
        Rgb rgb;
        std::uint8_t* ch[] = {&rgb.r, &rgb.g, &rgb.b};
        for (std::size_t k = 0; k < 3; ++k) {
          const auto value = as_int(c[k], path);
          if (value < 0 || value > 255) throw ConfigError("synth." + path, "channel out of range");
          *ch[k] = static_cast<std::uint8_t>(value);
        }
        s.palette.push_back(rgb);
      }
    } else if (key == "category_count") s.category_count = static_cast<int>(as_int(v, key));
    else if (key == "per_category") s.per_category = static_cast<int>(as_int(v, key));
    else if (key == "score_min") s.score_min = as_real(v, key);
    else if (key == "score_max") s.score_max = as_real(v, key);
    else if (key == "retrieved_fraction") s.retrieved_fraction = as_real(v, key);
    else if (key == "seed") {
      if (!v.is_number_unsigned() && !v.is_number_integer()) {
        throw ConfigError("synth.seed", "expected an unsigned integer");
      }
      s.seed = v.get<std::uint64_t>();
    } else if (key == "background_count") s.background_count = static_cast<int>(as_int(v, key));
    else if (key == "background_width") s.background_width = static_cast<std::int32_t>(as_int(v, key));
    else if (key == "background_height") s.background_height = static_cast<std::int32_t>(as_int(v, key));
    else if (key == "objects_per_background") s.objects_per_background = static_cast<int>(as_int(v, key));
    else if (key == "scales") {
      if (!v.is_array()) throw ConfigError("synth.scales", "expected an array of numbers");
      for (std::size_t i = 0; i < v.size(); ++i) {
        s.scales.push_back(as_real(v[i], "scales[" + std::to_string(i) + "]"));
      }
    } else if (key == "scale_min") s.scale_min = as_real(v, key);
    else if (key == "scale_max") s.scale_max = as_real(v, key);
    else throw ConfigError("synth." + key, "unknown key");
  }
  s.validate();
  return s;
}

namespace {

std::uint64_t fnv1a(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

Bitmap morph(const Bitmap& src, int radius, bool dilate) {
  Bitmap out(src.height(), src.width());
  for (std::int32_t y = 0; y < src.height(); ++y) {
    for (std::int32_t x = 0; x < src.width(); ++x) {
      bool v = !dilate;
      for (int dy = -radius; dy <= radius && v != dilate; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
          const std::int32_t sx = x + dx;
          const std::int32_t sy = y + dy;
          const bool inside = sx >= 0 && sy >= 0 && sx < src.width() && sy < src.height();
          const bool bit = inside && src.at(sx, sy);
          if (bit == dilate) {
            v = dilate;
            break;
          }
        }
      }
      out.set(x, y, v);
    }
  }
  return out;
}

Bitmap shift(const Bitmap& src, int dx, int dy) {
  Bitmap out(src.height(), src.width());
  for (std::int32_t y = 0; y < src.height(); ++y) {
    for (std::int32_t x = 0; x < src.width(); ++x) {
      const std::int32_t sx = x - dx;
      const std::int32_t sy = y - dy;
      if (sx >= 0 && sy >= 0 && sx < src.width() && sy < src.height()) out.set(x, y, src.at(sx, sy));
    }
  }
  return out;
}

// Star-shaped polygon around (cx, cy) whose enclosed area is `area`.
Polygon star_polygon(Rng& rng, double cx, double cy, double area) {
  const int n = static_cast<int>(rng.uniform_int(6, 12));
  std::vector<double> radii(static_cast<std::size_t>(n));
  std::vector<double> angles(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    radii[k] = rng.uniform(0.65, 1.0);
    angles[k] = (k + rng.uniform(-0.3, 0.3)) * 2.0 * std::numbers::pi / n;
  }
  double unit_area = 0.0;  // shoelace for unit outer radius
  for (int k = 0; k < n; ++k) {
    const int j = (k + 1) % n;
    unit_area += 0.5 * radii[k] * radii[j] * std::sin(angles[j] - angles[k] + (j == 0 ? 2.0 * std::numbers::pi : 0.0));
  }
  const double scale = std::sqrt(area / unit_area);
  Polygon poly;
  for (int k = 0; k < n; ++k) {
    poly.push_back(cx + scale * radii[k] * std::cos(angles[k]));
    poly.push_back(cy + scale * radii[k] * std::sin(angles[k]));
  }
  return poly;
}

void paint(Image& img, const Bitmap& mask, Rgb color) {
  for (std::int32_t y = 0; y < img.height(); ++y) {
    for (std::int32_t x = 0; x < img.width(); ++x) {
      if (mask.at(x, y)) img.set(x, y, color);
    }
  }
}

std::string pad4(int v) {
  std::string s = std::to_string(v);
  return std::string(s.size() < 4 ? 4 - s.size() : 0, '0') + s;
}

}  // namespace

Bitmap rasterize_ellipse(std::int32_t height, std::int32_t width, double cx, double cy, double rx,
                         double ry) {
  Bitmap out(height, width);
  for (std::int32_t y = 0; y < height; ++y) {
    for (std::int32_t x = 0; x < width; ++x) {
      const double u = (x + 0.5 - cx) / rx;
      const double v = (y + 0.5 - cy) / ry;
      if (u * u + v * v <= 1.0) out.set(x, y, true);
    }
  }
  return out;
}

Bitmap rasterize_rect(std::int32_t height, std::int32_t width, std::int32_t x, std::int32_t y,
                      std::int32_t w, std::int32_t h) {
  Bitmap out(height, width);
  for (std::int32_t yy = std::max(0, y); yy < std::min(height, y + h); ++yy) {
    for (std::int32_t xx = std::max(0, x); xx < std::min(width, x + w); ++xx) out.set(xx, yy, true);
  }
  return out;
}

double pseudo_score(std::string_view record_id, std::string_view segmenter, double lo, double hi) {
  const std::uint64_t h = hash_combine(fnv1a(record_id), fnv1a(segmenter));
  return lo + (hi - lo) * (static_cast<double>(h >> 11) * 0x1.0p-53);
}

SynthPool generate_pool(const SynthSpec& spec, const std::filesystem::path& out_dir) {
  spec.validate();
  const auto palette = spec.effective_palette();
  const std::int32_t W = spec.instance_width;
  const std::int32_t H = spec.instance_height;
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir / "instances");

  SynthPool out;
  for (int c = 1; c <= spec.category_count; ++c) {
    for (int i = 0; i < spec.per_category; ++i) {
      const auto index = static_cast<std::uint64_t>((c - 1) * spec.per_category + i);
      Rng rng(hash_combine(spec.seed, index + 1));
      InstanceRecord r;
      r.id = "syn-c" + std::to_string(c) + "-" + pad4(i);
      r.category_id = c;
      r.width = W;
      r.height = H;
      r.image_path = "instances/" + r.id + ".png";
      const double retrieved_draw =
          static_cast<double>(hash_combine(spec.seed ^ 0x5eedULL, fnv1a(r.id)) % 1000) / 1000.0;
      r.source = retrieved_draw < spec.retrieved_fraction ? InstanceSource::Retrieved
                                                           : InstanceSource::Generated;

      const double area = rng.uniform(0.15, 0.40) * W * H;
      const double aspect = rng.uniform(0.7, 1.4);
      const double cx = W * (0.5 + rng.uniform(-0.05, 0.05));
      const double cy = H * (0.5 + rng.uniform(-0.05, 0.05));
      Bitmap truth;
      switch (spec.shape) {
        case ShapeFamily::Ellipse: {
          const double rx = std::sqrt(area * aspect / std::numbers::pi);
          truth = rasterize_ellipse(H, W, cx, cy, rx, area / (std::numbers::pi * rx));
          break;
        }
        case ShapeFamily::Rectangle: {
          const double w = std::sqrt(area * aspect);
          const auto iw = static_cast<std::int32_t>(std::lround(w));
          const auto ih = static_cast<std::int32_t>(std::lround(area / w));
          truth = rasterize_rect(H, W, static_cast<std::int32_t>(std::lround(cx - iw / 2.0)),
                                 static_cast<std::int32_t>(std::lround(cy - ih / 2.0)), iw, ih);
          break;
        }
        case ShapeFamily::Polygon: {
          const Polygon poly = star_polygon(rng, cx, cy, area);
          truth = rasterize_polygons(std::span<const Polygon>(&poly, 1), H, W);
          break;
        }
      }

      const Bitmap decoys[] = {morph(truth, 3, true), morph(truth, 3, false), shift(truth, 5, -4)};
      std::size_t truth_slot = 0;
      double best = -2.0;
      std::vector<double> scores;
      for (std::size_t k = 0; k < std::size(kSynthSegmenters); ++k) {
        scores.push_back(pseudo_score(r.id, kSynthSegmenters[k], spec.score_min, spec.score_max));
        if (scores.back() > best) {
          best = scores.back();
          truth_slot = k;
        }
      }
      std::size_t next_decoy = 0;
      for (std::size_t k = 0; k < std::size(kSynthSegmenters); ++k) {
        const Bitmap& m = k == truth_slot ? truth : decoys[next_decoy++];
        r.candidates.push_back({std::string(kSynthSegmenters[k]), rle_encode(m), scores[k]});
      }

      if (!out_dir.empty()) {
        const auto shade = static_cast<std::uint8_t>(225 + rng.uniform_below(20));
        Image img(W, H, Rgb{shade, shade, static_cast<std::uint8_t>(shade - 5)});
        paint(img, truth, palette[static_cast<std::size_t>(c - 1) % palette.size()]);
        save_png(out_dir / r.image_path, img);
      }
      out.truth.push_back(truth_slot);
      out.truth_masks.push_back(rle_encode(truth));
      out.manifest.records.push_back(std::move(r));
    }
  }
  return out;
}

Dataset generate_annotated_dataset(const SynthSpec& spec, const std::filesystem::path& out_dir) {
  spec.validate();
  const auto palette = spec.effective_palette();
  const std::int32_t W = spec.background_width;
  const std::int32_t H = spec.background_height;
  const double canvas = static_cast<double>(W) * static_cast<double>(H);
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir / "backgrounds");

  Dataset d;
  constexpr FrequencyBand kBands[] = {FrequencyBand::Rare, FrequencyBand::Common,
                                      FrequencyBand::Frequent};
  for (int c = 1; c <= spec.category_count; ++c) {
    d.categories.push_back({c, "synthetic_" + std::to_string(c), kBands[(c - 1) % 3]});
  }

  std::vector<std::size_t> occurrences(static_cast<std::size_t>(spec.category_count) + 1, 0);
  std::int64_t next_annotation = 1;
  for (int i = 0; i < spec.background_count; ++i) {
    const std::int64_t image_id = i + 1;
    Rng rng(hash_combine(spec.seed ^ 0xba5eULL, static_cast<std::uint64_t>(image_id)));
    d.images.push_back({image_id, W, H, "backgrounds/" + std::to_string(image_id) + ".png"});

    Image img(W, H);
    for (std::int32_t y = 0; y < H; ++y) {
      for (std::int32_t x = 0; x < W; ++x) {
        img.set(x, y, {static_cast<std::uint8_t>(60 + 120 * x / W),
                       static_cast<std::uint8_t>(80 + 100 * y / H), 110});
      }
    }

    std::vector<BBox> placed;
    for (int j = 0; j < spec.objects_per_background; ++j) {
      const std::int64_t k = static_cast<std::int64_t>(i) * spec.objects_per_background + j;
      const auto c = static_cast<int>(k % spec.category_count) + 1;
      const std::size_t occ = occurrences[static_cast<std::size_t>(c)]++;
      const double s = spec.scales.empty() ? rng.uniform(spec.scale_min, spec.scale_max)
                                           : spec.scales[occ % spec.scales.size()];
      const double area = s * s * canvas;

      Bitmap mask;
      // Try a few positions that avoid overlapping earlier objects.
      for (int attempt = 0; attempt < 20; ++attempt) {
        switch (spec.shape) {
          case ShapeFamily::Rectangle: {
            const auto side = static_cast<std::int32_t>(
                std::min<long>(std::lround(s * std::sqrt(canvas)), std::min(W, H)));
            mask = rasterize_rect(H, W, static_cast<std::int32_t>(rng.uniform_int(0, W - side)),
                                  static_cast<std::int32_t>(rng.uniform_int(0, H - side)), side,
                                  side);
            break;
          }
          case ShapeFamily::Ellipse: {
            const double r = std::min(std::sqrt(area / std::numbers::pi), std::min(W, H) / 2.0);
            mask = rasterize_ellipse(H, W, rng.uniform(r, W - r), rng.uniform(r, H - r), r, r);
            break;
          }
          case ShapeFamily::Polygon: {
            const double r = std::min(std::sqrt(area / std::numbers::pi), std::min(W, H) / 2.0);
            const Polygon poly =
                star_polygon(rng, rng.uniform(r, W - r), rng.uniform(r, H - r), area);
            mask = rasterize_polygons(std::span<const Polygon>(&poly, 1), H, W);
            break;
          }
        }
        const BBox box = bbox_and_area(rle_encode(mask)).bbox;
        const bool overlaps = std::any_of(placed.begin(), placed.end(), [&](const BBox& o) {
          return box.x < o.x + o.w && o.x < box.x + box.w && box.y < o.y + o.h && o.y < box.y + box.h;
        });
        if (!overlaps) break;
      }
      RleMask rle = rle_encode(mask);
      if (rle.area() == 0) continue;
      placed.push_back(bbox_and_area(rle).bbox);
      paint(img, mask, palette[static_cast<std::size_t>(c - 1) % palette.size()]);
      d.annotations.push_back(Annotation::from_mask(next_annotation++, image_id, c, std::move(rle)));
    }
    if (!out_dir.empty()) save_png(out_dir / d.images.back().file_name, img);
  }
  return d;
}

}  // namespace pastekit

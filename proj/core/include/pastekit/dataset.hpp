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
#include <unordered_map>
#include <vector>

#include "pastekit/error.hpp"
#include "pastekit/rle.hpp"

namespace pastekit {

/// LVIS frequency partition of a category; `Unknown` for plain COCO input.
enum class FrequencyBand { Rare, Common, Frequent, Unknown };

std::string_view to_string(FrequencyBand band) noexcept;
/// Accepts the LVIS short tags ("r", "c", "f") and the long names.
std::optional<FrequencyBand> parse_frequency_band(std::string_view text) noexcept;

enum class Provenance { Original, Pasted };

std::string_view to_string(Provenance p) noexcept;

struct Category {
  std::int64_t id = 0;
  std::string name;
  FrequencyBand band = FrequencyBand::Unknown;

  friend bool operator==(const Category&, const Category&) = default;
};

struct ImageInfo {
  std::int64_t id = 0;
  std::int32_t width = 0;
  std::int32_t height = 0;
  std::string file_name;

  friend bool operator==(const ImageInfo&, const ImageInfo&) = default;
};

struct Annotation {
  std::int64_t id = 0;
  std::int64_t image_id = 0;
  std::int64_t category_id = 0;
  RleMask mask;
  BBox bbox;
  std::uint64_t area = 0;
  Provenance provenance = Provenance::Original;

  /// Builds an annotation whose bbox and area are derived from `mask`.
  static Annotation from_mask(std::int64_t id, std::int64_t image_id, std::int64_t category_id,
                              RleMask mask, Provenance provenance = Provenance::Original);

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct Dataset {
  std::vector<ImageInfo> images;
  std::vector<Annotation> annotations;
  std::vector<Category> categories;

  const ImageInfo* find_image(std::int64_t id) const noexcept;
  const Category* find_category(std::int64_t id) const noexcept;
  /// Annotation indices grouped by image id, in dataset order.
  std::unordered_map<std::int64_t, std::vector<std::size_t>> annotations_by_image() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Structural JSON problem (missing key, wrong type) at `key_path`.
class SchemaError : public Error {
 public:
  SchemaError(std::string key_path, const std::string& message)
      : Error("schema", key_path + ": " + message), key_path_(std::move(key_path)) {}

  const std::string& key_path() const noexcept { return key_path_; }

 private:
  std::string key_path_;
};

struct ParseReport {
  /// Annotations whose rasterized mask came out empty; they are not loaded.
  std::vector<std::int64_t> dropped_empty;
};

/// Reads COCO or LVIS JSON. Polygon segmentations are rasterized at the
/// owning image's resolution; declared `bbox`/`area` are ignored and
/// recomputed from the mask.
///
/// Throws ParseError (with byte offset) for malformed JSON, SchemaError for
/// structural problems, and IntegrityError listing offending annotation ids
/// for dangling references or mask/image size mismatches.
Dataset parse_dataset(std::string_view json, ParseReport* report = nullptr);

/// Compact COCO JSON with a pinned key order:
///   top level: images, annotations, categories
///   image: id, width, height, file_name
///   annotation: id, image_id, category_id, segmentation{size, counts},
///               area, bbox, iscrowd, provenance
///   category: id, name, frequency (only when the band is known)
/// Equal datasets serialize to identical bytes.
std::string serialize_dataset(const Dataset& dataset);

Dataset load_dataset(const std::filesystem::path& path, ParseReport* report = nullptr);
void save_dataset(const std::filesystem::path& path, const Dataset& dataset);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace pastekit

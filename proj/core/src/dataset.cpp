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

#include "pastekit/dataset.hpp"

#include <fstream>
#include <iterator>
#include <unordered_set>

#include "json_util.hpp"
#include "pastekit/polygon.hpp"

namespace pastekit {

using detail::as_dimension;
using detail::as_double;
using detail::as_int;
using detail::as_string;
using detail::json;
using detail::ordered_json;
using detail::require;

std::string_view to_string(FrequencyBand band) noexcept {
  switch (band) {
    case FrequencyBand::Rare: return "rare";
    case FrequencyBand::Common: return "common";
    case FrequencyBand::Frequent: return "frequent";
    case FrequencyBand::Unknown: break;
  }
  return "unknown";
}

std::optional<FrequencyBand> parse_frequency_band(std::string_view text) noexcept {
  if (text == "r" || text == "rare") return FrequencyBand::Rare;
  if (text == "c" || text == "common") return FrequencyBand::Common;
  if (text == "f" || text == "frequent") return FrequencyBand::Frequent;
  if (text == "unknown") return FrequencyBand::Unknown;
  return std::nullopt;
}

std::string_view to_string(Provenance p) noexcept {
  return p == Provenance::Pasted ? "pasted" : "original";
}

Annotation Annotation::from_mask(std::int64_t id, std::int64_t image_id,
                                 std::int64_t category_id, RleMask mask,
                                 Provenance provenance) {
  const BoxArea ba = bbox_and_area(mask);
  return Annotation{id, image_id, category_id, std::move(mask), ba.bbox, ba.area, provenance};
}

const ImageInfo* Dataset::find_image(std::int64_t id) const noexcept {
  for (const auto& img : images) {
    if (img.id == id) return &img;
  }
  return nullptr;
}

const Category* Dataset::find_category(std::int64_t id) const noexcept {
  for (const auto& cat : categories) {
    if (cat.id == id) return &cat;
  }
  return nullptr;
}

std::unordered_map<std::int64_t, std::vector<std::size_t>> Dataset::annotations_by_image() const {
  std::unordered_map<std::int64_t, std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < annotations.size(); ++i) {
    out[annotations[i].image_id].push_back(i);
  }
  return out;
}

namespace {

const json& require_array(const json& root, const char* key) {
  const json& v = require(root, key, "$");
  if (!v.is_array()) throw SchemaError(std::string("$.") + key, "expected an array");
  return v;
}

RleMask segmentation_to_mask(const json& seg, const ImageInfo& image, const std::string& path) {
  if (seg.is_array()) {
    std::vector<Polygon> polys;
    polys.reserve(seg.size());
    for (std::size_t p = 0; p < seg.size(); ++p) {
      const std::string ppath = path + "[" + std::to_string(p) + "]";
      if (!seg[p].is_array()) throw SchemaError(ppath, "expected a polygon coordinate list");
      Polygon poly;
      poly.reserve(seg[p].size());
      for (std::size_t k = 0; k < seg[p].size(); ++k) {
        poly.push_back(as_double(seg[p][k], ppath + "[" + std::to_string(k) + "]"));
      }
      polys.push_back(std::move(poly));
    }
    return rle_encode(rasterize_polygons(polys, image.height, image.width));
  }
  if (seg.is_object()) return detail::mask_from_json(seg, path);
  throw SchemaError(path, "expected a polygon list or an RLE object");
}

}  // namespace

Dataset parse_dataset(std::string_view text, ParseReport* report) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), e.byte);
  }
  if (!root.is_object()) throw SchemaError("$", "expected a JSON object");

  Dataset d;

  const json& images = require_array(root, "images");
  d.images.reserve(images.size());
  std::unordered_map<std::int64_t, std::size_t> image_index;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const std::string path = "$.images[" + std::to_string(i) + "]";
    const json& j = images[i];
    ImageInfo info;
    info.id = as_int(require(j, "id", path), path + ".id");
    info.width = as_dimension(require(j, "width", path), path + ".width");
    info.height = as_dimension(require(j, "height", path), path + ".height");
    info.file_name = as_string(require(j, "file_name", path), path + ".file_name");
    if (info.id <= 0) throw SchemaError(path + ".id", "image ids must be positive");
    if (!image_index.emplace(info.id, d.images.size()).second) {
      throw SchemaError(path + ".id", "duplicate image id " + std::to_string(info.id));
    }
    d.images.push_back(std::move(info));
  }

  const json& categories = require_array(root, "categories");
  std::unordered_set<std::int64_t> category_ids;
  for (std::size_t i = 0; i < categories.size(); ++i) {
    const std::string path = "$.categories[" + std::to_string(i) + "]";
    const json& j = categories[i];
    Category cat;
    cat.id = as_int(require(j, "id", path), path + ".id");
    cat.name = as_string(require(j, "name", path), path + ".name");
    if (const auto it = j.find("frequency"); it != j.end()) {
      const auto band = parse_frequency_band(as_string(*it, path + ".frequency"));
      if (!band) throw SchemaError(path + ".frequency", "unknown frequency tag");
      cat.band = *band;
    }
    if (cat.id <= 0) throw SchemaError(path + ".id", "category ids must be positive");
    if (!category_ids.insert(cat.id).second) {
      throw SchemaError(path + ".id", "duplicate category id " + std::to_string(cat.id));
    }
    d.categories.push_back(std::move(cat));
  }

  const json& annotations = require_array(root, "annotations");
  d.annotations.reserve(annotations.size());
  std::vector<std::int64_t> dangling;
  std::vector<std::int64_t> size_mismatch;
  std::unordered_set<std::int64_t> annotation_ids;
  for (std::size_t i = 0; i < annotations.size(); ++i) {
    const std::string path = "$.annotations[" + std::to_string(i) + "]";
    const json& j = annotations[i];
    const std::int64_t id = as_int(require(j, "id", path), path + ".id");
    const std::int64_t image_id = as_int(require(j, "image_id", path), path + ".image_id");
    const std::int64_t category_id =
        as_int(require(j, "category_id", path), path + ".category_id");
    if (id <= 0) throw SchemaError(path + ".id", "annotation ids must be positive");
    if (!annotation_ids.insert(id).second) {
      throw SchemaError(path + ".id", "duplicate annotation id " + std::to_string(id));
    }
    const auto img = image_index.find(image_id);
    if (img == image_index.end() || !category_ids.contains(category_id)) {
      dangling.push_back(id);
      continue;
    }
    const ImageInfo& info = d.images[img->second];
    RleMask mask = segmentation_to_mask(require(j, "segmentation", path), info,
                                        path + ".segmentation");
    if (mask.height() != info.height || mask.width() != info.width) {
      size_mismatch.push_back(id);
      continue;
    }
    Provenance prov = Provenance::Original;
    if (const auto it = j.find("provenance"); it != j.end()) {
      const std::string& tag = as_string(*it, path + ".provenance");
      if (tag == "pasted") {
        prov = Provenance::Pasted;
      } else if (tag != "original") {
        throw SchemaError(path + ".provenance", "expected \"original\" or \"pasted\"");
      }
    }
    Annotation ann = Annotation::from_mask(id, image_id, category_id, std::move(mask), prov);
    if (ann.area == 0) {
      if (report) report->dropped_empty.push_back(id);
      continue;
    }
    d.annotations.push_back(std::move(ann));
  }
  if (!dangling.empty()) {
    throw IntegrityError("annotations reference unknown images or categories",
                         std::move(dangling));
  }
  if (!size_mismatch.empty()) {
    throw IntegrityError("RLE mask size differs from its image size", std::move(size_mismatch));
  }
  return d;
}

std::string serialize_dataset(const Dataset& d) {
  ordered_json root = ordered_json::object();
  ordered_json images = ordered_json::array();
  for (const auto& img : d.images) {
    ordered_json j = ordered_json::object();
    j["id"] = img.id;
    j["width"] = img.width;
    j["height"] = img.height;
    j["file_name"] = img.file_name;
    images.push_back(std::move(j));
  }
  ordered_json annotations = ordered_json::array();
  for (const auto& ann : d.annotations) {
    ordered_json j = ordered_json::object();
    j["id"] = ann.id;
    j["image_id"] = ann.image_id;
    j["category_id"] = ann.category_id;
    j["segmentation"] = detail::mask_to_json(ann.mask);
    j["area"] = ann.area;
    j["bbox"] = {ann.bbox.x, ann.bbox.y, ann.bbox.w, ann.bbox.h};
    j["iscrowd"] = 0;
    j["provenance"] = std::string(to_string(ann.provenance));
    annotations.push_back(std::move(j));
  }
  ordered_json categories = ordered_json::array();
  for (const auto& cat : d.categories) {
    ordered_json j = ordered_json::object();
    j["id"] = cat.id;
    j["name"] = cat.name;
    if (cat.band != FrequencyBand::Unknown) {
      j["frequency"] = std::string(1, to_string(cat.band).front());
    }
    categories.push_back(std::move(j));
  }
  root["images"] = std::move(images);
  root["annotations"] = std::move(annotations);
  root["categories"] = std::move(categories);
  return root.dump() + "\n";
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("short write to " + path.string());
}

Dataset load_dataset(const std::filesystem::path& path, ParseReport* report) {
  return parse_dataset(read_text_file(path), report);
}

void save_dataset(const std::filesystem::path& path, const Dataset& dataset) {
  write_text_file(path, serialize_dataset(dataset));
}

}  // namespace pastekit

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

#include "pastekit/validate.hpp"

#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "json_util.hpp"

namespace pastekit {
namespace {

std::string box_text(const BBox& b) {
  return "[" + std::to_string(b.x) + "," + std::to_string(b.y) + "," + std::to_string(b.w) +
         "," + std::to_string(b.h) + "]";
}

bool number_equals(const detail::json& v, std::int64_t expected) {
  return v.is_number() && v.get<double>() == static_cast<double>(expected);
}

}  // namespace

std::vector<ValidationIssue> validate_dataset(const Dataset& d) {
  std::vector<ValidationIssue> issues;

  std::unordered_map<std::int64_t, const ImageInfo*> images;
  for (const auto& img : d.images) {
    if (img.id <= 0) issues.push_back({"bad_id", "image id " + std::to_string(img.id), {}});
    if (img.width <= 0 || img.height <= 0) {
      issues.push_back({"bad_dimensions", "image " + std::to_string(img.id), {}});
    }
    if (!images.emplace(img.id, &img).second) {
      issues.push_back({"duplicate_id", "image id " + std::to_string(img.id), {}});
    }
  }
  std::unordered_set<std::int64_t> categories;
  for (const auto& cat : d.categories) {
    if (cat.id <= 0) issues.push_back({"bad_id", "category id " + std::to_string(cat.id), {}});
    if (!categories.insert(cat.id).second) {
      issues.push_back({"duplicate_id", "category id " + std::to_string(cat.id), {}});
    }
  }

  std::unordered_set<std::int64_t> annotation_ids;
  for (const auto& ann : d.annotations) {
    const std::string who = "annotation " + std::to_string(ann.id);
    if (ann.id <= 0) issues.push_back({"bad_id", who, ann.id});
    if (!annotation_ids.insert(ann.id).second) issues.push_back({"duplicate_id", who, ann.id});

    const auto img = images.find(ann.image_id);
    if (img == images.end()) {
      issues.push_back({"dangling_reference",
                        who + " references missing image " + std::to_string(ann.image_id),
                        ann.id});
    } else if (ann.mask.height() != img->second->height ||
               ann.mask.width() != img->second->width) {
      issues.push_back({"mask_size_mismatch", who + " mask is not at image resolution", ann.id});
    }
    if (!categories.contains(ann.category_id)) {
      issues.push_back({"dangling_reference",
                        who + " references missing category " +
                            std::to_string(ann.category_id),
                        ann.id});
    }
    if (!rle_is_canonical(ann.mask.height(), ann.mask.width(), ann.mask.counts())) {
      issues.push_back({"rle_invalid", who + " has non-canonical RLE counts", ann.id});
    }
    const BoxArea truth = bbox_and_area(ann.mask);
    if (truth.area == 0) issues.push_back({"empty_mask", who + " has an empty mask", ann.id});
    if (ann.area != truth.area) {
      issues.push_back({"area_mismatch",
                        who + " area " + std::to_string(ann.area) + " != mask popcount " +
                            std::to_string(truth.area),
                        ann.id});
    }
    if (ann.bbox != truth.bbox) {
      issues.push_back({"bbox_mismatch",
                        who + " bbox " + box_text(ann.bbox) + " != tight bound " +
                            box_text(truth.bbox),
                        ann.id});
    }
  }
  return issues;
}

std::vector<ValidationIssue> validate_dataset_json(std::string_view text) {
  Dataset d;
  ParseReport report;
  try {
    d = parse_dataset(text, &report);
  } catch (const IntegrityError& e) {
    std::vector<ValidationIssue> issues;
    for (const auto id : e.annotation_ids()) issues.push_back({e.kind(), e.what(), id});
    return issues;
  } catch (const Error& e) {
    return {{e.kind(), e.what(), {}}};
  }

  std::vector<ValidationIssue> issues = validate_dataset(d);
  for (const auto id : report.dropped_empty) {
    issues.push_back({"empty_mask", "annotation " + std::to_string(id) + " has an empty mask", id});
  }

  std::unordered_map<std::int64_t, const Annotation*> by_id;
  for (const auto& ann : d.annotations) by_id.emplace(ann.id, &ann);

  // parse_dataset already accepted the document, so the shape is known good.
  const auto root = detail::json::parse(text.begin(), text.end());
  for (const auto& raw : root.at("annotations")) {
    const auto id = detail::as_int(raw.at("id"), "$.annotations[].id");
    const auto found = by_id.find(id);
    if (found == by_id.end()) continue;
    const Annotation& ann = *found->second;
    const std::string who = "annotation " + std::to_string(id);
    if (const auto it = raw.find("area"); it != raw.end()) {
      if (!number_equals(*it, static_cast<std::int64_t>(ann.area))) {
        issues.push_back({"area_mismatch",
                          who + " declares area " + it->dump() + ", mask popcount is " +
                              std::to_string(ann.area),
                          id});
      }
    }
    if (const auto it = raw.find("bbox"); it != raw.end()) {
      const bool ok = it->is_array() && it->size() == 4 && number_equals((*it)[0], ann.bbox.x) &&
                      number_equals((*it)[1], ann.bbox.y) &&
                      number_equals((*it)[2], ann.bbox.w) && number_equals((*it)[3], ann.bbox.h);
      if (!ok) {
        issues.push_back({"bbox_mismatch",
                          who + " declares bbox " + it->dump() + ", tight bound is " +
                              box_text(ann.bbox),
                          id});
      }
    }
    const auto& seg = raw.at("segmentation");
    if (seg.is_object()) {
      const auto& counts = seg.at("counts");
      const bool canonical =
          counts.is_string() ? counts.get<std::string>() == rle_compress_string(ann.mask)
                             : counts.size() == ann.mask.counts().size();
      if (!canonical) {
        issues.push_back({"rle_noncanonical", who + " counts are not in canonical form", id});
      }
    }
  }
  return issues;
}

}  // namespace pastekit

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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pastekit/dataset.hpp"

namespace pastekit {

struct ValidationIssue {
  std::string code;  // e.g. "bbox_mismatch", "dangling_reference"
  std::string message;
  std::optional<std::int64_t> annotation_id;
};

/// Checks every Dataset invariant: unique positive ids, referential
/// integrity, mask size equals image size, canonical RLE, bbox equal to the
/// tight bound of the mask, area equal to its popcount, and area > 0.
std::vector<ValidationIssue> validate_dataset(const Dataset& dataset);

/// Validates a COCO JSON document as written on disk. On top of
/// validate_dataset this compares each annotation's declared `area` and
/// `bbox` with the values implied by its segmentation, flags masks that
/// rasterize empty, and flags compressed counts that are not in canonical
/// form. Parse failures are reported as a single issue.
std::vector<ValidationIssue> validate_dataset_json(std::string_view json);

}  // namespace pastekit

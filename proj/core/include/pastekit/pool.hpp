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
#include <vector>

#include "pastekit/dataset.hpp"
#include "pastekit/rle.hpp"

namespace pastekit {

enum class InstanceSource { Generated, Retrieved };

std::string_view to_string(InstanceSource source) noexcept;
std::optional<InstanceSource> parse_instance_source(std::string_view text) noexcept;

/// One segmenter's foreground for an instance image, with its precomputed
/// image-text similarity score.
struct CandidateMask {
  std::string segmenter;
  RleMask mask;
  double clip_score = 0.0;

  friend bool operator==(const CandidateMask&, const CandidateMask&) = default;
};

/// An acquired object instance. `chosen` and `clip_score` are unset until
/// mask selection runs; afterwards clip_score == candidates[*chosen].clip_score.
struct InstanceRecord {
  std::string id;
  std::int64_t category_id = 0;
  InstanceSource source = InstanceSource::Generated;
  std::string image_path;
  std::int32_t width = 0;
  std::int32_t height = 0;
  std::vector<CandidateMask> candidates;
  std::optional<std::size_t> chosen;
  std::optional<double> clip_score;

  /// The chosen candidate, or the best-scoring one if selection has not run.
  const CandidateMask& selected() const;
  double selected_score() const { return selected().clip_score; }

  friend bool operator==(const InstanceRecord&, const InstanceRecord&) = default;
};

struct PoolManifest {
  std::vector<InstanceRecord> records;
  /// Category table the records were checked against; empty when the
  /// manifest was loaded without one.
  std::vector<Category> categories;

  friend bool operator==(const PoolManifest&, const PoolManifest&) = default;
};

/// Parses newline-delimited JSON, one record per line (blank lines are
/// skipped):
///
///   {"id", "category_id", "source", "image_path", "width", "height",
///    "candidates": [{"segmenter", "clip_score", "mask": {"size", "counts"}}],
///    "chosen"?, "clip_score"?}
///
/// Every bad line is collected and reported together in an IngestError:
/// malformed JSON, missing fields, empty candidate lists, masks not at the
/// image resolution, duplicate ids, and (when `categories` is non-empty)
/// unknown category ids. Image files are not touched.
PoolManifest parse_manifest(std::string_view text, std::span<const Category> categories = {});
PoolManifest load_manifest(const std::filesystem::path& path,
                           std::span<const Category> categories = {});

/// One line per record, keys in the order shown for parse_manifest.
std::string serialize_manifest(const PoolManifest& pool);
void save_manifest(const std::filesystem::path& path, const PoolManifest& pool);

/// Picks the candidate with the highest clip score. Exact ties go to the
/// candidate listed first.
InstanceRecord select_mask_by_clip(InstanceRecord record);
PoolManifest select_all(PoolManifest pool);

}  // namespace pastekit

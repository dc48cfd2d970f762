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

#include "pastekit/pool.hpp"

#include <unordered_map>
#include <unordered_set>

#include "json_util.hpp"

namespace pastekit {

using detail::as_dimension;
using detail::as_double;
using detail::as_int;
using detail::as_string;
using detail::json;
using detail::ordered_json;
using detail::require;

std::string_view to_string(InstanceSource source) noexcept {
  return source == InstanceSource::Retrieved ? "retrieved" : "generated";
}

std::optional<InstanceSource> parse_instance_source(std::string_view text) noexcept {
  if (text == "generated") return InstanceSource::Generated;
  if (text == "retrieved") return InstanceSource::Retrieved;
  return std::nullopt;
}

namespace {

std::size_t argmax_candidate(const std::vector<CandidateMask>& candidates) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (candidates[i].clip_score > candidates[best].clip_score) best = i;
  }
  return best;
}

InstanceRecord record_from_json(const json& j) {
  const std::string path = "$";
  InstanceRecord r;
  r.id = as_string(require(j, "id", path), "id");
  if (r.id.empty()) throw SchemaError("id", "must be non-empty");
  r.category_id = as_int(require(j, "category_id", path), "category_id");
  const auto source = parse_instance_source(as_string(require(j, "source", path), "source"));
  if (!source) throw SchemaError("source", "expected \"generated\" or \"retrieved\"");
  r.source = *source;
  r.image_path = as_string(require(j, "image_path", path), "image_path");
  r.width = as_dimension(require(j, "width", path), "width");
  r.height = as_dimension(require(j, "height", path), "height");

  const json& cands = require(j, "candidates", path);
  if (!cands.is_array()) throw SchemaError("candidates", "expected an array");
  if (cands.empty()) throw SchemaError("candidates", "at least one candidate mask is required");
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const std::string cpath = "candidates[" + std::to_string(i) + "]";
    CandidateMask c;
    c.segmenter = as_string(require(cands[i], "segmenter", cpath), cpath + ".segmenter");
    c.clip_score = as_double(require(cands[i], "clip_score", cpath), cpath + ".clip_score");
    if (c.clip_score < -1.0 || c.clip_score > 1.0) {
      throw SchemaError(cpath + ".clip_score", "must lie in [-1, 1]");
    }
    c.mask = detail::mask_from_json(require(cands[i], "mask", cpath), cpath + ".mask");
    if (c.mask.height() != r.height || c.mask.width() != r.width) {
      throw SchemaError(cpath + ".mask", "mask size differs from the instance image size");
    }
    r.candidates.push_back(std::move(c));
  }

  if (const auto it = j.find("chosen"); it != j.end() && !it->is_null()) {
    const std::int64_t chosen = as_int(*it, "chosen");
    if (chosen < 0 || static_cast<std::size_t>(chosen) >= r.candidates.size()) {
      throw SchemaError("chosen", "index out of range");
    }
    r.chosen = static_cast<std::size_t>(chosen);
    r.clip_score = r.candidates[*r.chosen].clip_score;
    if (const auto s = j.find("clip_score"); s != j.end() && !s->is_null()) {
      if (as_double(*s, "clip_score") != *r.clip_score) {
        throw SchemaError("clip_score", "differs from the chosen candidate's score");
      }
    }
  }
  return r;
}

}  // namespace

const CandidateMask& InstanceRecord::selected() const {
  return candidates.at(chosen ? *chosen : argmax_candidate(candidates));
}

PoolManifest parse_manifest(std::string_view text, std::span<const Category> categories) {
  PoolManifest pool;
  pool.categories.assign(categories.begin(), categories.end());
  std::unordered_set<std::int64_t> known;
  for (const auto& c : categories) known.insert(c.id);

  std::vector<LineIssue> issues;
  std::unordered_map<std::string, std::size_t> first_line;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    try {
      json j;
      try {
        j = json::parse(line.begin(), line.end());
      } catch (const json::parse_error& e) {
        throw ParseError("malformed JSON", e.byte);
      }
      InstanceRecord r = record_from_json(j);
      if (!known.empty() && !known.contains(r.category_id)) {
        throw SchemaError("category_id", "unknown category " + std::to_string(r.category_id));
      }
      const auto [it, fresh] = first_line.emplace(r.id, line_no);
      if (!fresh) {
        throw SchemaError("id", "duplicate id \"" + r.id + "\" (first seen on line " +
                                    std::to_string(it->second) + ")");
      }
      pool.records.push_back(std::move(r));
    } catch (const Error& e) {
      issues.push_back({line_no, e.what()});
    }
  }
  if (!issues.empty()) throw IngestError(std::move(issues));
  return pool;
}

PoolManifest load_manifest(const std::filesystem::path& path,
                           std::span<const Category> categories) {
  return parse_manifest(read_text_file(path), categories);
}

std::string serialize_manifest(const PoolManifest& pool) {
  std::string out;
  for (const auto& r : pool.records) {
    ordered_json j = ordered_json::object();
    j["id"] = r.id;
    j["category_id"] = r.category_id;
    j["source"] = std::string(to_string(r.source));
    j["image_path"] = r.image_path;
    j["width"] = r.width;
    j["height"] = r.height;
    ordered_json cands = ordered_json::array();
    for (const auto& c : r.candidates) {
      ordered_json cj = ordered_json::object();
      cj["segmenter"] = c.segmenter;
      cj["clip_score"] = c.clip_score;
      cj["mask"] = detail::mask_to_json(c.mask);
      cands.push_back(std::move(cj));
    }
    j["candidates"] = std::move(cands);
    if (r.chosen) {
      j["chosen"] = *r.chosen;
      j["clip_score"] = *r.clip_score;
    }
    out += j.dump();
    out += '\n';
  }
  return out;
}

void save_manifest(const std::filesystem::path& path, const PoolManifest& pool) {
  write_text_file(path, serialize_manifest(pool));
}

InstanceRecord select_mask_by_clip(InstanceRecord record) {
  const std::size_t best = argmax_candidate(record.candidates);
  record.chosen = best;
  record.clip_score = record.candidates.at(best).clip_score;
  return record;
}

PoolManifest select_all(PoolManifest pool) {
  for (auto& r : pool.records) r = select_mask_by_clip(std::move(r));
  return pool;
}

}  // namespace pastekit

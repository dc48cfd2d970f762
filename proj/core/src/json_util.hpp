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

// Internal helpers shared by the JSON readers and writers. Not installed.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include <json.hpp>

#include "pastekit/dataset.hpp"
#include "pastekit/rle.hpp"

namespace pastekit::detail {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

inline const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path + "." + key, "missing required key");
  return *it;
}

inline std::int64_t as_int(const json& v, const std::string& path) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9.0e15) {
      return static_cast<std::int64_t>(d);
    }
  }
  throw SchemaError(path, "expected an integer");
}

inline double as_double(const json& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw SchemaError(path, "expected a finite number");
  return d;
}

inline const std::string& as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw SchemaError(path, "expected a string");
  return v.get_ref<const std::string&>();
}

inline std::int32_t as_dimension(const json& v, const std::string& path) {
  const std::int64_t d = as_int(v, path);
  if (d <= 0 || d > std::numeric_limits<std::int32_t>::max()) {
    throw SchemaError(path, "expected a positive dimension");
  }
  return static_cast<std::int32_t>(d);
}

/// `{"size": [h, w], "counts": "..."}` (compressed) or with a list of runs.
inline RleMask mask_from_json(const json& seg, const std::string& path) {
  const json& size = require(seg, "size", path);
  if (!size.is_array() || size.size() != 2) throw SchemaError(path + ".size", "expected [h, w]");
  const auto h = static_cast<std::int32_t>(as_int(size[0], path + ".size[0]"));
  const auto w = static_cast<std::int32_t>(as_int(size[1], path + ".size[1]"));
  if (h < 0 || w < 0) throw SchemaError(path + ".size", "negative dimension");
  const json& counts = require(seg, "counts", path);
  try {
    if (counts.is_string()) return rle_decompress_string(counts.get_ref<const std::string&>(), h, w);
    if (counts.is_array()) {
      std::vector<std::uint32_t> runs;
      runs.reserve(counts.size());
      for (std::size_t i = 0; i < counts.size(); ++i) {
        const std::int64_t c = as_int(counts[i], path + ".counts[" + std::to_string(i) + "]");
        if (c < 0 || c > std::numeric_limits<std::uint32_t>::max()) {
          throw SchemaError(path + ".counts[" + std::to_string(i) + "]", "run out of range");
        }
        runs.push_back(static_cast<std::uint32_t>(c));
      }
      return RleMask::from_counts(h, w, std::move(runs));
    }
  } catch (const FormatError& e) {
    throw SchemaError(path + ".counts", e.what());
  }
  throw SchemaError(path + ".counts", "expected a string or an array of runs");
}

inline ordered_json mask_to_json(const RleMask& mask) {
  ordered_json seg = ordered_json::object();
  seg["size"] = {mask.height(), mask.width()};
  seg["counts"] = rle_compress_string(mask);
  return seg;
}

}  // namespace pastekit::detail

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

#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include <json.hpp>

extern char** environ;

namespace pastekit::cli {
namespace {

using json = nlohmann::json;

constexpr std::string_view kEnvPrefix = "PASTEKIT__";

double real_at(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(path, "expected a finite number");
  return d;
}

std::int64_t int_at(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
  return v.get<std::int64_t>();
}

std::string string_at(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  return v.get<std::string>();
}

void apply_paths(Paths& p, const json& j) {
  if (!j.is_object()) throw ConfigError("paths", "expected an object");
  for (const auto& [key, v] : j.items()) {
    const std::string path = "paths." + key;
    if (key == "pool_manifest") p.pool_manifest = string_at(v, path);
    else if (key == "source_dataset") p.source_dataset = string_at(v, path);
    else if (key == "pool_image_root") p.pool_image_root = string_at(v, path);
    else if (key == "image_root") p.image_root = string_at(v, path);
    else if (key == "output_dir") p.output_dir = string_at(v, path);
    else if (key == "output_dataset") p.output_dataset = string_at(v, path);
    else if (key == "stats") p.stats = string_at(v, path);
    else throw ConfigError(path, "unknown key");
  }
}

void apply_filter(FilterConfig& f, const json& j) {
  if (!j.is_object()) throw ConfigError("filter", "expected an object");
  for (const auto& [key, v] : j.items()) {
    const std::string path = "filter." + key;
    if (key == "clip_threshold") f.clip_threshold = real_at(v, path);
    else if (key == "subtractive") f.subtractive = real_at(v, path);
    else if (key == "area_min") f.area_min = real_at(v, path);
    else if (key == "area_max") f.area_max = real_at(v, path);
    else if (key == "background_dominance") f.background_dominance = real_at(v, path);
    else if (key == "color_tolerance") {
      const auto t = int_at(v, path);
      if (t < 0 || t > 255) throw ConfigError(path, "must lie in [0, 255]");
      f.color_tolerance = static_cast<int>(t);
    } else if (key == "require_background_check_for") {
      if (!v.is_array()) throw ConfigError(path, "expected an array of source tags");
      f.require_background_check_for.clear();
      for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string item = path + "[" + std::to_string(i) + "]";
        const auto src = parse_instance_source(string_at(v[i], item));
        if (!src) throw ConfigError(item, "expected \"generated\" or \"retrieved\"");
        f.require_background_check_for.insert(*src);
      }
    } else {
      throw ConfigError(path, "unknown key");
    }
  }
}

void apply_compose(ComposeConfig& c, const json& j) {
  if (!j.is_object()) throw ConfigError("compose", "expected an object");
  for (const auto& [key, v] : j.items()) {
    const std::string path = "compose." + key;
    if (key == "n_max") {
      const auto n = int_at(v, path);
      if (n < 1 || n > std::numeric_limits<int>::max()) throw ConfigError(path, "must be >= 1");
      c.n_max = static_cast<int>(n);
    } else if (key == "placement") {
      const auto p = parse_placement(string_at(v, path));
      if (!p) throw ConfigError(path, "expected \"random\" or \"reference\"");
      c.placement = *p;
    } else if (key == "seed") {
      if (!v.is_number_unsigned()) throw ConfigError(path, "expected an unsigned 64-bit integer");
      c.seed = v.get<std::uint64_t>();
    } else if (key == "blending") {
      if (string_at(v, path) != "binary") throw ConfigError(path, "only \"binary\" is supported");
      c.blending = Blending::Binary;
    } else if (key == "occlusion_drop_fraction") {
      c.occlusion_drop_fraction = real_at(v, path);
    } else if (key == "repeat") {
      const auto r = int_at(v, path);
      if (r < 0 || r > std::numeric_limits<int>::max()) throw ConfigError(path, "must be >= 0");
      c.repeat = static_cast<int>(r);
    } else if (key == "scale_min") {
      c.scale_clamp.min = real_at(v, path);
    } else if (key == "scale_max") {
      c.scale_clamp.max = real_at(v, path);
    } else {
      throw ConfigError(path, "unknown key");
    }
  }
}

void apply_root(PipelineConfig& cfg, const json& root) {
  if (!root.is_object()) throw ConfigError("$", "expected a JSON object");
  for (const auto& [key, v] : root.items()) {
    if (key == "paths") apply_paths(cfg.paths, v);
    else if (key == "filter") apply_filter(cfg.filter, v);
    else if (key == "compose") apply_compose(cfg.compose, v);
    else if (key == "jobs") {
      const auto n = int_at(v, "jobs");
      if (n < 0 || n > 4096) throw ConfigError("jobs", "must lie in [0, 4096]");
      cfg.jobs = static_cast<unsigned>(n);
    } else if (key == "log_level") {
      const auto level = parse_log_level(string_at(v, "log_level"));
      if (!level) throw ConfigError("log_level", "expected error, warn, info or debug");
      cfg.log_level = *level;
    } else {
      throw ConfigError(key, "unknown key");
    }
  }
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

std::optional<LogLevel> parse_log_level(std::string_view text) noexcept {
  if (text == "error") return LogLevel::Error;
  if (text == "warn") return LogLevel::Warn;
  if (text == "info") return LogLevel::Info;
  if (text == "debug") return LogLevel::Debug;
  return std::nullopt;
}

void apply_config_json(PipelineConfig& cfg, std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), e.byte);
  }
  apply_root(cfg, root);
}

void apply_env_overrides(PipelineConfig& cfg, const std::map<std::string, std::string>& env) {
  for (const auto& [name, raw] : env) {
    if (!name.starts_with(kEnvPrefix)) continue;
    const std::string rest = lower(name.substr(kEnvPrefix.size()));
    json value = json::parse(raw, nullptr, /*allow_exceptions=*/false);
    if (value.is_discarded()) value = raw;

    json patch = json::object();
    if (const auto sep = rest.find("__"); sep != std::string::npos) {
      patch[rest.substr(0, sep)][rest.substr(sep + 2)] = value;
    } else {
      patch[rest] = value;
    }
    try {
      apply_root(cfg, patch);
    } catch (const ConfigError& e) {
      throw ConfigError(e.key_path(), std::string("from environment variable ") + name + ": " +
                                          e.what());
    }
  }
}

std::map<std::string, std::string> pastekit_environment() {
  std::map<std::string, std::string> out;
  for (char** e = environ; e && *e; ++e) {
    const std::string_view entry(*e);
    if (!entry.starts_with(kEnvPrefix)) continue;
    const auto eq = entry.find('=');
    if (eq == std::string_view::npos) continue;
    out.emplace(std::string(entry.substr(0, eq)), std::string(entry.substr(eq + 1)));
  }
  return out;
}

void validate_config(const PipelineConfig& cfg) {
  cfg.filter.validate();
  cfg.compose.validate();
}

}  // namespace pastekit::cli

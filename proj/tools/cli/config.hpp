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
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "pastekit/composer.hpp"
#include "pastekit/filter.hpp"

namespace pastekit::cli {

enum class LogLevel { Error, Warn, Info, Debug };

std::optional<LogLevel> parse_log_level(std::string_view text) noexcept;

struct Paths {
  std::filesystem::path pool_manifest;
  std::filesystem::path source_dataset;
  std::filesystem::path pool_image_root;
  std::filesystem::path image_root;
  std::filesystem::path output_dir;
  std::filesystem::path output_dataset;  // default: <output_dir>/annotations.json
  std::filesystem::path stats;
};

/// Everything a pipeline run reads from its config file. Defaults follow the
/// baseline settings: clip threshold 0.21 and up to 20 pastes per image.
struct PipelineConfig {
  Paths paths;
  FilterConfig filter;
  ComposeConfig compose;
  unsigned jobs = 1;
  LogLevel log_level = LogLevel::Info;
};

/// Applies a JSON document on top of `cfg`. Layout:
///
///   {"paths": {...}, "filter": {...}, "compose": {...}, "jobs": N,
///    "log_level": "info"}
///
/// Unknown keys and wrong types throw ConfigError with the dotted key path.
void apply_config_json(PipelineConfig& cfg, std::string_view json);

/// Applies environment overrides: PASTEKIT__SECTION__KEY=value sets
/// `section.key` (PASTEKIT__JOBS sets `jobs`). Values are read as JSON when
/// they parse, otherwise as strings.
void apply_env_overrides(PipelineConfig& cfg, const std::map<std::string, std::string>& env);

/// Snapshot of PASTEKIT__* variables from the process environment.
std::map<std::string, std::string> pastekit_environment();

/// Runs the FilterConfig and ComposeConfig checks.
void validate_config(const PipelineConfig& cfg);

}  // namespace pastekit::cli

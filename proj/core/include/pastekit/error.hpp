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

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pastekit {

/// Base of every error thrown by the library. `kind()` is a stable short tag
/// used in machine-readable error reports.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

/// Malformed JSON or schema violation while reading a dataset or config.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t byte_offset)
      : Error("parse", message + " (at byte " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

/// Annotations referencing images or categories that do not exist.
class IntegrityError : public Error {
 public:
  IntegrityError(const std::string& message, std::vector<std::int64_t> annotation_ids)
      : Error("integrity", message), annotation_ids_(std::move(annotation_ids)) {}

  const std::vector<std::int64_t>& annotation_ids() const noexcept { return annotation_ids_; }

 private:
  std::vector<std::int64_t> annotation_ids_;
};

/// Invalid RLE counts or compressed strings.
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& message) : Error("format", message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error("io", message) {}
};

/// One bad line of a newline-delimited manifest.
struct LineIssue {
  std::size_t line;  // 1-based
  std::string message;
};

class IngestError : public Error {
 public:
  explicit IngestError(std::vector<LineIssue> issues);

  const std::vector<LineIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<LineIssue> issues_;
};

/// Invalid configuration value; `key_path` is dotted, e.g. `filter.area_min`.
class ConfigError : public Error {
 public:
  ConfigError(std::string key_path, const std::string& message)
      : Error("config", key_path + ": " + message), key_path_(std::move(key_path)) {}

  const std::string& key_path() const noexcept { return key_path_; }

 private:
  std::string key_path_;
};

class PlanningError : public Error {
 public:
  explicit PlanningError(const std::string& message) : Error("planning", message) {}
};

}  // namespace pastekit

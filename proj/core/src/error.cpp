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

#include "pastekit/error.hpp"

namespace pastekit {
namespace {

std::string summarize(const std::vector<LineIssue>& issues) {
  std::string out = std::to_string(issues.size()) + " invalid manifest line(s)";
  constexpr std::size_t kShown = 5;
  for (std::size_t i = 0; i < issues.size() && i < kShown; ++i) {
    out += i == 0 ? ": " : "; ";
    out += "line " + std::to_string(issues[i].line) + ": " + issues[i].message;
  }
  if (issues.size() > kShown) out += "; ...";
  return out;
}

}  // namespace

IngestError::IngestError(std::vector<LineIssue> issues)
    : Error("ingest", summarize(issues)), issues_(std::move(issues)) {}

}  // namespace pastekit

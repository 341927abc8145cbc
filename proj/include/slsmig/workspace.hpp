// Copyright 2026 The slsmig Authors
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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "slsmig/common.hpp"

// Validated file-system primitives shared by every stage and the CLI.
namespace slsmig::ws {

inline constexpr int kReadLineCap = 500;

struct ReadResult {
  std::string content;
  bool truncated = false;
  int total_lines = 0;
  std::optional<std::pair<int, int>> range;
  std::string warning;
};

enum class Validation { kNone, kPython, kJson, kYaml };

const char* validation_name(Validation v);
Validation validation_from_name(std::string_view name);

struct WriteReceipt {
  std::string path;
  std::size_t bytes_written = 0;
  Validation validation = Validation::kNone;
  bool ok = false;
  std::string error;
  int error_line = 0;
};

enum class EntryKind { kFile, kDirectory, kOther };

struct DirEntry {
  std::string path;  // relative to the listed directory
  EntryKind kind = EntryKind::kFile;
};

// Without a range at most kReadLineCap lines are returned. Ranges are
// 1-based and inclusive; an end past EOF is clamped.
ReadResult read_file(const fs::path& path, std::optional<std::pair<int, int>> range = std::nullopt);

// Validation error text and line, or nullopt when `content` is well formed.
std::optional<std::pair<std::string, int>> validate_text(std::string_view content, Validation validation,
                                                         const std::string& filename = "<string>");

WriteReceipt write_file(const fs::path& path, std::string_view content, Validation validation);

WriteReceipt merge_json_key(const fs::path& path, const std::string& key, const Json& value);

std::vector<DirEntry> list_dir(const fs::path& path, bool recursive);

Json to_json(const ReadResult& r);
Json to_json(const WriteReceipt& r);
Json to_json(const std::vector<DirEntry>& entries);

}  // namespace slsmig::ws

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

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace slsmig {

namespace fs = std::filesystem;
using Json = nlohmann::json;

enum class ErrorCode {
  kNotFound,
  kUnreadable,
  kInvalidArgument,
  kParse,
  kPrecondition,
  kConflict,
  kIo,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Canonical JSON text: sorted keys, 2-space indent, LF, trailing newline.
std::string canonical_json(const Json& value);

std::string read_text_file(const fs::path& path);

// Writes through a temporary file in the target directory, then renames.
void write_text_atomic(const fs::path& path, std::string_view content);

// Project-relative path with forward slashes.
std::string relative_path(const fs::path& path, const fs::path& root);

std::vector<std::string> split_lines(std::string_view text);

std::string trim(std::string_view text);

bool starts_with(std::string_view text, std::string_view prefix);
bool ends_with(std::string_view text, std::string_view suffix);

std::string to_lower(std::string_view text);
std::string to_upper(std::string_view text);

int line_of_offset(std::string_view text, std::size_t offset);

}  // namespace slsmig

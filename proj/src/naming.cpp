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

#include "slsmig/naming.hpp"

#include <cctype>
#include <vector>

#include "slsmig/common.hpp"

namespace slsmig::naming {
namespace {

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
bool is_lower_or_digit(char c) {
  return std::islower(static_cast<unsigned char>(c)) != 0 ||
         std::isdigit(static_cast<unsigned char>(c)) != 0;
}

std::vector<std::string> words(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (!is_alnum(c)) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
      continue;
    }
    // Split "orderItems" and "HTTPServer" style boundaries.
    if (is_upper(c) && !cur.empty()) {
      bool prev_lower = is_lower_or_digit(text[i - 1]);
      bool next_lower = i + 1 < text.size() && std::islower(static_cast<unsigned char>(text[i + 1]));
      if (prev_lower || (is_upper(text[i - 1]) && next_lower)) {
        out.push_back(std::move(cur));
        cur.clear();
      }
    }
    cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

std::string slug(std::string_view text) { return join(words(text), "-"); }

std::string pascal(std::string_view slug_text) {
  std::string out;
  for (auto& w : words(slug_text)) {
    w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
    out += w;
  }
  return out;
}

std::string upper_snake(std::string_view text) { return to_upper(join(words(text), "_")); }

std::string lambda_name(std::string_view method, std::string_view path) {
  std::vector<std::string> parts;
  for (const auto& segment : split_lines([&] {
         std::string s(path);
         for (auto& c : s) {
           if (c == '/') c = '\n';
         }
         return s;
       }())) {
    if (segment.empty()) continue;
    if (segment.size() > 2 && segment.front() == '{' && segment.back() == '}') {
      parts.push_back("by-" + slug(segment.substr(1, segment.size() - 2)));
    } else {
      std::string s = slug(segment);
      if (!s.empty()) parts.push_back(s);
    }
  }
  if (parts.empty()) parts.push_back("root");
  return to_lower(method) + "-" + join(parts, "-");
}

std::string function_logical_id(std::string_view lambda_name) { return pascal(lambda_name) + "Function"; }
std::string table_logical_id(std::string_view table_name) { return pascal(table_name) + "Table"; }
std::string bucket_logical_id(std::string_view bucket_name) { return pascal(bucket_name) + "Bucket"; }
std::string queue_logical_id(std::string_view queue_name) { return pascal(queue_name); }
std::string rule_logical_id(std::string_view rule_name) { return pascal(rule_name); }

std::string permission_logical_id(std::string_view rule_name, std::string_view target_lambda) {
  return pascal(rule_name) + pascal(target_lambda) + "Permission";
}

std::string table_env_var(std::string_view table_name) { return upper_snake(table_name) + "_TABLE"; }
std::string bucket_env_var(std::string_view bucket_name) { return upper_snake(bucket_name) + "_BUCKET"; }
std::string queue_env_var(std::string_view queue_name) { return upper_snake(queue_name) + "_URL"; }
std::string function_env_var(std::string_view lambda_name) {
  return upper_snake(lambda_name) + "_FUNCTION_NAME";
}

}  // namespace slsmig::naming

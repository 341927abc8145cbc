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

#include "slsmig/workspace.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>

#include "slsmig/python_ast.hpp"

namespace slsmig::ws {

const char* validation_name(Validation v) {
  switch (v) {
    case Validation::kNone:
      return "none";
    case Validation::kPython:
      return "python";
    case Validation::kJson:
      return "json";
    case Validation::kYaml:
      return "yaml";
  }
  return "none";
}

Validation validation_from_name(std::string_view name) {
  if (name == "none") return Validation::kNone;
  if (name == "python") return Validation::kPython;
  if (name == "json") return Validation::kJson;
  if (name == "yaml") return Validation::kYaml;
  throw Error(ErrorCode::kInvalidArgument, "unknown validation mode: " + std::string(name));
}

namespace {

bool looks_binary(std::string_view bytes) {
  return bytes.substr(0, 8192).find('\0') != std::string_view::npos;
}

std::string join_lines(const std::vector<std::string>& lines, std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    out += lines[i];
    out += '\n';
  }
  return out;
}

}  // namespace

ReadResult read_file(const fs::path& path, std::optional<std::pair<int, int>> range) {
  std::error_code ec;
  if (!fs::exists(path, ec)) throw Error(ErrorCode::kNotFound, "no such file: " + path.string());
  if (!fs::is_regular_file(path, ec)) throw Error(ErrorCode::kUnreadable, "not a regular file: " + path.string());
  std::string bytes = read_text_file(path);
  if (looks_binary(bytes)) throw Error(ErrorCode::kUnreadable, "binary file: " + path.string());
  auto lines = split_lines(bytes);
  ReadResult r;
  r.total_lines = static_cast<int>(lines.size());
  if (range) {
    auto [start, end] = *range;
    if (start < 1 || end < start) {
      throw Error(ErrorCode::kInvalidArgument,
                  "invalid line range " + std::to_string(start) + "-" + std::to_string(end));
    }
    std::size_t b = std::min<std::size_t>(static_cast<std::size_t>(start - 1), lines.size());
    std::size_t e = std::min<std::size_t>(static_cast<std::size_t>(end), lines.size());
    r.content = join_lines(lines, b, e);
    r.range = range;
    return r;
  }
  std::size_t n = std::min<std::size_t>(lines.size(), kReadLineCap);
  r.content = join_lines(lines, 0, n);
  if (lines.size() > static_cast<std::size_t>(kReadLineCap)) {
    r.truncated = true;
    r.warning = "file has " + std::to_string(lines.size()) + " lines; showing the first " +
                std::to_string(kReadLineCap) + ". Pass a line range to read the rest.";
  }
  return r;
}

std::optional<std::pair<std::string, int>> validate_text(std::string_view content, Validation validation,
                                                         const std::string& filename) {
  switch (validation) {
    case Validation::kNone:
      return std::nullopt;
    case Validation::kPython: {
      auto problem = python::check_syntax(content, filename);
      if (!problem) return std::nullopt;
      return std::make_pair("line " + std::to_string(problem->line) + ": " + problem->message, problem->line);
    }
    case Validation::kJson: {
      try {
        Json parsed = Json::parse(content);
        (void)parsed;
        return std::nullopt;
      } catch (const Json::parse_error& e) {
        return std::make_pair(std::string(e.what()), line_of_offset(content, e.byte > 0 ? e.byte - 1 : 0));
      }
    }
    case Validation::kYaml: {
      try {
        (void)YAML::LoadAll(std::string(content));
      } catch (const YAML::Exception& e) {
        return std::make_pair(std::string(e.what()), e.mark.line + 1);
      }
      // yaml-cpp accepts some malformed input (unterminated quotes, a
      // mapping key after a top-level sequence); a second, stricter pass.
      if (auto p = python::check_yaml(content)) return std::make_pair(p->message, p->line);
      return std::nullopt;
    }
  }
  return std::nullopt;
}

WriteReceipt write_file(const fs::path& path, std::string_view content, Validation validation) {
  WriteReceipt r;
  r.path = path.generic_string();
  r.validation = validation;
  if (auto problem = validate_text(content, validation, path.filename().string())) {
    r.error = problem->first;
    r.error_line = problem->second;
    return r;
  }
  write_text_atomic(path, content);
  r.bytes_written = content.size();
  r.ok = true;
  return r;
}

WriteReceipt merge_json_key(const fs::path& path, const std::string& key, const Json& value) {
  Json doc = Json::object();
  std::error_code ec;
  if (fs::exists(path, ec)) {
    std::string text = read_text_file(path);
    try {
      doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw Error(ErrorCode::kParse, "existing file is not valid JSON: " + std::string(e.what()));
    }
    if (!doc.is_object()) {
      throw Error(ErrorCode::kConflict, "existing JSON root is not an object: " + path.string());
    }
  }
  doc[key] = value;
  std::string text = canonical_json(doc);
  write_text_atomic(path, text);
  WriteReceipt r;
  r.path = path.generic_string();
  r.bytes_written = text.size();
  r.validation = Validation::kJson;
  r.ok = true;
  return r;
}

namespace {

void list_into(const fs::path& root, const fs::path& dir, bool recursive, std::vector<DirEntry>& out) {
  std::vector<fs::directory_entry> entries;
  for (const auto& e : fs::directory_iterator(dir)) entries.push_back(e);
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return a.path().filename().generic_string() < b.path().filename().generic_string();
  });
  for (const auto& e : entries) {
    std::error_code ec;
    EntryKind kind = e.is_directory(ec) ? EntryKind::kDirectory
                     : e.is_regular_file(ec) ? EntryKind::kFile
                                             : EntryKind::kOther;
    out.push_back({relative_path(e.path(), root), kind});
    if (recursive && kind == EntryKind::kDirectory && !e.is_symlink(ec)) list_into(root, e.path(), true, out);
  }
}

}  // namespace

std::vector<DirEntry> list_dir(const fs::path& path, bool recursive) {
  std::error_code ec;
  if (!fs::is_directory(path, ec)) throw Error(ErrorCode::kInvalidArgument, "not a directory: " + path.string());
  std::vector<DirEntry> out;
  list_into(path, path, recursive, out);
  return out;
}

Json to_json(const ReadResult& r) {
  Json j = {{"content", r.content}, {"truncated", r.truncated}, {"total_lines", r.total_lines}};
  j["range"] = r.range ? Json::array({r.range->first, r.range->second}) : Json(nullptr);
  if (!r.warning.empty()) j["warning"] = r.warning;
  return j;
}

Json to_json(const WriteReceipt& r) {
  Json j = {{"path", r.path},
            {"bytes_written", r.bytes_written},
            {"validation", validation_name(r.validation)},
            {"ok", r.ok}};
  if (!r.ok) {
    j["error"] = r.error;
    j["error_line"] = r.error_line;
  }
  return j;
}

Json to_json(const std::vector<DirEntry>& entries) {
  Json arr = Json::array();
  for (const auto& e : entries) {
    const char* kind = e.kind == EntryKind::kDirectory ? "dir" : e.kind == EntryKind::kFile ? "file" : "other";
    arr.push_back({{"path", e.path}, {"kind", kind}});
  }
  return arr;
}

}  // namespace slsmig::ws

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

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "slsmig/source_facts.hpp"

namespace slsmig::facts::detail {

// Language front end over one project snapshot. Parsing happens once at
// construction; the query methods are pure over the parsed state.
class FrontEnd {
 public:
  virtual ~FrontEnd() = default;

  virtual std::vector<EntryPoint> entry_points(const FrameworkConfig& config) = 0;
  virtual std::vector<CallEdge> call_edges() = 0;
  virtual std::vector<FileSymbols> symbols() = 0;

  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 protected:
  void warn(std::string code, std::string file, int line, std::string message) {
    diagnostics_.push_back({"warning", std::move(code), std::move(file), line, std::move(message)});
  }

  std::vector<Diagnostic> diagnostics_;
};

std::unique_ptr<FrontEnd> make_python_frontend(const ProjectSnapshot& project);
std::unique_ptr<FrontEnd> make_js_frontend(const ProjectSnapshot& project);

std::unique_ptr<FrontEnd> make_frontend(const ProjectSnapshot& project);

// "a/b/c.py" -> "a/b"; "c.py" -> "".
std::string parent_dir(const std::string& rel);

// Lexically normalises "a/./b/../c" -> "a/c"; empty when it escapes the root.
std::optional<std::string> normalize_rel(const std::string& rel);

// "/items/<int:id>" or "/items/:id" -> "/items/{id}".
std::string to_template_path(const std::string& path);

void sort_entry_points(std::vector<EntryPoint>& eps);
void sort_diagnostics(std::vector<Diagnostic>& diags);

}  // namespace slsmig::facts::detail

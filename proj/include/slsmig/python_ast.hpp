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
#include <string_view>

#include "slsmig/common.hpp"

namespace slsmig::python {

struct SyntaxProblem {
  std::string message;
  int line = 0;
  int column = 0;
};

// Result of parsing Python source with the reference grammar.
// On success `tree` holds the module node as JSON: every node is an object
// with "_t" (node class name), its fields, and "lineno"/"end_lineno" when
// the node carries positions.
struct ParseResult {
  std::optional<Json> tree;
  std::optional<SyntaxProblem> error;
};

ParseResult parse(std::string_view source, std::string_view filename);

std::optional<SyntaxProblem> check_syntax(std::string_view source, std::string_view filename);

// Strict YAML syntax check through the interpreter's PyYAML composer; tags
// are not resolved, so CloudFormation short forms pass. Returns nullopt when
// the text is well formed or PyYAML is not importable.
std::optional<SyntaxProblem> check_yaml(std::string_view source);

}  // namespace slsmig::python

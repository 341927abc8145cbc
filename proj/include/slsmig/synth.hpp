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

#include <string>
#include <vector>

#include "slsmig/blueprint.hpp"
#include "slsmig/common.hpp"
#include "slsmig/sam_model.hpp"

// Template and handler-stub generation from a blueprint.
namespace slsmig::synth {

struct SynthOptions {
  int function_timeout = 30;
  int function_memory = 256;
};

// Name of the list of generated paths kept in the output directory; files
// listed there may be overwritten by a later synthesis.
inline constexpr const char* kGeneratedManifest = ".slsmig-generated";

sam::Template synthesize_template(const planner::Blueprint& b, const SynthOptions& options = {});

struct GeneratedFile {
  std::string path;  // relative to the output directory
  std::string content;
};

std::vector<GeneratedFile> render_stubs(const planner::Blueprint& b);

// Writes template.yaml and all stubs. Throws kConflict, writing nothing,
// when a target exists that an earlier synthesis did not produce.
void synthesize_workspace(const planner::Blueprint& b, const fs::path& out_dir, const SynthOptions& options = {});

// Stubs only (same collision rule).
void synthesize_stubs(const planner::Blueprint& b, const fs::path& out_dir);

// Helpers shared with the validator.
std::string code_uri(const std::string& lambda_name);
std::string handler_property(const std::string& runtime);
std::string handler_file(const std::string& runtime);
std::string layer_subdir(const std::string& runtime);  // "python" or "nodejs/node_modules"
bool is_node(const std::string& runtime);

// Template value bound to a blueprint environment variable.
sam::OJson env_var_value(const planner::Blueprint& b, const std::string& var);

// Named policy statement granting the access behind a blueprint env var;
// null when the variable implies no policy.
sam::OJson policy_for_env_var(const planner::Blueprint& b, const std::string& var);

// Filtered third-party dependencies a stub needs (built-ins removed).
std::map<std::string, std::string> stub_dependencies(const planner::LambdaSpec& spec, const planner::Blueprint& b);

}  // namespace slsmig::synth

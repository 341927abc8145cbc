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
#include <set>
#include <string>
#include <vector>

#include "slsmig/common.hpp"

// Typed model of the SAM/CloudFormation template subset the pipeline emits.
// Property trees are held as insertion-ordered JSON in CloudFormation's long
// intrinsic form ({"Ref": X}, {"Fn::GetAtt": [X, Attr]}, {"Fn::Sub": S}); YAML
// short tags are decoded on parse and re-emitted on serialization.
namespace slsmig::sam {

using OJson = nlohmann::ordered_json;

enum class ResourceKind {
  kFunction,
  kTable,
  kBucket,
  kUserPool,
  kUserPoolClient,
  kApi,
  kQueue,
  kRule,
  kLayerVersion,
  kPermission,
  kUnknown,
};

const char* kind_name(ResourceKind kind);
ResourceKind kind_of_type(std::string_view type);

enum class Severity { kFatal, kWarning };
const char* severity_name(Severity s);

struct Finding {
  std::string check_id;
  Severity severity = Severity::kFatal;
  std::string artifact;  // workspace-relative artifact path
  std::string pointer;   // JSON pointer (or file-relative path for code artifacts)
  std::string message;
  Json mechanical_fix;  // null when no mechanical fix applies
  std::string fix_hint;
};

Json to_json(const Finding& f);
Finding finding_from_json(const Json& j);

struct Resource {
  std::string logical_id;
  std::string type;
  ResourceKind kind = ResourceKind::kUnknown;
  OJson properties = OJson::object();
  // Remaining resource-level keys (DependsOn, Condition, Metadata, ...).
  OJson attributes = OJson::object();
  int line = 0;
};

struct Template {
  // Top-level keys other than Globals/Resources/Outputs, in source order.
  OJson header = OJson::object();
  OJson globals = OJson::object();
  std::vector<Resource> resources;
  OJson outputs = OJson::object();
  std::vector<Finding> parse_warnings;

  const Resource* find(std::string_view logical_id) const;
  Resource* find(std::string_view logical_id);
  std::vector<const Resource*> of_kind(ResourceKind kind) const;
  std::set<std::string> parameter_names() const;
};

enum class RefKind { kRef, kGetAtt, kSub };

struct Reference {
  std::string from;     // logical id, "Outputs.<name>" or "Globals"
  std::string target;   // referenced logical id / parameter
  std::string attribute;  // GetAtt attribute or Sub "X.Attr" suffix
  RefKind kind = RefKind::kRef;
  std::string pointer;
};

struct Intrinsic {
  RefKind kind;
  std::string target;
  std::string attribute;
};

// Interprets a single-key long-form node as Ref/GetAtt; nullopt otherwise.
std::optional<Intrinsic> as_ref(const OJson& node);

OJson make_ref(std::string_view target);
OJson make_getatt(std::string_view target, std::string_view attribute);
OJson make_sub(std::string_view text);

// Throws Error(kParse) with the line on YAML syntax errors or duplicate
// logical ids. Unknown resource types are kept and warned about.
Template parse_template(const std::string& yaml_text, const std::string& artifact = "template.yaml");
Template load_template(const fs::path& path);

std::string serialize_template(const Template& t);

std::vector<Reference> references(const Template& t);

// Names ${X} / ${X.Attr} referenced by a Sub string, excluding ${!literal}.
std::vector<std::string> sub_variables(std::string_view text);

bool is_pseudo_parameter(std::string_view name);

// JSON pointer escaping for one token.
std::string pointer_token(std::string_view token);

// Linting -----------------------------------------------------------------

struct LintData {
  std::set<std::string> reserved_env_vars;
  std::set<std::string> supported_globals;  // "Section.Property"
  std::set<std::string> supported_runtimes = {"python3.12", "nodejs22.x"};
};

// Data compiled in from the versioned lists under data/.
const LintData& default_lint_data();

// Packages pre-installed in the Lambda runtime ("python" or "nodejs").
const std::set<std::string>& builtin_packages(std::string_view family);

std::vector<Finding> lint_template(const Template& t, const LintData& data = default_lint_data());

// 0 clean, 1 warnings only, 2 any fatal.
int exit_code_for(const std::vector<Finding>& findings);

}  // namespace slsmig::sam

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

#include <sstream>

#include "slsmig/lint_data.hpp"
#include "slsmig/sam_model.hpp"

namespace slsmig::sam {
namespace {

std::vector<std::string> data_lines(const char* text) {
  std::vector<std::string> out;
  for (const auto& line : split_lines(text)) {
    std::string t = trim(line);
    if (!t.empty() && t[0] != '#') out.push_back(t);
  }
  return out;
}

Finding fatal(std::string check, std::string pointer, std::string message) {
  Finding f;
  f.check_id = std::move(check);
  f.severity = Severity::kFatal;
  f.artifact = "template.yaml";
  f.pointer = std::move(pointer);
  f.message = std::move(message);
  return f;
}

bool truthy(const OJson& v) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_string()) return to_lower(trim(v.get<std::string>())) == "true";
  return false;
}

// CORS origins are written with embedded quotes ("'*'") for SAM Api resources.
bool wildcard_origin(const OJson& v) {
  if (v.is_array()) {
    for (const auto& item : v) {
      if (wildcard_origin(item)) return true;
    }
    return false;
  }
  if (!v.is_string()) return false;
  std::string s = trim(v.get<std::string>());
  if (s.size() >= 2 && (s.front() == '\'' || s.front() == '"') && s.back() == s.front()) s = s.substr(1, s.size() - 2);
  return trim(s) == "*";
}

void check_cors(const OJson& cors, const std::string& pointer, std::vector<Finding>& out) {
  if (!cors.is_object()) return;
  const char* origin_key = cors.contains("AllowOrigins") ? "AllowOrigins" : "AllowOrigin";
  if (!cors.contains(origin_key) || !cors.contains("AllowCredentials")) return;
  if (wildcard_origin(cors[origin_key]) && truthy(cors["AllowCredentials"])) {
    out.push_back(fatal("L2", pointer,
                        "CORS allows credentials with a wildcard origin; browsers and API Gateway reject this combination"));
  }
}

void check_env(const OJson& props, const std::string& pointer, const std::string& owner, const LintData& data,
               std::vector<Finding>& out) {
  if (!props.is_object() || !props.contains("Environment")) return;
  const OJson& env = props["Environment"];
  if (!env.is_object() || !env.contains("Variables") || !env["Variables"].is_object()) return;
  for (const auto& [name, value] : env["Variables"].items()) {
    if (data.reserved_env_vars.count(name)) {
      out.push_back(fatal("L1", pointer + "/Environment/Variables/" + pointer_token(name),
                          owner + " sets reserved Lambda environment variable " + name));
    }
  }
}

}  // namespace

const LintData& default_lint_data() {
  static const LintData data = [] {
    LintData d;
    for (const auto& v : data_lines(data::kReservedEnvVars)) d.reserved_env_vars.insert(v);
    for (const auto& v : data_lines(data::kSupportedGlobals)) d.supported_globals.insert(v);
    return d;
  }();
  return data;
}

const std::set<std::string>& builtin_packages(std::string_view family) {
  static const std::map<std::string, std::set<std::string>> packages = [] {
    std::map<std::string, std::set<std::string>> m;
    for (const auto& v : data_lines(data::kBuiltinPackages)) {
      auto colon = v.find(':');
      if (colon == std::string::npos) continue;
      m[v.substr(0, colon)].insert(trim(v.substr(colon + 1)));
    }
    return m;
  }();
  static const std::set<std::string> empty;
  auto it = packages.find(std::string(family));
  return it == packages.end() ? empty : it->second;
}

std::vector<Finding> lint_template(const Template& t, const LintData& data) {
  std::vector<Finding> out;

  // L1 reserved environment variables.
  if (t.globals.contains("Function")) {
    check_env(t.globals["Function"], "/Globals/Function", "Globals.Function", data, out);
  }
  for (const auto& r : t.resources) {
    if (r.kind != ResourceKind::kFunction) continue;
    check_env(r.properties, "/Resources/" + pointer_token(r.logical_id) + "/Properties", r.logical_id, data, out);
  }

  // L2 wildcard origin with credentials.
  if (t.globals.contains("Api") && t.globals["Api"].is_object() && t.globals["Api"].contains("Cors")) {
    check_cors(t.globals["Api"]["Cors"], "/Globals/Api/Cors", out);
  }
  if (t.globals.contains("HttpApi") && t.globals["HttpApi"].is_object() &&
      t.globals["HttpApi"].contains("CorsConfiguration")) {
    check_cors(t.globals["HttpApi"]["CorsConfiguration"], "/Globals/HttpApi/CorsConfiguration", out);
  }
  for (const auto& r : t.resources) {
    if (r.kind != ResourceKind::kApi) continue;
    std::string base = "/Resources/" + pointer_token(r.logical_id) + "/Properties/";
    if (r.properties.contains("Cors")) check_cors(r.properties["Cors"], base + "Cors", out);
    if (r.properties.contains("CorsConfiguration")) {
      check_cors(r.properties["CorsConfiguration"], base + "CorsConfiguration", out);
    }
  }

  // L3 unsupported Globals keys.
  for (const auto& [section, body] : t.globals.items()) {
    std::string ptr = "/Globals/" + pointer_token(section);
    bool known_section = false;
    for (const auto& entry : data.supported_globals) {
      if (starts_with(entry, section + ".")) known_section = true;
    }
    if (!known_section) {
      out.push_back(fatal("L3", ptr, "Globals section " + section + " is not supported"));
      continue;
    }
    if (!body.is_object()) continue;
    for (const auto& [prop, value] : body.items()) {
      if (!data.supported_globals.count(section + "." + prop)) {
        out.push_back(fatal("L3", ptr + "/" + pointer_token(prop),
                            "property " + prop + " is not supported in Globals." + section));
      }
    }
  }

  // L4 dangling references.
  std::set<std::string> ids;
  for (const auto& r : t.resources) ids.insert(r.logical_id);
  std::set<std::string> known = ids;
  for (const auto& p : t.parameter_names()) known.insert(p);
  // Resources SAM generates implicitly.
  known.insert("ServerlessRestApi");
  known.insert("ServerlessHttpApi");
  for (const auto& r : t.resources) {
    if (r.type == "AWS::Serverless::Function") known.insert(r.logical_id + "Role");
    if (r.type == "AWS::Serverless::Api") {
      std::string stage = r.properties.contains("StageName") && r.properties["StageName"].is_string()
                              ? r.properties["StageName"].get<std::string>()
                              : "";
      known.insert(r.logical_id + stage + "Stage");
      known.insert(r.logical_id + "Deployment");
    }
  }
  for (const auto& ref : references(t)) {
    if (ref.kind == RefKind::kRef && is_pseudo_parameter(ref.target)) continue;
    if (ref.kind == RefKind::kSub && starts_with(ref.target, "AWS::")) {
      if (is_pseudo_parameter(ref.target)) continue;
    }
    if (known.count(ref.target)) continue;
    const char* form = ref.kind == RefKind::kRef ? "Ref" : ref.kind == RefKind::kGetAtt ? "GetAtt" : "Sub";
    out.push_back(fatal("L4", ref.pointer,
                        std::string(form) + " in " + ref.from + " names undefined resource " + ref.target));
  }

  // L5 required Function properties.
  auto from_globals = [&](const char* prop) {
    return t.globals.contains("Function") && t.globals["Function"].is_object() && t.globals["Function"].contains(prop);
  };
  for (const auto& r : t.resources) {
    if (r.type != "AWS::Serverless::Function") continue;
    std::string base = "/Resources/" + pointer_token(r.logical_id) + "/Properties";
    if (r.properties.value("PackageType", std::string()) == "Image") continue;
    for (const char* prop : {"Handler", "Runtime"}) {
      if (!r.properties.contains(prop) && !from_globals(prop)) {
        out.push_back(fatal("L5", base, r.logical_id + " is missing required property " + prop));
      }
    }
    if (!r.properties.contains("CodeUri") && !r.properties.contains("InlineCode") && !from_globals("CodeUri")) {
      out.push_back(fatal("L5", base, r.logical_id + " is missing required property CodeUri"));
    }
    const OJson* runtime = nullptr;
    std::string runtime_ptr = base + "/Runtime";
    if (r.properties.contains("Runtime")) {
      runtime = &r.properties["Runtime"];
    } else if (from_globals("Runtime")) {
      runtime = &t.globals["Function"]["Runtime"];
      runtime_ptr = "/Globals/Function/Runtime";
    }
    if (runtime && runtime->is_string() && !data.supported_runtimes.count(runtime->get<std::string>())) {
      out.push_back(fatal("L5", runtime_ptr,
                          r.logical_id + " uses unsupported runtime " + runtime->get<std::string>()));
    }
  }

  for (const auto& w : t.parse_warnings) out.push_back(w);
  return out;
}

int exit_code_for(const std::vector<Finding>& findings) {
  int code = 0;
  for (const auto& f : findings) {
    if (f.severity == Severity::kFatal) return 2;
    code = 1;
  }
  return code;
}

}  // namespace slsmig::sam

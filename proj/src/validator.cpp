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

#include "slsmig/validator.hpp"

#include <algorithm>
#include <regex>
#include <set>
#include <sstream>

#include "slsmig/naming.hpp"
#include "slsmig/synth.hpp"

namespace slsmig::validator {

using planner::Blueprint;
using planner::LambdaSpec;
using planner::Trigger;
using sam::Finding;
using sam::OJson;
using sam::Severity;

const std::vector<std::string>& check_ids() {
  static const std::vector<std::string> ids = {"C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10", "C11"};
  return ids;
}

char phase_of(const std::string& id) {
  static const std::map<std::string, char> phases = {{"C1", 'A'}, {"C2", 'A'}, {"C3", 'B'},  {"C4", 'B'},
                                                     {"C5", 'B'}, {"C6", 'B'}, {"C7", 'C'},  {"C8", 'C'},
                                                     {"C9", 'D'}, {"C10", 'D'}, {"C11", 'E'}};
  auto it = phases.find(id);
  return it == phases.end() ? '?' : it->second;
}

std::vector<std::string> env_reads(const std::string& source) {
  static const std::regex patterns[] = {
      std::regex(R"(os\.environ\[\s*['"]([A-Za-z_][A-Za-z0-9_]*)['"]\s*\])"),
      std::regex(R"(os\.environ\.get\(\s*['"]([A-Za-z_][A-Za-z0-9_]*)['"])"),
      std::regex(R"(os\.getenv\(\s*['"]([A-Za-z_][A-Za-z0-9_]*)['"])"),
      std::regex(R"(process\.env\.([A-Za-z_][A-Za-z0-9_]*))"),
      std::regex(R"(process\.env\[\s*['"]([A-Za-z_][A-Za-z0-9_]*)['"]\s*\])"),
  };
  std::set<std::string> out;
  for (const auto& re : patterns) {
    for (auto it = std::sregex_iterator(source.begin(), source.end(), re); it != std::sregex_iterator(); ++it) {
      out.insert((*it)[1].str());
    }
  }
  return {out.begin(), out.end()};
}

Workspace load_workspace(const fs::path& root) {
  std::error_code ec;
  for (const char* name : {"blueprint.json", "template.yaml"}) {
    if (!fs::is_regular_file(root / name, ec)) {
      throw Error(ErrorCode::kPrecondition, "missing artifact " + (root / name).string());
    }
  }
  if (!fs::is_directory(root / "lambdas", ec)) {
    throw Error(ErrorCode::kPrecondition, "missing code tree " + (root / "lambdas").string());
  }
  Workspace ws;
  ws.root = root;
  try {
    ws.blueprint = planner::blueprint_from_json(Json::parse(read_text_file(root / "blueprint.json")));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kParse, "blueprint.json is not valid JSON: " + std::string(e.what()));
  }
  ws.tmpl = sam::load_template(root / "template.yaml");
  return ws;
}

namespace {

enum class Service { kDynamo, kS3, kSqs, kEvents, kLambda };

const char* service_name(Service s) {
  switch (s) {
    case Service::kDynamo:
      return "DynamoDB";
    case Service::kS3:
      return "S3";
    case Service::kSqs:
      return "SQS";
    case Service::kEvents:
      return "EventBridge";
    case Service::kLambda:
      return "Lambda";
  }
  return "";
}

// Lexical SDK-call table: identifiers that imply a service is used.
const std::vector<std::pair<Service, std::regex>>& sdk_table() {
  static const std::vector<std::pair<Service, std::regex>> table = {
      {Service::kDynamo, std::regex(R"(boto3\.(resource|client)\(\s*['"]dynamodb['"])")},
      {Service::kDynamo, std::regex(R"(@aws-sdk/(client-dynamodb|lib-dynamodb)|DynamoDB\.DocumentClient)")},
      {Service::kS3, std::regex(R"(boto3\.(resource|client)\(\s*['"]s3['"])")},
      {Service::kS3, std::regex(R"(@aws-sdk/client-s3)")},
      {Service::kSqs, std::regex(R"(\.send_message(_batch)?\()")},
      {Service::kSqs, std::regex(R"(SendMessage(Batch)?Command)")},
      {Service::kEvents, std::regex(R"(\.put_events\()")},
      {Service::kEvents, std::regex(R"(PutEventsCommand)")},
      {Service::kLambda, std::regex(R"(boto3\.client\(\s*['"]lambda['"])")},
      {Service::kLambda, std::regex(R"(InvokeCommand)")},
  };
  return table;
}

const std::map<std::string, Service>& policy_services() {
  static const std::map<std::string, Service> m = {
      {"DynamoDBCrudPolicy", Service::kDynamo}, {"DynamoDBReadPolicy", Service::kDynamo},
      {"DynamoDBWritePolicy", Service::kDynamo}, {"S3CrudPolicy", Service::kS3},
      {"S3ReadPolicy", Service::kS3},           {"S3WritePolicy", Service::kS3},
      {"S3FullAccessPolicy", Service::kS3},     {"SQSSendMessagePolicy", Service::kSqs},
      {"EventBridgePutEventsPolicy", Service::kEvents}, {"LambdaInvokePolicy", Service::kLambda},
  };
  return m;
}

struct PolicyUse {
  Service service;
  std::string target;  // logical id the policy is scoped to, "" when unscoped
};

std::vector<PolicyUse> policies_of(const sam::Resource& fn) {
  std::vector<PolicyUse> out;
  if (!fn.properties.contains("Policies")) return out;
  OJson list = fn.properties["Policies"];
  if (!list.is_array()) list = OJson::array({list});
  for (const auto& p : list) {
    if (!p.is_object() || p.size() != 1) continue;
    const auto& [name, body] = *p.items().begin();
    auto it = policy_services().find(name);
    if (it == policy_services().end()) continue;
    PolicyUse use{it->second, ""};
    if (body.is_object()) {
      for (const auto& [k, v] : body.items()) {
        if (auto ref = sam::as_ref(v)) use.target = ref->target;
      }
    }
    out.push_back(use);
  }
  return out;
}

bool has_policy(const sam::Resource& fn, Service s, const std::string& target) {
  for (const auto& p : policies_of(fn)) {
    if (p.service == s && (target.empty() || p.target == target)) return true;
  }
  return false;
}

OJson env_of(const sam::Resource& fn) {
  if (fn.properties.contains("Environment") && fn.properties["Environment"].is_object() &&
      fn.properties["Environment"].contains("Variables") && fn.properties["Environment"]["Variables"].is_object()) {
    return fn.properties["Environment"]["Variables"];
  }
  return OJson::object();
}

std::vector<std::pair<std::string, OJson>> events_of(const sam::Resource& fn) {
  std::vector<std::pair<std::string, OJson>> out;
  if (!fn.properties.contains("Events") || !fn.properties["Events"].is_object()) return out;
  for (const auto& [name, ev] : fn.properties["Events"].items()) out.emplace_back(name, ev);
  return out;
}

std::string event_type(const OJson& ev) { return ev.is_object() ? ev.value("Type", std::string()) : ""; }

OJson event_props(const OJson& ev) {
  return ev.is_object() && ev.contains("Properties") && ev["Properties"].is_object() ? ev["Properties"]
                                                                                     : OJson::object();
}

std::string normalize_dir(std::string p) {
  while (starts_with(p, "./")) p = p.substr(2);
  while (!p.empty() && p.back() == '/') p.pop_back();
  return p;
}

bool is_code_file(const fs::path& p) {
  static const std::set<std::string> exts = {".py", ".js", ".mjs", ".cjs", ".ts"};
  return exts.count(p.extension().string()) > 0;
}

class Checker {
 public:
  explicit Checker(const Workspace& ws) : ws_(ws), b_(ws.blueprint), t_(ws.tmpl) {
    for (const auto& s : b_.lambda_functions) {
      std::string dir = (ws_.root / "lambdas" / s.name).string();
      std::error_code ec;
      if (!fs::is_directory(dir, ec)) continue;
      std::string all;
      for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file() && is_code_file(e.path())) all += read_text_file(e.path()) + "\n";
      }
      code_[s.name] = all;
    }
  }

  std::vector<Finding> run() {
    c1();
    c2();
    c3();
    c4();
    c5();
    c6();
    c7();
    c8();
    c9();
    c10();
    c11();
    std::stable_sort(findings_.begin(), findings_.end(), [](const Finding& a, const Finding& b) {
      auto pos = [](const std::string& id) {
        const auto& ids = check_ids();
        return std::find(ids.begin(), ids.end(), id) - ids.begin();
      };
      return pos(a.check_id) < pos(b.check_id);
    });
    return findings_;
  }

 private:
  const sam::Resource* fn(const LambdaSpec& s) const { return t_.find(naming::function_logical_id(s.name)); }

  static std::string res_ptr(const std::string& id) { return "/Resources/" + sam::pointer_token(id); }

  void add(const char* check, Severity sev, const std::string& artifact, const std::string& pointer,
           const std::string& message, Json fix = nullptr, const std::string& hint = "") {
    Finding f;
    f.check_id = check;
    f.severity = sev;
    f.artifact = artifact;
    f.pointer = pointer;
    f.message = message;
    f.mechanical_fix = std::move(fix);
    f.fix_hint = hint;
    findings_.push_back(std::move(f));
  }

  void fatal(const char* check, const std::string& artifact, const std::string& pointer, const std::string& message,
             Json fix = nullptr, const std::string& hint = "") {
    add(check, Severity::kFatal, artifact, pointer, message, std::move(fix), hint);
  }

  // C1: lambdas/ directories, blueprint specs and template Functions agree.
  void c1() {
    std::set<std::string> dirs;
    for (const auto& e : fs::directory_iterator(ws_.root / "lambdas")) {
      if (e.is_directory()) dirs.insert(e.path().filename().string());
    }
    std::set<std::string> specs;
    for (const auto& s : b_.lambda_functions) {
      specs.insert(s.name);
      if (!dirs.count(s.name)) {
        fatal("C1", "lambdas/" + s.name, "", "blueprint function " + s.name + " has no code directory", nullptr,
              "generate lambdas/" + s.name + "/ or remove the spec");
      }
      if (!fn(s)) {
        fatal("C1", "template.yaml", "/Resources",
              "blueprint function " + s.name + " has no Function " + naming::function_logical_id(s.name), nullptr,
              "add the Function resource");
      }
    }
    for (const auto& d : dirs) {
      if (!specs.count(d)) {
        fatal("C1", "lambdas/" + d, "", "code directory lambdas/" + d + " matches no blueprint function", nullptr,
              "delete the directory or add a blueprint spec");
      }
    }
    std::set<std::string> ids;
    for (const auto& s : b_.lambda_functions) ids.insert(naming::function_logical_id(s.name));
    for (const auto* r : t_.of_kind(sam::ResourceKind::kFunction)) {
      if (!ids.count(r->logical_id)) {
        fatal("C1", "template.yaml", res_ptr(r->logical_id),
              "Function " + r->logical_id + " matches no blueprint function", nullptr, "remove the Function");
      }
    }
  }

  // C2: CodeUri names the function's own existing directory.
  void c2() {
    for (const auto& s : b_.lambda_functions) {
      const auto* r = fn(s);
      if (!r) continue;
      std::string ptr = res_ptr(r->logical_id) + "/Properties/CodeUri";
      if (!r->properties.contains("CodeUri") || !r->properties["CodeUri"].is_string()) {
        fatal("C2", "template.yaml", ptr, r->logical_id + " has no CodeUri path", nullptr,
              "set CodeUri to " + synth::code_uri(s.name));
        continue;
      }
      std::string uri = normalize_dir(r->properties["CodeUri"].get<std::string>());
      std::error_code ec;
      if (!fs::is_directory(ws_.root / uri, ec)) {
        fatal("C2", "template.yaml", ptr, r->logical_id + " CodeUri " + uri + " does not exist", nullptr,
              "set CodeUri to " + synth::code_uri(s.name));
      } else if (uri != normalize_dir(synth::code_uri(s.name))) {
        fatal("C2", "template.yaml", ptr, r->logical_id + " CodeUri " + uri + " is not its own code directory",
              nullptr, "set CodeUri to " + synth::code_uri(s.name));
      }
    }
  }

  // C3: Handler property resolves to an exported function.
  void c3() {
    for (const auto& s : b_.lambda_functions) {
      const auto* r = fn(s);
      if (!r) continue;
      std::string ptr = res_ptr(r->logical_id) + "/Properties/Handler";
      std::string handler = r->properties.value("Handler", std::string());
      auto dot = handler.rfind('.');
      if (handler.empty() || dot == std::string::npos) {
        fatal("C3", "template.yaml", ptr, r->logical_id + " Handler '" + handler + "' is not module.function");
        continue;
      }
      std::string module = handler.substr(0, dot);
      std::string func = handler.substr(dot + 1);
      fs::path dir = ws_.root / "lambdas" / s.name;
      bool node = synth::is_node(s.runtime);
      std::vector<std::string> candidates = node ? std::vector<std::string>{".js", ".cjs", ".mjs"}
                                                 : std::vector<std::string>{".py"};
      std::optional<fs::path> file;
      for (const auto& ext : candidates) {
        std::error_code ec;
        if (fs::is_regular_file(dir / (module + ext), ec)) {
          file = dir / (module + ext);
          break;
        }
      }
      if (!file) {
        fatal("C3", "lambdas/" + s.name, "", "handler module " + module + " not found for " + r->logical_id, nullptr,
              "create the handler file or fix Handler");
        continue;
      }
      std::string src = read_text_file(*file);
      std::string q = func;
      std::regex def = node ? std::regex("(exports\\." + q + "\\s*=)|(module\\.exports\\s*=\\s*\\{[^}]*\\b" + q +
                                         "\\b)|(export\\s+(async\\s+)?(function\\s+|const\\s+)" + q + "\\b)")
                            : std::regex("(^|\\n)(async\\s+)?def\\s+" + q + "\\s*\\(");
      if (!std::regex_search(src, def)) {
        fatal("C3", relative_path(*file, ws_.root), "",
              "handler function " + func + " is not defined in " + file->filename().string(), nullptr,
              "rename the entry function or fix Handler");
      }
    }
  }

  // C4: every variable the blueprint declares or the code reads is set.
  void c4() {
    const auto& reserved = sam::default_lint_data().reserved_env_vars;
    std::set<std::string> global_vars;
    if (t_.globals.contains("Function") && t_.globals["Function"].is_object()) {
      const OJson& g = t_.globals["Function"];
      if (g.contains("Environment") && g["Environment"].contains("Variables")) {
        for (const auto& [k, v] : g["Environment"]["Variables"].items()) global_vars.insert(k);
      }
    }
    for (const auto& s : b_.lambda_functions) {
      const auto* r = fn(s);
      if (!r) continue;
      OJson env = env_of(*r);
      std::vector<std::string> required = s.env_vars;
      for (const auto& v : env_reads(code_[s.name])) {
        if (!reserved.count(v) && std::find(required.begin(), required.end(), v) == required.end()) {
          required.push_back(v);
        }
      }
      for (const auto& v : required) {
        if (env.contains(v) || global_vars.count(v)) continue;
        bool declared = std::find(s.env_vars.begin(), s.env_vars.end(), v) != s.env_vars.end();
        Json fix = nullptr;
        if (declared) {
          fix = {{"op", "inject_env_var"},
                 {"function", r->logical_id},
                 {"name", v},
                 {"value", Json::parse(synth::env_var_value(b_, v).dump())}};
        }
        fatal("C4", "template.yaml", res_ptr(r->logical_id) + "/Properties/Environment/Variables",
              r->logical_id + " does not set environment variable " + v, fix,
              declared ? "" : "the handler reads " + v + " but the blueprint does not declare it");
      }
    }
  }

  // C5: policies match SDK usage per resource.
  void c5() {
    for (const auto& s : b_.lambda_functions) {
      const auto* r = fn(s);
      if (!r) continue;
      const std::string& code = code_[s.name];
      std::set<Service> used;
      for (const auto& [svc, re] : sdk_table()) {
        if (std::regex_search(code, re)) used.insert(svc);
      }
      std::string ptr = res_ptr(r->logical_id) + "/Properties/Policies";
      std::set<Service> scoped;
      for (const auto& v : env_reads(code)) {
        OJson policy = synth::policy_for_env_var(b_, v);
        if (policy.is_null()) continue;
        auto svc = policy_services().at(policy.items().begin().key());
        if (!used.count(svc)) continue;
        scoped.insert(svc);
        std::string target;
        for (const auto& [k, val] : policy.items().begin().value().items()) {
          if (auto ref = sam::as_ref(val)) target = ref->target;
        }
        if (has_policy(*r, svc, target)) continue;
        fatal("C5", "template.yaml", ptr,
              r->logical_id + " calls " + service_name(svc) + " via " + v + " without a matching policy",
              {{"op", "add_policy"}, {"function", r->logical_id}, {"policy", Json::parse(policy.dump())}});
      }
      for (Service svc : used) {
        if (scoped.count(svc) || has_policy(*r, svc, "")) continue;
        fatal("C5", "template.yaml", ptr,
              r->logical_id + " calls " + service_name(svc) + " but has no " + service_name(svc) + " policy", nullptr,
              "add a least-privilege policy for the resource the handler uses");
      }
      for (const auto& p : policies_of(*r)) {
        if (!used.count(p.service)) {
          add("C5", Severity::kWarning, "template.yaml", ptr,
              r->logical_id + " grants " + service_name(p.service) + " access its handler never uses", nullptr,
              "remove the unused policy");
        }
      }
    }
  }

  // C6: shared layer references and directory nesting.
  void c6() {
    std::set<std::string> layer_ids;
    for (const auto* r : t_.of_kind(sam::ResourceKind::kLayerVersion)) layer_ids.insert(r->logical_id);
    bool any = false;
    for (const auto& s : b_.lambda_functions) {
      const auto* r = fn(s);
      if (!r) continue;
      bool refs = false;
      if (r->properties.contains("Layers") && r->properties["Layers"].is_array()) {
        for (const auto& l : r->properties["Layers"]) {
          auto ref = sam::as_ref(l);
          if (ref && layer_ids.count(ref->target)) refs = true;
        }
      }
      any = any || s.uses_shared_layer;
      if (s.uses_shared_layer && !refs) {
        fatal("C6", "template.yaml", res_ptr(r->logical_id) + "/Properties",
              r->logical_id + " uses the shared layer but does not reference it", nullptr,
              "add !Ref " + std::string(naming::kLayerLogicalId) + " to Layers");
      } else if (!s.uses_shared_layer && refs) {
        fatal("C6", "template.yaml", res_ptr(r->logical_id) + "/Properties/Layers",
              r->logical_id + " references the shared layer but its spec does not use it", nullptr,
              "remove the layer reference or set uses_shared_layer");
      }
    }
    if (!any) return;
    const sam::Resource* layer = t_.find(naming::kLayerLogicalId);
    if (!layer && !layer_ids.empty()) layer = t_.find(*layer_ids.begin());
    if (!layer) {
      fatal("C6", "template.yaml", "/Resources", "shared layer resource is missing", nullptr,
            "add the " + std::string(naming::kLayerLogicalId) + " LayerVersion");
      return;
    }
    std::string ptr = res_ptr(layer->logical_id) + "/Properties/ContentUri";
    const char* key = layer->properties.contains("ContentUri") ? "ContentUri" : "Content";
    if (!layer->properties.contains(key) || !layer->properties[key].is_string()) {
      fatal("C6", "template.yaml", ptr, "shared layer has no ContentUri path");
      return;
    }
    std::string content = normalize_dir(layer->properties[key].get<std::string>());
    fs::path dir = ws_.root / content;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
      fatal("C6", "template.yaml", ptr, "shared layer directory " + content + " does not exist");
      return;
    }
    std::string runtime = b_.lambda_functions.front().runtime;
    std::string expected = synth::layer_subdir(runtime);
    std::vector<fs::path> misplaced;
    bool nested = false;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
      if (!e.is_regular_file() || !is_code_file(e.path())) continue;
      std::string rel = relative_path(e.path(), dir);
      if (starts_with(rel, expected + "/")) {
        nested = true;
      } else {
        misplaced.push_back(e.path());
      }
    }
    std::sort(misplaced.begin(), misplaced.end());
    for (const auto& m : misplaced) {
      std::string from = relative_path(m, ws_.root);
      std::string to = content + "/" + expected + "/" + m.filename().string();
      fatal("C6", from, "", "layer file " + from + " is outside the runtime directory " + expected + "/",
            {{"op", "fix_layer_nesting"}, {"from", from}, {"to", to}});
    }
    if (misplaced.empty() && !nested) {
      fatal("C6", content, "", "shared layer has no content under " + expected + "/", nullptr,
            "place shared modules under " + content + "/" + expected + "/");
    }
  }

  std::vector<std::pair<std::string, OJson>> api_events(const sam::Resource& r) const {
    std::vector<std::pair<std::string, OJson>> out;
    for (const auto& [name, ev] : events_of(r)) {
      std::string type = event_type(ev);
      if (type == "Api" || type == "HttpApi") out.emplace_back(name, ev);
    }
    return out;
  }

  // C7: Api events reproduce the blueprint's routes exactly.
  void c7() {
    for (const auto& s : b_.lambda_functions) {
      const auto* r = fn(s);
      if (!r) continue;
      auto events = api_events(*r);
      std::string base = res_ptr(r->logical_id) + "/Properties/Events";
      if (s.trigger != Trigger::kHttp) {
        for (const auto& [name, ev] : events) {
          fatal("C7", "template.yaml", base + "/" + sam::pointer_token(name),
                r->logical_id + " is " + planner::trigger_name(s.trigger) + "-triggered but has an Api event", nullptr,
                "remove the Api event");
        }
        continue;
      }
      bool matched = false;
      for (const auto& [name, ev] : events) {
        OJson p = event_props(ev);
        std::string path = p.value("Path", std::string());
        std::string method = to_upper(p.value("Method", std::string()));
        if (path == s.path && (method == s.method || method == "ANY") && !matched) {
          matched = true;
          continue;
        }
        fatal("C7", "template.yaml", base + "/" + sam::pointer_token(name),
              r->logical_id + " exposes " + method + " " + path + " which is not its blueprint route " + s.method +
                  " " + s.path,
              nullptr, "set the event to " + s.method + " " + s.path);
      }
      if (!matched && events.empty()) {
        fatal("C7", "template.yaml", base, r->logical_id + " has no Api event for " + s.method + " " + s.path,
              nullptr, "add an Api event for " + s.method + " " + s.path);
      }
    }
  }

  // C8: per-endpoint authorizer overrides.
  void c8() {
    std::map<std::string, std::string> defaults;  // api id -> default authorizer
    for (const auto* api : t_.of_kind(sam::ResourceKind::kApi)) {
      if (api->properties.contains("Auth") && api->properties["Auth"].is_object()) {
        defaults[api->logical_id] = api->properties["Auth"].value("DefaultAuthorizer", std::string());
      }
    }
    for (const auto& s : b_.lambda_functions) {
      const auto* r = fn(s);
      if (!r || s.trigger != Trigger::kHttp) continue;
      for (const auto& [name, ev] : api_events(*r)) {
        OJson p = event_props(ev);
        std::string api_id = naming::kApiLogicalId;
        if (auto ref = p.contains("RestApiId") ? sam::as_ref(p["RestApiId"]) : std::nullopt) api_id = ref->target;
        std::string def = defaults.count(api_id) ? defaults[api_id] : "";
        std::string authorizer;
        if (p.contains("Auth") && p["Auth"].is_object()) authorizer = p["Auth"].value("Authorizer", std::string());
        std::string ptr = res_ptr(r->logical_id) + "/Properties/Events/" + sam::pointer_token(name) + "/Properties";
        if (!def.empty()) {
          if (s.auth == "none" && authorizer != "NONE") {
            fatal("C8", "template.yaml", ptr,
                  r->logical_id + " is public but inherits default authorizer " + def, nullptr,
                  "add Auth: {Authorizer: NONE} to the event");
          } else if (s.auth == "required" && authorizer == "NONE") {
            fatal("C8", "template.yaml", ptr, r->logical_id + " requires auth but overrides the authorizer to NONE",
                  nullptr, "remove the NONE override");
          }
        } else if (s.auth == "required" && (authorizer.empty() || authorizer == "NONE")) {
          fatal("C8", "template.yaml", ptr, r->logical_id + " requires auth but no authorizer is attached", nullptr,
                "attach the Cognito authorizer to the event");
        }
      }
    }
  }

  // C9: queues exist and producers/consumers are wired.
  void c9() {
    for (const auto& q : b_.sqs_queues) {
      std::string qid = naming::queue_logical_id(q.name);
      const sam::Resource* qr = t_.find(qid);
      if (!qr || qr->kind != sam::ResourceKind::kQueue) {
        fatal("C9", "template.yaml", "/Resources", "queue " + qid + " is not declared", nullptr,
              "add an AWS::SQS::Queue named " + qid);
        continue;
      }
      for (const auto& producer : q.producers) {
        const LambdaSpec* ps = b_.find(producer);
        const sam::Resource* pr = ps ? fn(*ps) : nullptr;
        if (!pr) continue;
        if (!env_of(*pr).contains(q.env_var)) {
          fatal("C9", "template.yaml", res_ptr(pr->logical_id) + "/Properties/Environment/Variables",
                pr->logical_id + " produces to " + qid + " but lacks " + q.env_var,
                {{"op", "inject_env_var"},
                 {"function", pr->logical_id},
                 {"name", q.env_var},
                 {"value", Json::parse(synth::env_var_value(b_, q.env_var).dump())}});
        }
        if (!has_policy(*pr, Service::kSqs, qid)) {
          fatal("C9", "template.yaml", res_ptr(pr->logical_id) + "/Properties/Policies",
                pr->logical_id + " produces to " + qid + " without SQSSendMessagePolicy",
                {{"op", "add_policy"},
                 {"function", pr->logical_id},
                 {"policy", Json::parse(synth::policy_for_env_var(b_, q.env_var).dump())}});
        }
      }
      const LambdaSpec* cs = b_.find(q.consumer);
      const sam::Resource* cr = cs ? fn(*cs) : nullptr;
      if (!cr) {
        fatal("C9", "blueprint.json", "/sqs_queues", "queue " + q.name + " has no consumer function", nullptr,
              "declare the consumer spec");
        continue;
      }
      bool wired = false;
      for (const auto& [name, ev] : events_of(*cr)) {
        if (event_type(ev) != "SQS") continue;
        OJson p = event_props(ev);
        auto ref = p.contains("Queue") ? sam::as_ref(p["Queue"]) : std::nullopt;
        if (ref && ref->target == qid) wired = true;
      }
      if (!wired) {
        fatal("C9", "template.yaml", res_ptr(cr->logical_id) + "/Properties",
              cr->logical_id + " consumes " + qid + " but has no SQS event source", nullptr,
              "add an SQS event with Queue: !GetAtt " + qid + ".Arn");
      }
    }
  }

  // C10: rule targets and invoke permissions.
  void c10() {
    for (const auto& rule : b_.eventbridge_rules) {
      std::string rid = naming::rule_logical_id(rule.name);
      const sam::Resource* rr = t_.find(rid);
      if (!rr || rr->kind != sam::ResourceKind::kRule) {
        fatal("C10", "template.yaml", "/Resources", "rule " + rid + " is not declared", nullptr,
              "add an AWS::Events::Rule named " + rid);
        continue;
      }
      std::set<std::string> targets;
      if (rr->properties.contains("Targets") && rr->properties["Targets"].is_array()) {
        for (const auto& t : rr->properties["Targets"]) {
          if (t.is_object() && t.contains("Arn")) {
            if (auto ref = sam::as_ref(t["Arn"])) targets.insert(ref->target);
          }
        }
      }
      for (const auto& target : rule.targets) {
        std::string fid = naming::function_logical_id(target);
        if (!targets.count(fid)) {
          fatal("C10", "template.yaml", res_ptr(rid) + "/Properties/Targets",
                "rule " + rid + " does not target " + fid, nullptr, "add " + fid + " to the rule targets");
        }
        bool permitted = false;
        for (const auto* p : t_.of_kind(sam::ResourceKind::kPermission)) {
          auto fref = p->properties.contains("FunctionName") ? sam::as_ref(p->properties["FunctionName"])
                                                             : std::nullopt;
          auto sref = p->properties.contains("SourceArn") ? sam::as_ref(p->properties["SourceArn"]) : std::nullopt;
          if (fref && fref->target == fid && sref && sref->target == rid &&
              p->properties.value("Principal", std::string()) == "events.amazonaws.com") {
            permitted = true;
          }
        }
        if (!permitted) {
          std::string pid = naming::permission_logical_id(rule.name, target);
          Json props = {{"Action", "lambda:InvokeFunction"},
                        {"FunctionName", {{"Ref", fid}}},
                        {"Principal", "events.amazonaws.com"},
                        {"SourceArn", {{"Fn::GetAtt", {rid, "Arn"}}}}};
          fatal("C10", "template.yaml", "/Resources",
                "no permission lets rule " + rid + " invoke " + fid,
                {{"op", "add_permission"}, {"logical_id", pid}, {"properties", props}});
        }
      }
      const LambdaSpec* ps = b_.find(rule.producer);
      const sam::Resource* pr = ps ? fn(*ps) : nullptr;
      if (pr && !has_policy(*pr, Service::kEvents, "")) {
        fatal("C10", "template.yaml", res_ptr(pr->logical_id) + "/Properties/Policies",
              pr->logical_id + " publishes to " + rid + " without EventBridgePutEventsPolicy",
              {{"op", "add_policy"},
               {"function", pr->logical_id},
               {"policy", Json::parse(synth::policy_for_env_var(b_, naming::kEventBusEnvVar).dump())}});
      }
    }
  }

  // C11: dependency manifests and module system.
  void c11() {
    for (const auto& s : b_.lambda_functions) {
      fs::path dir = ws_.root / "lambdas" / s.name;
      std::error_code ec;
      if (!fs::is_directory(dir, ec)) continue;
      std::string rel = "lambdas/" + s.name;
      bool node = synth::is_node(s.runtime);
      const auto& builtins = sam::builtin_packages(node ? "nodejs" : "python");
      if (!node) {
        fs::path req = dir / "requirements.txt";
        if (!fs::is_regular_file(req, ec)) continue;
        static const std::regex name_re(R"(^\s*([A-Za-z0-9_.\-]+))");
        int kept = 0;
        for (const auto& line : split_lines(read_text_file(req))) {
          std::string tline = trim(line);
          if (tline.empty() || tline[0] == '#' || tline[0] == '-') continue;
          std::smatch m;
          if (!std::regex_search(tline, m, name_re)) continue;
          std::string pkg = to_lower(m[1].str());
          if (builtins.count(pkg)) {
            fatal("C11", rel + "/requirements.txt", "", "requirements.txt declares runtime built-in " + pkg, nullptr,
                  "remove " + pkg + "; the Lambda runtime provides it");
          } else {
            ++kept;
          }
        }
        if (kept == 0) {
          fatal("C11", rel + "/requirements.txt", "", "requirements.txt has no dependencies after stripping built-ins",
                nullptr, "delete the empty manifest");
        }
        continue;
      }
      const std::string& code = code_[s.name];
      static const std::regex esm(R"((^|\n)\s*(import\s+[\w{*][^\n]*\sfrom\s|import\s+['"]|export\s+(default|const|function|async|\{)))");
      if (std::regex_search(code, esm)) {
        fatal("C11", rel, "", s.name + " uses ES module syntax; handlers must be CommonJS", nullptr,
              "rewrite imports with require()");
      }
      static const std::regex req_re(R"(require\(\s*['"]([^'"./][^'"]*)['"]\s*\))");
      std::set<std::string> needed;
      for (auto it = std::sregex_iterator(code.begin(), code.end(), req_re); it != std::sregex_iterator(); ++it) {
        std::string mod = (*it)[1];
        std::string pkg = mod[0] == '@' ? mod.substr(0, mod.find('/', mod.find('/') + 1)) : mod.substr(0, mod.find('/'));
        if (starts_with(pkg, "node:") || builtins.count(pkg) || pkg == naming::kSharedModule) continue;
        needed.insert(pkg);
      }
      fs::path pkg_path = dir / "package.json";
      Json pkg = Json::object();
      bool has_manifest = fs::is_regular_file(pkg_path, ec);
      if (has_manifest) {
        try {
          pkg = Json::parse(read_text_file(pkg_path));
        } catch (const Json::parse_error&) {
          fatal("C11", rel + "/package.json", "", "package.json is not valid JSON");
          continue;
        }
        if (pkg.value("type", std::string()) == "module") {
          fatal("C11", rel + "/package.json", "/type", "package.json declares \"type\": \"module\"", nullptr,
                "remove the type field; handlers must be CommonJS");
        }
      }
      Json deps = pkg.value("dependencies", Json::object());
      for (const auto& [name, version] : deps.items()) {
        if (builtins.count(name)) {
          fatal("C11", rel + "/package.json", "/dependencies/" + sam::pointer_token(name),
                "package.json declares runtime built-in " + name, nullptr, "remove " + name);
        }
      }
      for (const auto& n : needed) {
        if (!deps.contains(n)) {
          fatal("C11", has_manifest ? rel + "/package.json" : rel, has_manifest ? "/dependencies" : "",
                s.name + " requires " + n + " but does not declare it", nullptr, "declare " + n + " in package.json");
        }
      }
      if (has_manifest && deps.empty()) {
        fatal("C11", rel + "/package.json", "", "package.json has no dependencies", nullptr, "delete the manifest");
      }
    }
  }

  const Workspace& ws_;
  const Blueprint& b_;
  const sam::Template& t_;
  std::map<std::string, std::string> code_;
  std::vector<Finding> findings_;
};

}  // namespace

namespace {

// Template as one document so finding pointers can be resolved against it.
OJson template_document(const sam::Template& t) {
  OJson doc = t.header;
  if (!t.globals.empty()) doc["Globals"] = t.globals;
  OJson resources = OJson::object();
  for (const auto& r : t.resources) {
    OJson node = r.attributes;
    node["Type"] = r.type;
    node["Properties"] = r.properties;
    resources[r.logical_id] = std::move(node);
  }
  doc["Resources"] = std::move(resources);
  if (!t.outputs.empty()) doc["Outputs"] = t.outputs;
  return doc;
}

// Shortens a pointer to its deepest prefix that exists in `doc`.
std::string resolvable_prefix(const OJson& doc, std::string pointer) {
  while (!pointer.empty()) {
    try {
      if (doc.contains(OJson::json_pointer(pointer))) return pointer;
    } catch (const OJson::exception&) {
    }
    pointer.erase(pointer.rfind('/'));
  }
  return pointer;
}

}  // namespace

ValidationReport validate(const Workspace& ws) {
  ValidationReport r;
  r.findings = Checker(ws).run();
  const OJson doc = template_document(ws.tmpl);
  for (auto& f : r.findings) {
    if (f.artifact == "template.yaml") f.pointer = resolvable_prefix(doc, f.pointer);
  }
  r.checks_run = check_ids();
  r.pass = std::none_of(r.findings.begin(), r.findings.end(),
                        [](const Finding& f) { return f.severity == Severity::kFatal; });
  return r;
}

ValidationReport validate(const fs::path& root) { return validate(load_workspace(root)); }

namespace {

OJson to_ojson(const Json& j) { return OJson::parse(j.dump()); }

void apply_one(const Json& fix, sam::Template& t, const fs::path& root) {
  std::string op = fix.at("op").get<std::string>();
  if (op == "inject_env_var" || op == "add_policy") {
    sam::Resource* r = t.find(fix.at("function").get<std::string>());
    if (!r) return;
    if (op == "inject_env_var") {
      OJson& props = r->properties;
      if (!props.contains("Environment") || !props["Environment"].is_object()) props["Environment"] = OJson::object();
      if (!props["Environment"].contains("Variables") || !props["Environment"]["Variables"].is_object()) {
        props["Environment"]["Variables"] = OJson::object();
      }
      props["Environment"]["Variables"][fix.at("name").get<std::string>()] = to_ojson(fix.at("value"));
    } else {
      OJson& props = r->properties;
      if (!props.contains("Policies") || !props["Policies"].is_array()) {
        OJson existing = props.contains("Policies") ? props["Policies"] : OJson();
        props["Policies"] = OJson::array();
        if (!existing.is_null()) props["Policies"].push_back(existing);
      }
      OJson policy = to_ojson(fix.at("policy"));
      auto& list = props["Policies"];
      if (std::find(list.begin(), list.end(), policy) == list.end()) list.push_back(policy);
    }
  } else if (op == "add_permission") {
    std::string id = fix.at("logical_id").get<std::string>();
    if (t.find(id)) return;
    sam::Resource r;
    r.logical_id = id;
    r.type = "AWS::Lambda::Permission";
    r.kind = sam::ResourceKind::kPermission;
    r.properties = to_ojson(fix.at("properties"));
    // Keep async wiring grouped: after the last Rule/Permission.
    auto pos = t.resources.end();
    for (auto it = t.resources.begin(); it != t.resources.end(); ++it) {
      if (it->kind == sam::ResourceKind::kRule || it->kind == sam::ResourceKind::kPermission) pos = it + 1;
    }
    t.resources.insert(pos, std::move(r));
  } else if (op == "fix_layer_nesting") {
    fs::path from = root / fix.at("from").get<std::string>();
    fs::path to = root / fix.at("to").get<std::string>();
    std::error_code ec;
    if (!fs::exists(from, ec) || fs::exists(to, ec)) return;
    fs::create_directories(to.parent_path());
    fs::rename(from, to);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown fix operation " + op);
  }
}

}  // namespace

ValidationReport apply_fixes(const fs::path& root, const ValidationReport& report) {
  Workspace ws = load_workspace(root);
  std::vector<Json> batch;
  std::vector<Finding> applied;
  for (const auto& f : report.findings) {
    if (f.mechanical_fix.is_null()) continue;
    applied.push_back(f);
    if (std::find(batch.begin(), batch.end(), f.mechanical_fix) == batch.end()) batch.push_back(f.mechanical_fix);
  }
  if (batch.empty()) {
    ValidationReport same = report;
    same.fix_round = 0;
    return same;
  }
  bool template_changed = false;
  for (const auto& fix : batch) {
    apply_one(fix, ws.tmpl, root);
    if (fix.at("op") != "fix_layer_nesting") template_changed = true;
  }
  if (template_changed) write_text_atomic(root / "template.yaml", sam::serialize_template(ws.tmpl));
  ValidationReport second = validate(root);
  second.fix_round = 1;
  second.applied_fixes = std::move(applied);
  return second;
}

Json to_json(const ValidationReport& r) {
  Json phases = {{"A", Json::array()}, {"B", Json::array()}, {"C", Json::array()}, {"D", Json::array()},
                 {"E", Json::array()}};
  int fatal = 0;
  int warnings = 0;
  for (const auto& f : r.findings) {
    phases[std::string(1, phase_of(f.check_id))].push_back(sam::to_json(f));
    (f.severity == Severity::kFatal ? fatal : warnings)++;
  }
  Json applied = Json::array();
  for (const auto& f : r.applied_fixes) applied.push_back(sam::to_json(f));
  return {{"status", r.pass ? "pass" : "fail"},
          {"fix_round", r.fix_round},
          {"checks_run", r.checks_run},
          {"phases", phases},
          {"counts", {{"fatal", fatal}, {"warning", warnings}, {"total", fatal + warnings}}},
          {"applied_fixes", applied}};
}

std::string summary_text(const ValidationReport& r) {
  int fatal = 0;
  for (const auto& f : r.findings) fatal += f.severity == Severity::kFatal;
  std::ostringstream o;
  o << "status: " << (r.pass ? "pass" : "fail") << "  checks: " << r.checks_run.size() << "  findings: "
    << r.findings.size() << " (" << fatal << " fatal)  fix_round: " << r.fix_round << "\n";
  for (const auto& f : r.findings) {
    o << "  [" << phase_of(f.check_id) << "/" << f.check_id << " " << sam::severity_name(f.severity) << "] "
      << f.artifact << (f.pointer.empty() ? "" : "#" + f.pointer) << ": " << f.message;
    if (!f.mechanical_fix.is_null()) o << " (fix: " << f.mechanical_fix.value("op", std::string()) << ")";
    o << "\n";
  }
  return o.str();
}

}  // namespace slsmig::validator

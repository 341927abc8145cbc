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

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "slsmig/common.hpp"
#include "slsmig/source_facts.hpp"

// The migration blueprint and the rules that derive it from an analysis report.
namespace slsmig::planner {

enum class Trigger { kHttp, kSqs, kEventBridge };
const char* trigger_name(Trigger t);

enum class Communication { kSyncInvoke, kSqs, kEventBridge };
const char* communication_name(Communication c);

inline constexpr const char* kPythonRuntime = "python3.12";
inline constexpr const char* kNodeRuntime = "nodejs22.x";

struct AsyncTarget {
  std::string kind;  // "sqs_queue" | "eventbridge_rule"
  std::string target_name;

  bool operator==(const AsyncTarget&) const = default;
};

struct LambdaSpec {
  std::string name;
  Trigger trigger = Trigger::kHttp;
  std::string method;  // http only
  std::string path;    // http only
  std::string runtime;
  std::string handler_function;  // monolith function the Lambda replaces
  std::vector<std::string> source_files;
  std::string auth = "none";  // "required" | "none"
  std::vector<AsyncTarget> publishes_to;
  std::vector<std::string> invokes;
  std::vector<std::string> env_vars;
  bool uses_shared_layer = false;
};

struct TableSpec {
  std::string name;
  std::string partition_key;
  std::string type = "S";
  std::string env_var;
};

struct BucketSpec {
  std::string name;
  std::string env_var;
};

struct QueueSpec {
  std::string name;
  std::string consumer;
  std::vector<std::string> producers;
  std::string env_var;
};

struct RuleSpec {
  std::string name;
  std::string producer;
  std::string source;
  std::string detail_type;
  std::vector<std::string> targets;
};

struct InvokePermission {
  std::string caller;
  std::string callee;
  bool operator==(const InvokePermission&) const = default;
};

struct DroppedFunction {
  std::string method;
  std::string path;
  std::string reason;
};

struct CognitoSpec {
  std::string user_pool = "UserPool";
  std::string client = "UserPoolClient";
  std::string authorizer = "CognitoAuthorizer";
};

struct ApiGatewaySpec {
  std::string name = "ServerlessApi";
  std::string stage_name = "prod";
  std::optional<std::string> default_authorizer;
  std::string cors_allow_origin = "*";
  bool cors_allow_credentials = false;
};

struct Blueprint {
  std::vector<LambdaSpec> lambda_functions;
  std::vector<TableSpec> dynamodb_tables;
  std::vector<BucketSpec> s3_buckets;
  std::optional<CognitoSpec> cognito;
  ApiGatewaySpec api_gateway;
  std::vector<QueueSpec> sqs_queues;
  std::vector<RuleSpec> eventbridge_rules;
  std::vector<InvokePermission> lambda_invoke_permissions;
  std::vector<DroppedFunction> dropped_functions;

  const LambdaSpec* find(const std::string& name) const;
  bool is_python() const;
};

struct PlannerConfig {
  std::set<std::string> auth_decorators = {"login_required", "warehouse_required", "jwt_required", "requires_auth",
                                           "authenticate"};
  std::vector<std::string> auth_paths = {"/register", "/login", "/logout"};
  // Path prefix -> domain name; longest prefix wins over the top-level directory.
  std::map<std::string, std::string> domain_map;
  // Domains treated as bundled library code rather than service domains.
  std::set<std::string> library_domains = {"common", "shared", "utils", "lib"};
  int max_depth = 3;
  int shared_layer_threshold = 3;
};

struct Endpoint {
  facts::EntryPoint entry;
  std::string auth;  // "required" | "none"
};

struct Classification {
  std::vector<Endpoint> business;
  std::vector<DroppedFunction> dropped;
};

Classification classify_endpoints(const facts::AnalysisReport& report, const std::set<std::string>& auth_decorators,
                                  const std::vector<std::string>& auth_paths);

// True when the trailing segments of `path` equal one of `auth_paths`.
bool is_auth_path(const std::string& path, const std::vector<std::string>& auth_paths);

// Transitive expansion of level-1 edges over `all_edges`, depth-capped.
// Cycles terminate through a visited set and add a "call-cycle" diagnostic.
std::vector<facts::CallEdge> trace_deep_calls(const std::vector<facts::CallEdge>& all_edges,
                                              const std::vector<facts::CallEdge>& level1_edges, int max_depth,
                                              std::vector<facts::Diagnostic>* diagnostics = nullptr);

// Throws kInvalidArgument for an empty relation. `domain_of` maps a callee file to its domain.
Communication select_communication(const std::vector<facts::CallEdge>& relation,
                                   const std::map<std::string, std::string>& callee_domains);

std::string domain_of(const std::string& file, const PlannerConfig& config);

// Tables declared in the given files (create_table style declarations).
std::vector<TableSpec> parse_table_declarations(const std::map<std::string, std::string>& files);

Blueprint plan_blueprint(const facts::AnalysisReport& report, const facts::ProjectSnapshot& project,
                         const PlannerConfig& config, std::vector<facts::Diagnostic>* diagnostics = nullptr);

// Loads the project from report.project_root.
Blueprint plan_blueprint(const facts::AnalysisReport& report, const PlannerConfig& config);

Json to_json(const Blueprint& b);
Json to_json(const LambdaSpec& s);
Blueprint blueprint_from_json(const Json& j);

}  // namespace slsmig::planner
